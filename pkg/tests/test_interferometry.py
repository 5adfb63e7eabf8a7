from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qmeas import linalg as la
from qmeas.errors import QMeasError
from qmeas.interferometry import (
    MachZehnder,
    TwoPathConfig,
    beamsplitter,
    default_phase_grid,
    duality_report,
    eraser_postselect,
    fringe_pattern,
    hardy_conditional_electron,
    hardy_detection_probabilities,
    hardy_evolution,
    hardy_initial_state,
    hardy_interaction,
    ifm_c_likelihoods,
    ifm_conclusive_fraction,
    ifm_defective_posterior,
    ifm_monte_carlo,
    ifm_repeat_until_conclusive,
    ifm_single_pass,
    ifm_variable_splitter_search,
    markers_with_overlap,
    visibility,
    zeno_ifm,
)
from qmeas.states import PureState

H = 1 / np.sqrt(2)


def config(overlap, amp_a=H, amp_b=H, grid=None):
    a, b = markers_with_overlap(overlap)
    return TwoPathConfig(amp_a, amp_b, a, b, default_phase_grid() if grid is None else grid)


@given(st.floats(0.0, 1.0))
def test_beamsplitter_unitary(t):
    b = beamsplitter(t)
    assert np.max(np.abs(b @ la.dagger(b) - np.eye(2))) <= 1e-12


def test_fringe_examples():
    assert fringe_pattern(config(1.0)).visibility == pytest.approx(1.0, abs=1e-12)
    flat = fringe_pattern(config(0.0))
    assert flat.visibility <= 1e-12 and np.ptp(flat.probabilities) <= 1e-12
    assert abs(fringe_pattern(config(0.6)).visibility - 0.6) <= 1e-6
    with pytest.raises(QMeasError):
        config(0.5, grid=np.linspace(0, 1, 5))


@given(st.floats(0.0, 1.0), st.floats(0.05, 0.95), st.floats(-np.pi, np.pi))
def test_fringe_matches_closed_form(s, weight, marker_phase):
    a, b = markers_with_overlap(s)
    b = PureState(b.amplitudes * np.array([np.exp(1j * marker_phase), 1]))
    amp_a, amp_b = np.sqrt(weight), np.sqrt(1 - weight) * np.exp(0.3j)
    cfg = TwoPathConfig(amp_a, amp_b, a, b)
    phi = cfg.phase_grid
    closed = 0.5 * (weight + (1 - weight) + 2 * np.real(np.exp(1j * phi) * np.conj(amp_a) * amp_b * a.inner(b)))
    rep = fringe_pattern(cfg)
    assert np.allclose(rep.probabilities, closed, atol=1e-12)
    assert np.all((rep.probabilities >= 0) & (rep.probabilities <= 1))
    d = duality_report(cfg)
    assert d.distinguishability**2 + d.visibility**2 <= 1 + 1e-9


@pytest.mark.parametrize("s", [0.0, 0.25, H, 1.0])
def test_duality_equality_for_pure_markers(s):
    rep = duality_report(config(s))
    assert abs(rep.distinguishability - np.sqrt(1 - s**2)) <= 1e-9
    assert abs(rep.slack) <= 1e-9


def test_duality_endpoints():
    r0, r1 = duality_report(config(0.0)), duality_report(config(1.0))
    assert (round(r0.distinguishability, 12), round(r0.visibility, 12)) == (1.0, 0.0)
    assert (round(r1.distinguishability, 12), round(r1.visibility, 12)) == (0.0, 1.0)


def test_visibility_helper():
    assert visibility(np.zeros(4)) == 0.0
    assert visibility(np.array([0.0, 1.0])) == 1.0


def test_eraser():
    rep = eraser_postselect()
    phi = rep.phases
    assert abs(rep.visibility_d1 - 1) <= 1e-9 and abs(rep.visibility_d2 - 1) <= 1e-9
    # d1 pattern is the unmarked (1 + cos)/2 pattern delayed by pi/2
    assert np.allclose(rep.pattern_d1, (1 + np.cos(phi - np.pi / 2)) / 2, atol=1e-12)
    shift = len(phi) // 2
    assert np.allclose(rep.pattern_d2, np.roll(rep.pattern_d1, shift), atol=1e-12)
    assert rep.p_select == pytest.approx((0.5, 0.5), abs=1e-12)
    assert np.ptp(rep.unconditioned) <= 1e-10
    mixture = rep.p_select[0] * rep.pattern_d1 + rep.p_select[1] * rep.pattern_d2
    assert np.allclose(mixture, rep.unconditioned, atol=1e-10)
    assert abs(rep.idler_overlap_after_splitter) <= 1e-15


def test_ifm_single_pass():
    mz = MachZehnder()
    assert np.allclose(ifm_single_pass(mz, "working").probs, (0.25, 0.25, 0.5), atol=1e-12)
    assert np.allclose(ifm_single_pass(mz, "defective").probs, (1, 0, 0), atol=1e-12)
    degenerate = ifm_single_pass(MachZehnder(1.0, 1.0), "working")
    assert degenerate["boom"] == 0.0 and degenerate["D"] == pytest.approx(1.0)
    with pytest.raises(QMeasError):
        ifm_single_pass(mz, "fizzled")


@given(st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.sampled_from(["working", "defective"]))
def test_ifm_probabilities_sum_to_one(t1, t2, bomb):
    assert abs(sum(ifm_single_pass(MachZehnder(t1, t2), bomb).probs) - 1) <= 1e-10


def test_ifm_repeat_until_conclusive():
    mz = MachZehnder()
    assert ifm_conclusive_fraction(mz) == pytest.approx(1 / 3, abs=1e-12)
    n = 100_000
    stats = ifm_monte_carlo(mz, "working", np.random.default_rng(99), n)
    assert stats.inconclusive == 0 and stats.trials == n
    assert abs(stats.certified / n - 1 / 3) <= 3 * np.sqrt((1 / 3) * (2 / 3) / n)
    rng = np.random.default_rng(5)
    runs = [ifm_repeat_until_conclusive(mz, "working", rng).outcome for _ in range(300)]
    assert set(runs) <= {"certified_working", "exploded"}
    stuck = ifm_repeat_until_conclusive(mz, "defective", rng, max_iterations=50)
    assert stuck.outcome == "max_iterations" and stuck.photons == 50


def test_ifm_defective_posterior():
    for n in (1, 2, 3):
        post = ifm_defective_posterior(n)
        assert post["defective"] == Fraction(2**n, 2**n + 1)
    p_w, p_d = ifm_c_likelihoods(MachZehnder())
    assert p_w == pytest.approx(0.5, abs=1e-15) and p_d == pytest.approx(1.0, abs=1e-15)
    p_w_raw, _ = ifm_c_likelihoods(MachZehnder(), condition_on_survival=False)
    assert p_w_raw == pytest.approx(0.25, abs=1e-15)


def test_variable_splitters_approach_half():
    res = ifm_variable_splitter_search()
    assert 0.49 <= res.best_efficiency < 0.5
    assert res.best_efficiency == pytest.approx(200 / 401, abs=1e-12)
    assert res.best_t1_sq + res.best_t2_sq == pytest.approx(1.0)


def test_zeno():
    assert zeno_ifm(1).p_detect_working <= 1e-30
    r10 = zeno_ifm(10)
    assert abs(r10.p_explode - (1 - np.cos(np.pi / 20) ** 20)) <= 1e-12
    assert r10.p_explode == pytest.approx(0.2195, abs=1e-4)
    assert zeno_ifm(500).p_detect_working > 0.995
    with pytest.raises(QMeasError):
        zeno_ifm(0)


def test_zeno_sequential_matches_closed_form():
    prev = -1.0
    for n in range(1, 65):
        r = zeno_ifm(n)
        closed = np.cos(np.pi / (2 * n)) ** (2 * n)
        assert abs(r.p_detect_working - closed) <= 1e-12
        assert abs(r.p_explode - (1 - closed)) <= 1e-12
        assert r.p_detect_defective_error <= 1e-12
        assert r.p_detect_working > prev
        prev = r.p_detect_working


def test_hardy_state():
    psi = hardy_evolution()
    assert abs(np.linalg.norm(psi.amplitudes) - 1) <= 1e-12
    assert psi.amplitude("I+I-") == 0
    assert abs(psi.amplitude("boom")) ** 2 == pytest.approx(0.25)
    expected = np.array([0.5, 0.5, 0.5, 0.0, 0.5])
    assert np.allclose(psi.amplitudes, expected)
    u = hardy_interaction()
    assert np.allclose(u @ u.conj().T, np.eye(5))
    assert np.allclose(hardy_initial_state().amplitudes[:4], 0.5)


def test_hardy_detection():
    p = hardy_detection_probabilities()
    assert abs(p["D+D-"] - 1 / 16) <= 1e-12
    assert abs(p["D+C-"] + p["D+D-"] - 1 / 8) <= 1e-12
    assert abs(p["C+C-"] - 9 / 16) <= 1e-12
    assert abs(sum(p.values()) - 1) <= 1e-12
    electron = hardy_conditional_electron("D")
    assert electron.same_ray(PureState(np.array([0.0, 1.0])))
