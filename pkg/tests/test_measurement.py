from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qmeas import linalg as la
from qmeas.decay import decay_kraus
from qmeas.errors import DimensionError, ImpossibleOutcomeError, IncompleteModelError, InvalidPOVMError
from qmeas.measurement import (
    MeasurementModel,
    evolve_nonselective,
    naimark_dilation,
    outcome_probabilities,
    povm_from_kraus,
    sample_outcome,
    sample_outcome_indices,
    selective_update,
    validate_povm,
)
from qmeas.states import KET_E, KET_G, DensityMatrix, Projector, ket_density, maximally_mixed, project_update

seeds = st.integers(min_value=0, max_value=2**32 - 1)
PLUS = ket_density(1, 1)


def random_povm(rng, d, k, rank=1):
    """Random k-element POVM on dimension d: S^{-1/2} A_i S^{-1/2} with A_i random PSD."""
    rank = max(rank, -(-d // k))
    parts = []
    for _ in range(k):
        z = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
        parts.append(z @ la.dagger(z))
    w, v = np.linalg.eigh(sum(parts))
    s = v @ np.diag(w**-0.5) @ la.dagger(v)
    return [s @ p @ s for p in parts]


def random_kraus_model(rng, d, k):
    return MeasurementModel(tuple(la.random_unitary(d, rng) @ la.psd_sqrt(e) for e in random_povm(rng, d, k, rank=d)))


def test_model_validation():
    with pytest.raises(IncompleteModelError):
        MeasurementModel((np.eye(2) * 0.9,))
    with pytest.raises(DimensionError):
        MeasurementModel((np.eye(2), np.zeros((3, 3))))
    with pytest.raises(ValueError):
        MeasurementModel((np.diag([1, 0]), np.diag([0, 1])), ("x", "x"))


def test_decay_povm_elements():
    for eta in (0.0, 0.3, 1.0):
        e0, e1 = povm_from_kraus(decay_kraus(eta))
        assert np.allclose(e1, eta * la.outer(KET_E), atol=1e-15)
        assert np.allclose(e0, np.eye(2) - e1, atol=1e-15)


def test_projective_model_povm_is_itself():
    model = MeasurementModel.computational(2)
    assert all(np.allclose(e, k) for e, k in zip(povm_from_kraus(model), model.kraus))


@given(seeds)
def test_unitary_twist_preserves_statistics(seed):
    rng = np.random.default_rng(seed)
    model = random_kraus_model(rng, 3, 3)
    twisted = model.twisted([la.random_unitary(3, rng) for _ in range(3)])
    rho = DensityMatrix(la.random_density(3, rng))
    assert np.max(np.abs(outcome_probabilities(rho, model) - outcome_probabilities(rho, twisted))) <= 1e-12


def test_outcome_probability_examples():
    assert np.allclose(outcome_probabilities(PLUS, decay_kraus(0.5)), [0.75, 0.25], atol=1e-15)
    assert np.allclose(outcome_probabilities(maximally_mixed(3), MeasurementModel.computational(3)), 1 / 3)
    assert np.allclose(outcome_probabilities(PLUS, MeasurementModel((np.eye(2),))), [1.0])
    with pytest.raises(DimensionError):
        outcome_probabilities(maximally_mixed(3), decay_kraus(0.5))


def test_selective_update_examples():
    model = decay_kraus(0.5)
    state, prob = selective_update(PLUS, model, "click")
    assert prob == pytest.approx(0.25, abs=1e-15)
    assert np.allclose(state.matrix, la.outer(KET_G))
    state, prob = selective_update(PLUS, model, "no_click")
    assert np.allclose(np.diag(state.matrix).real, [2 / 3, 1 / 3], atol=1e-12)
    e = ket_density(0, 1)
    state, prob = selective_update(e, MeasurementModel.computational(2), 1)
    assert prob == pytest.approx(1.0) and np.allclose(state.matrix, e.matrix)
    with pytest.raises(ImpossibleOutcomeError):
        selective_update(e, MeasurementModel.computational(2), 0)


@given(seeds)
def test_projective_selective_matches_project_update(seed):
    rng = np.random.default_rng(seed)
    u = la.random_unitary(3, rng)
    projs = [Projector.onto(u[:, i]) for i in range(3)]
    model = MeasurementModel.projective(projs)
    rho = DensityMatrix(la.random_density(3, rng))
    for i, p in enumerate(projs):
        a, pa = selective_update(rho, model, i)
        b, pb = project_update(rho, p)
        assert abs(pa - pb) <= 1e-12 and np.allclose(a.matrix, b.matrix, atol=1e-10)


@given(seeds)
def test_mixture_consistency(seed):
    rng = np.random.default_rng(seed)
    model = random_kraus_model(rng, 3, 4)
    rho = DensityMatrix(la.random_density(3, rng))
    avg = sum(p * s.matrix for s, p in (selective_update(rho, model, i) for i in range(len(model))))
    assert np.max(np.abs(avg - evolve_nonselective(rho, model).matrix)) <= 1e-10


def test_sample_outcome_reproducible_and_frequency():
    model = decay_kraus(0.5)
    runs = [[sample_outcome(PLUS, model, np.random.default_rng(7))[0] for _ in range(1)] for _ in range(2)]
    assert runs[0] == runs[1]
    rng_a, rng_b = np.random.default_rng(3), np.random.default_rng(3)
    seq_a = [sample_outcome(PLUS, model, rng_a)[0] for _ in range(50)]
    seq_b = [sample_outcome(PLUS, model, rng_b)[0] for _ in range(50)]
    assert seq_a == seq_b
    n = 100_000
    idx = sample_outcome_indices(outcome_probabilities(PLUS, model), np.random.default_rng(11), n)
    freq = np.mean(idx == 1)
    assert abs(freq - 0.25) <= 3 * np.sqrt(0.25 * 0.75 / n)
    single = MeasurementModel((np.eye(2),), ("only",))
    assert {sample_outcome(PLUS, single, np.random.default_rng(s))[0] for s in range(10)} == {"only"}


def test_validate_povm_names_violation():
    with pytest.raises(InvalidPOVMError, match="PSD"):
        validate_povm([np.diag([1.5, 1]), np.diag([-0.5, 0])])
    with pytest.raises(InvalidPOVMError, match="identity"):
        validate_povm([np.diag([0.5, 0.5])])
    with pytest.raises(InvalidPOVMError, match="Hermitian"):
        validate_povm([np.array([[1, 1], [0, 0]]), np.array([[0, -1], [0, 1]])])


@given(seeds, st.integers(2, 4), st.integers(1, 5))
def test_naimark_round_trip(seed, d, k):
    rng = np.random.default_rng(seed)
    povm = random_povm(rng, d, k, rank=int(rng.integers(1, d + 1)))
    dil = naimark_dilation(povm)
    v = dil.isometry
    assert v.shape == (d * k, d)
    assert np.max(np.abs(la.dagger(v) @ v - np.eye(d))) <= 1e-9
    for _ in range(20):
        rho = DensityMatrix(la.random_density(d, rng))
        direct = np.array([np.trace(e @ rho.matrix).real for e in povm])
        assert np.max(np.abs(dil.probabilities(rho) - direct)) <= 1e-9


def test_naimark_projective_is_trivial():
    dil = naimark_dilation([np.diag([1, 0]), np.diag([0, 1])])
    assert dil.ancilla_dim == 2
    rho = ket_density(0.6, 0.8)
    assert np.allclose(dil.probabilities(rho), [0.36, 0.64], atol=1e-12)


def test_naimark_random_rank_one_qubit(rng):
    povm = random_povm(rng, 2, 3, rank=1)
    dil = naimark_dilation(povm)
    rho = DensityMatrix(la.random_density(2, rng))
    assert np.allclose(dil.probabilities(rho), [np.trace(e @ rho.matrix).real for e in povm], atol=1e-9)


def test_naimark_rejects_invalid():
    with pytest.raises(InvalidPOVMError):
        naimark_dilation([np.diag([1, 0.5])])
