from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qmeas import linalg as la
from qmeas.errors import DimensionError, ImpossibleOutcomeError, InvalidStateError, QMeasError
from qmeas.states import (
    KET_0,
    KET_1,
    KET_E,
    KET_G,
    DensityMatrix,
    Projector,
    PureState,
    bloch_vector,
    born_probability,
    clamp_probability,
    dephase,
    ket_density,
    maximally_mixed,
    mix,
    project_update,
    pure_to_density,
    purity,
    reduced_density,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def assert_valid(rho: DensityMatrix):
    m = rho.matrix
    assert abs(np.trace(m) - 1) <= 1e-9
    assert la.hermiticity_deviation(m) <= 1e-9
    assert np.linalg.eigvalsh(m).min() >= -1e-9


def test_pure_to_density_examples():
    assert np.allclose(pure_to_density(PureState(KET_G)).matrix, np.diag([1, 0]))
    plus = PureState.normalized([1, 1])
    assert np.allclose(pure_to_density(plus).matrix, 0.5)


@given(seeds, st.integers(1, 6))
def test_pure_states_have_unit_purity(seed, d):
    psi = PureState(la.random_ket(d, np.random.default_rng(seed)))
    rho = pure_to_density(psi)
    assert abs(purity(rho) - 1) <= 1e-10
    assert_valid(rho)


def test_pure_state_rejects_unnormalized():
    with pytest.raises(InvalidStateError):
        PureState(np.array([1.0, 1.0]))
    with pytest.raises(InvalidStateError):
        PureState.normalized([0, 0])


def test_same_ray_ignores_global_phase():
    a = PureState.normalized([1, 1j])
    b = PureState(np.exp(0.7j) * a.amplitudes)
    assert a.same_ray(b)
    assert not a.same_ray(PureState.normalized([1, -1j]))


def test_density_validation():
    with pytest.raises(InvalidStateError):
        DensityMatrix(np.diag([0.6, 0.6]))
    with pytest.raises(InvalidStateError):
        DensityMatrix(np.diag([1.5, -0.5]))
    with pytest.raises(InvalidStateError):
        DensityMatrix(np.array([[0.5, 0.5], [0, 0.5]]))
    with pytest.raises(DimensionError):
        DensityMatrix(np.eye(4) / 4, dims=(2, 3))


def test_mix_incoherent_has_no_coherence():
    rho = mix([(0.5, ket_density(1, 0)), (0.5, ket_density(0, 1))])
    assert np.allclose(rho.matrix, np.diag([0.5, 0.5]), atol=1e-15)
    single = ket_density(1, 1j)
    assert np.allclose(mix([(1.0, single)]).matrix, single.matrix)
    with pytest.raises(QMeasError):
        mix([(0.5, single), (0.4, single)])


@given(seeds)
def test_mix_is_linear_in_expectations(seed):
    rng = np.random.default_rng(seed)
    p = rng.dirichlet(np.ones(3))
    rhos = [DensityMatrix(la.random_density(3, rng)) for _ in range(3)]
    a = la.random_hermitian(3, rng)
    mixed = mix(list(zip(p, rhos)))
    expected = sum(pk * r.expectation(a) for pk, r in zip(p, rhos))
    assert abs(mixed.expectation(a) - expected) <= 1e-10
    assert_valid(mixed)


def test_born_probability_examples():
    assert born_probability(maximally_mixed(2), Projector.onto(KET_G)) == pytest.approx(0.5, abs=1e-15)
    psi = la.random_ket(3, np.random.default_rng(1))
    assert born_probability(pure_to_density(psi), Projector.onto(psi)) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(DimensionError):
        born_probability(maximally_mixed(2), Projector.identity(3))


@given(seeds)
def test_complete_projectors_and_dephasing(seed):
    rng = np.random.default_rng(seed)
    u = la.random_unitary(4, rng)
    projs = [Projector.onto(u[:, 0], u[:, 1]), Projector.onto(u[:, 2]), Projector.onto(u[:, 3])]
    rho = DensityMatrix(la.random_density(4, rng))
    probs = [born_probability(rho, p) for p in projs]
    assert abs(sum(probs) - 1) <= 1e-9
    conditional = [project_update(rho, p) for p in projs]
    mixture = sum(prob * state.matrix for state, prob in conditional)
    assert np.allclose(mixture, dephase(rho, projs).matrix, atol=1e-10)


@given(seeds)
def test_repeatability(seed):
    rng = np.random.default_rng(seed)
    rho = DensityMatrix(la.random_density(3, rng))
    p = Projector.onto(la.random_ket(3, rng))
    once, _ = project_update(rho, p)
    twice, prob = project_update(once, p)
    assert abs(prob - 1) <= 1e-10
    assert np.allclose(once.matrix, twice.matrix, atol=1e-10)


def test_field_projection_collapses_atom():
    psi = (np.kron(KET_E, KET_0) + np.kron(KET_G, KET_1)) / np.sqrt(2)
    rho = pure_to_density(psi, dims=(2, 2))
    field0 = Projector(np.kron(np.eye(2), la.outer(KET_0)))
    post, prob = project_update(rho, field0)
    assert prob == pytest.approx(0.5, abs=1e-12)
    assert np.allclose(post.matrix, la.outer(np.kron(KET_E, KET_0)), atol=1e-12)
    same, p_one = project_update(rho, Projector.identity(4))
    assert p_one == pytest.approx(1.0) and np.allclose(same.matrix, rho.matrix)


def test_reduced_density_of_entangled_atom_field():
    psi = (np.kron(KET_E, KET_0) + np.kron(KET_G, KET_1)) / np.sqrt(2)
    rho = pure_to_density(psi, dims=(2, 2))
    atom = reduced_density(rho, 0)
    assert np.max(np.abs(atom.matrix - np.diag([0.5, 0.5]))) <= 1e-12
    assert atom.dims == (2,)


def test_impossible_outcome():
    with pytest.raises(ImpossibleOutcomeError):
        project_update(ket_density(1, 0), Projector.onto(KET_E))


def test_clamp_probability():
    assert clamp_probability(-5e-11) == 0.0
    assert clamp_probability(1 + 5e-11) == 1.0
    with pytest.raises(QMeasError):
        clamp_probability(-1e-6)


def test_bloch_poles():
    assert np.allclose(bloch_vector(ket_density(1, 0)), [0, 0, -1])
    assert np.allclose(bloch_vector(ket_density(0, 1)), [0, 0, 1])
    assert np.allclose(bloch_vector(ket_density(1, 1)), [1, 0, 0])
    assert np.allclose(bloch_vector(ket_density(1, 1j)), [0, 1, 0])
