import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from quswap import (
    GBellLabel,
    MultiEntangledSpec,
    bell_from_shifts,
    enumerate_basis,
    fidelity_up_to_phase,
    make_entangled,
    p_basis_state,
    parse_label,
    reduce_to_single,
)

from oracles import entangled_vector
from test_state import random_state


def test_qutrit_example_expansion():
    state = make_entangled(MultiEntangledSpec(3, 0, (1,)))
    support = dict(state.support())
    assert set(support) == {(0, 2), (1, 0), (2, 1)}
    np.testing.assert_allclose(list(support.values()), 3 ** -0.5, atol=1e-15)


def test_bell_phi_plus():
    np.testing.assert_allclose(make_entangled(MultiEntangledSpec(2, 0, (0,))).amplitudes,
                               np.array([1, 0, 0, 1]) / np.sqrt(2), atol=1e-15)


def test_single_particle_spec_is_fourier_ket():
    np.testing.assert_allclose(make_entangled(MultiEntangledSpec(3, 1)).amplitudes,
                               p_basis_state(1, 3).amplitudes, atol=1e-15)


def test_entries_are_reduced():
    spec = MultiEntangledSpec(3, 4, (-1, 5))
    assert (spec.l, spec.k) == (1, (2, 2))
    assert GBellLabel(2, 3, (-1,)) == GBellLabel(2, 1, (1,))


@pytest.mark.parametrize("D,M", [(2, 1), (2, 3), (3, 2), (3, 4), (4, 3)])
def test_make_entangled_matches_definition(D, M):
    for l in range(D):
        for k in itertools.product(range(D), repeat=M - 1):
            np.testing.assert_allclose(make_entangled(MultiEntangledSpec(D, l, k)).amplitudes,
                                       entangled_vector(D, l, k), atol=1e-15)


def test_enumeration_order_and_counts():
    labels = list(enumerate_basis(2, 2))
    assert [(lab.r, lab.s) for lab in labels] == [(0, (0,)), (0, (1,)), (1, (0,)), (1, (1,))]
    assert len(list(enumerate_basis(3, 2))) == 9
    states = [make_entangled(lab).amplitudes for lab in enumerate_basis(3, 3)]
    assert len(states) == 27
    gram = np.array(states).conj() @ np.array(states).T
    np.testing.assert_allclose(gram, np.eye(27), atol=1e-12)


def test_label_rendering_round_trip():
    spec = MultiEntangledSpec(5, 2, (0, 3, 4))
    assert str(spec) == "psi(2; 0,3,4)"
    assert str(GBellLabel(3, 1, (2,))) == "bell(1; 2)"
    assert str(MultiEntangledSpec(3, 1)) == "psi(1;)"
    assert parse_label(str(spec), 5) == spec
    assert parse_label("bell(1; 2)", 3) == GBellLabel(3, 1, (2,))
    assert parse_label("psi(1;)", 3) == MultiEntangledSpec(3, 1)
    with pytest.raises(ValueError):
        parse_label("phi(1; 2)", 3)


def test_bell_from_shifts_examples():
    D = 3
    np.testing.assert_allclose(bell_from_shifts(0, 0, D).amplitudes,
                               make_entangled(MultiEntangledSpec(D, 0, (0,))).amplitudes)
    np.testing.assert_allclose(bell_from_shifts(1, 0, D).amplitudes,
                               entangled_vector(D, 1, (0,)), atol=1e-15)
    got = bell_from_shifts(0, 1, D)
    fids = {(m, n): abs(np.vdot(entangled_vector(D, m, (n,)), got.amplitudes))
            for m in range(D) for n in range(D)}
    assert max(fids, key=fids.get) == (0, 1)
    assert fids[(0, 1)] == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("D", range(2, 8))
def test_bell_from_shifts_all_labels(D):
    for m in range(D):
        for n in range(D):
            target = make_entangled(MultiEntangledSpec(D, m, (n,)))
            assert fidelity_up_to_phase(bell_from_shifts(m, n, D), target) == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("D,M", [(D, M) for D in range(2, 6) for M in range(1, 4)])
def test_basis_orthonormal_and_complete(D, M):
    B = np.array([make_entangled(lab).amplitudes for lab in enumerate_basis(D, M)])
    np.testing.assert_allclose(B.conj() @ B.T, np.eye(D**M), atol=1e-12)
    np.testing.assert_allclose(B.T @ B.conj(), np.eye(D**M), atol=1e-12)
    phi = random_state(np.random.default_rng(D * 10 + M), D, M)
    assert np.sum(np.abs(B.conj() @ phi.amplitudes) ** 2) == pytest.approx(1, abs=1e-10)


@st.composite
def specs(draw, max_dim=4, min_particles=2, max_particles=4):
    D = draw(st.integers(2, max_dim))
    M = draw(st.integers(min_particles, max_particles))
    l = draw(st.integers(0, D - 1))
    k = tuple(draw(st.lists(st.integers(0, D - 1), min_size=M - 1, max_size=M - 1)))
    return MultiEntangledSpec(D, l, k)


@given(specs())
def test_maximal_entanglement_and_cyclic_structure(spec):
    state = make_entangled(spec)
    for p in range(spec.num_particles):
        assert reduce_to_single(state, p).distance_to_maximally_mixed() <= 1e-12
    support = state.support()
    assert len(support) == spec.dimension
    for digits, amp in support:
        assert abs(abs(amp) - spec.dimension ** -0.5) <= 1e-15
        assert tuple((digits[0] - d) % spec.dimension for d in digits[1:]) == spec.k
