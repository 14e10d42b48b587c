import itertools

import numpy as np
import pytest

from quswap import (
    GBellLabel,
    InfeasibleOutcomeError,
    MeasurementSpec,
    MultiEntangledSpec,
    StateVector,
    SwapScenario,
    distribution,
    enumerate_basis,
    feasible_labels,
    fidelity_up_to_phase,
    is_feasible,
    make_entangled,
    predict_general,
    predict_pairs,
    predict_two_systems,
    project,
    tensor,
)
from quswap.harness import product_state

from oracles import brute_project, entangled_vector


def psi(D, l, *k):
    return MultiEntangledSpec(D, l, tuple(k))


def oracle_matches(state, measured, label, predicted):
    raw = brute_project(state.amplitudes, state.dimension, state.num_qudits, list(measured), label.r, label.s)
    prob = np.vdot(raw, raw).real
    target = entangled_vector(predicted.dimension, predicted.l, predicted.k)
    return prob, abs(np.vdot(target, raw)) / np.sqrt(prob)


def test_predict_pairs_examples():
    for r, s in itertools.product(range(3), repeat=2):
        assert predict_pairs(3, 0, 0, 0, 1, r, s) == ((-r) % 3, (s + 1) % 3)
    assert predict_pairs(3, 0, 0, 0, 1, 1, 2) == (2, 0)
    assert predict_pairs(4, 0, 0, 0, 0, 0, 0) == (0, 0)
    assert predict_pairs(5, 1, 2, 3, 4, 2, 1) == (2, 2)


def test_predict_pairs_d5_against_brute_force():
    D = 5
    state = tensor(make_entangled(psi(D, 1, 2)), make_entangled(psi(D, 3, 4)))
    prob, fid = oracle_matches(state, (1, 2), GBellLabel(D, 2, (1,)), psi(D, 2, 2))
    assert prob == pytest.approx(1 / 25, abs=1e-12)
    assert fid == pytest.approx(1, abs=1e-10)


@pytest.mark.parametrize("D", [2, 3, 4, 5])
def test_two_systems_reduces_to_pairs(D):
    # Theorem 1 measures the first particle of pair 2, Theorem 2 its last one:
    # reversing pair 2 turns psi(l2; k2) into psi(l2; -k2) up to phase.
    rng = np.random.default_rng(D)
    cases = itertools.product(range(D), repeat=6) if D <= 3 else (rng.integers(0, D, 6) for _ in range(300))
    for l, k, l2, k2, r, s in cases:
        pred = predict_two_systems(D, psi(D, l, k), psi(D, l2, -k2), 1, 1, GBellLabel(D, r, (s,)))
        assert (pred.result.l, pred.result.k) == (predict_pairs(D, l, k, l2, k2, r, s)[0],
                                                  (predict_pairs(D, l, k, l2, k2, r, s)[1],))


def test_two_systems_all_zero_ghz():
    pred = predict_two_systems(2, psi(2, 0, 0, 0), psi(2, 0, 0), 1, 1, GBellLabel(2, 0, (0,)))
    assert pred.result == psi(2, 0, 0, 0)
    assert pred.result.num_particles == 3


def test_two_systems_worked_case_against_oracle():
    D, s1, s2 = 3, psi(3, 1, 2, 1), psi(3, 2, 1)
    sc = SwapScenario(D, (s1, s2), (2, 1))
    state = product_state(sc)
    feasible = feasible_labels(sc)
    assert len(feasible) == 9
    for label in feasible:
        pred = predict_two_systems(D, s1, s2, 2, 1, label)
        prob, fid = oracle_matches(state, sc.measured_particles(), label, pred.result)
        assert prob == pytest.approx(1 / 9, abs=1e-12)
        assert fid == pytest.approx(1, abs=1e-10)
    infeasible = next(lab for lab in enumerate_basis(D, 3) if lab not in feasible)
    with pytest.raises(InfeasibleOutcomeError):
        predict_two_systems(D, s1, s2, 2, 1, infeasible)


def test_general_single_system():
    D = 3
    for l in range(D):
        sc = SwapScenario(D, (psi(D, l, 0, 0),), (2,))
        state = product_state(sc)
        labels = feasible_labels(sc)
        assert [lab.s for lab in labels] == [(0,)] * 3
        for label in labels:
            pred = predict_general(sc, label)
            assert pred.result == MultiEntangledSpec(D, (l - label.r) % D)
            res = project(state, sc.measurement(), label)
            assert res.probability == pytest.approx(1 / 3, abs=1e-12)
            assert fidelity_up_to_phase(res.post_state, make_entangled(pred.result)) == pytest.approx(1, abs=1e-12)


def test_general_three_bell_pairs_to_ghz():
    sc = SwapScenario(2, (psi(2, 0, 0),) * 3, (1, 1, 1))
    assert predict_general(sc, GBellLabel(2, 0, (0, 0))).result == psi(2, 0, 0, 0)
    state = product_state(sc)
    res = project(state, sc.measurement(), GBellLabel(2, 0, (0, 0)))
    assert fidelity_up_to_phase(res.post_state, make_entangled(psi(2, 0, 0, 0))) == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("D", [2, 3])
def test_general_agrees_with_two_system_form(D):
    rng = np.random.default_rng(100 + D)
    for m1, m2 in itertools.product(range(1, 4), repeat=2):
        for a1, a2 in itertools.product(range(1, m1 + 1), range(1, m2 + 1)):
            s1 = psi(D, int(rng.integers(D)), *rng.integers(0, D, m1))
            s2 = psi(D, int(rng.integers(D)), *rng.integers(0, D, m2))
            sc = SwapScenario(D, (s1, s2), (a1, a2))
            for label in feasible_labels(sc):
                assert predict_general(sc, label) == predict_two_systems(D, s1, s2, a1, a2, label)


def test_printed_offset_sign_is_refuted_by_oracle():
    # Reading k~ = k + (n^j - n^1) literally gives a different state whenever the
    # offset is nonzero; the oracle sides with k - (n^j - n^1).
    D = 3
    sc = SwapScenario(D, (psi(D, 1, 2, 1), psi(D, 2, 1, 2)), (1, 1))
    state = product_state(sc)
    label = GBellLabel(D, 0, (0,))
    pred = predict_general(sc, label)
    delta = pred.offsets[1]
    assert delta != 0
    assert pred.result.k == (2, (-delta) % D, (1 - delta) % D)
    literal = MultiEntangledSpec(D, pred.result.l, (2, delta, (1 + delta) % D))
    res = project(state, sc.measurement(), label)
    assert fidelity_up_to_phase(res.post_state, make_entangled(pred.result)) == pytest.approx(1, abs=1e-12)
    assert fidelity_up_to_phase(res.post_state, make_entangled(literal)) < 0.5


def test_feasible_labels_examples():
    sc = SwapScenario(3, (psi(3, 0, 1, 2),), (2,))
    labels = feasible_labels(sc)
    assert len(labels) == 3 and all(lab.s == (1,) for lab in labels)
    dist = distribution(product_state(sc), sc.measurement())
    assert set(dist.feasible()) == set(labels)

    sc = SwapScenario(2, (psi(2, 0, 1),) * 3, (1, 1, 1))
    assert len(feasible_labels(sc)) == 8
    assert feasible_labels(sc) == list(enumerate_basis(2, 3))


@pytest.mark.parametrize("seed", range(6))
def test_feasible_set_matches_oracle_support(seed):
    from quswap import Limits, random_scenario

    sc = random_scenario(seed, Limits(max_D=3, max_q=3, max_total_qudits=7))
    dist = distribution(product_state(sc), sc.measurement())
    labels = feasible_labels(sc)
    assert len(labels) == sc.dimension ** sc.q
    assert set(dist.feasible()) == set(labels)
    assert all(is_feasible(sc, lab) == (lab in labels) for lab in dist.labels)
    assert sum(dist[lab] for lab in labels) == pytest.approx(1, abs=1e-10)


def test_scenario_validation():
    with pytest.raises(ValueError, match="at least one measured particle"):
        SwapScenario(2, (psi(2, 0, 0), psi(2, 0, 0)), (1, 0))
    with pytest.raises(ValueError, match="one stays behind"):
        SwapScenario(2, (psi(2, 0, 0),), (2,))
    with pytest.raises(ValueError):
        SwapScenario(2, (psi(3, 0, 0),), (1,))
    with pytest.raises(ValueError):
        SwapScenario(2, (psi(2, 0),), (1,))
    sc = SwapScenario(2, (psi(2, 0, 0), psi(2, 0, 0)), (1, 1))
    with pytest.raises(ValueError):
        predict_general(sc, GBellLabel(2, 0, (0, 0)))
    with pytest.raises(ValueError):
        predict_general(sc, GBellLabel(2, 0, (0,)), perturb={"typo": 1})


def test_scenario_layout():
    sc = SwapScenario(3, (psi(3, 0, 1, 2), psi(3, 0, 1), psi(3, 1, 1, 1, 1)), (2, 1, 3))
    assert sc.num_qudits == 9
    assert sc.measured_particles() == (1, 2, 4, 6, 7, 8)
    assert sc.unmeasured_particles() == (0, 3, 5)
    assert sc.block_starts() == [0, 2, 3]
    pred = predict_general(sc, feasible_labels(sc)[0])
    assert pred.result.num_particles == 3
    assert len(pred.offsets) == 3 and pred.offsets[0] == 0
