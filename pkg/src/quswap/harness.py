"""Brute-force verification of the closed-form swapping predictions.

``verify_scenario`` builds the full product state, measures every label in
the basis, and compares each collapse against a predictor. Arbitrary
measured subsets are handled by rewriting each system so the chosen
particles come last; the rewritten scenario is what the canonical predictor
sees, while the oracle always acts on the original state.
"""

from __future__ import annotations

import functools
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .gbell import GBellLabel, MultiEntangledSpec, make_entangled
from .measurement import MeasurementSpec, collapse_all
from .predict import (
    InfeasibleOutcomeError,
    Prediction,
    SwapScenario,
    predict_general,
)
from .state import COMPARE_TOL, check_size, fidelity_up_to_phase, tensor_all

Predictor = Callable[[SwapScenario, GBellLabel], Prediction]

MUTATION_TERMS = ("phase", "offset", "inherited", "bridge", "constraint")


@dataclass(frozen=True)
class LabelRecord:
    label: GBellLabel
    probability: float
    oracle_feasible: bool
    predicted: MultiEntangledSpec | None
    expected_probability: float
    fidelity: float | None

    @property
    def predicted_feasible(self) -> bool:
        return self.predicted is not None


@dataclass
class VerificationReport:
    scenario: SwapScenario
    particles: tuple[int, ...]
    records: list[LabelRecord] = field(default_factory=list)
    max_fidelity_deviation: float = 0.0
    max_probability_deviation: float = 0.0
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return (self.max_fidelity_deviation <= COMPARE_TOL
                and self.max_probability_deviation <= COMPARE_TOL)

    @property
    def num_feasible(self) -> int:
        return sum(rec.oracle_feasible for rec in self.records)

    @property
    def total_probability(self) -> float:
        return float(sum(rec.probability for rec in self.records))


def product_state(scenario: SwapScenario):
    return tensor_all(make_entangled(spec) for spec in scenario.systems)


def relabel(scenario: SwapScenario, particles: Sequence[Sequence[int]]) -> SwapScenario:
    """Equivalent canonical scenario for an explicit choice of measured particles.

    ``particles[j]`` lists global indices inside system ``j`` in measurement
    order. Each system is reordered as (unmeasured, ascending) + (measured,
    listed order) and its offsets are re-expressed relative to the new first
    particle; the change only costs a global phase.
    """
    if len(particles) != scenario.q:
        raise ValueError(f"need one particle list per system ({scenario.q})")
    systems = []
    for start, spec, chosen, a in zip(scenario.system_starts(), scenario.systems,
                                      particles, scenario.measured_counts):
        local = [p - start for p in chosen]
        if len(local) != a:
            raise ValueError(f"system lists {len(local)} particles but measures {a}")
        if len(set(local)) != len(local) or any(not 0 <= p < spec.num_particles for p in local):
            raise ValueError(f"particles {list(chosen)} do not belong to one system")
        order = [p for p in range(spec.num_particles) if p not in local] + local
        c = spec.offsets()
        ref = c[order[0]]
        systems.append(MultiEntangledSpec(spec.dimension, spec.l,
                                          tuple(c[p] - ref for p in order[1:])))
    return SwapScenario(scenario.dimension, tuple(systems), scenario.measured_counts)


def verify_scenario(
    scenario: SwapScenario,
    *,
    particles: Sequence[Sequence[int]] | None = None,
    predictor: Predictor = predict_general,
) -> VerificationReport:
    """Compare every outcome of the oracle with ``predictor``.

    A label fails when the predictor and the oracle disagree on feasibility,
    when a feasible probability differs from 1/D**q, or when the predicted
    state is not the collapsed state up to phase.
    """
    t0 = time.perf_counter()
    check_size(scenario.dimension, scenario.num_measured, what="measurement basis")
    if particles is None:
        canonical, flat = scenario, scenario.measured_particles()
    else:
        canonical = relabel(scenario, particles)
        flat = tuple(p for block in particles for p in block)

    state = product_state(scenario)
    uniform = 1.0 / scenario.dimension ** scenario.q
    report = VerificationReport(scenario, flat)
    for res in collapse_all(state, MeasurementSpec(flat)):
        try:
            predicted = predictor(canonical, res.label).result
        except InfeasibleOutcomeError:
            predicted = None
        expected = uniform if predicted is not None else 0.0
        fid = None
        if res.feasible:
            fid = 0.0
            if predicted is not None:
                fid = fidelity_up_to_phase(res.post_state, make_entangled(predicted))
            report.max_fidelity_deviation = max(report.max_fidelity_deviation, abs(1.0 - fid))
        report.max_probability_deviation = max(report.max_probability_deviation,
                                               abs(res.probability - expected))
        report.records.append(LabelRecord(res.label, res.probability, res.feasible,
                                          predicted, expected, fid))
    report.wall_time = time.perf_counter() - t0
    return report


def mutated_predictor(term: str, amount: int = 1) -> Predictor:
    """``predict_general`` with one modular term shifted by ``amount``."""
    if term not in MUTATION_TERMS:
        raise ValueError(f"unknown term {term!r}; choose from {MUTATION_TERMS}")
    return functools.partial(predict_general, perturb={term: amount})


@dataclass(frozen=True)
class Limits:
    max_D: int = 3
    max_q: int = 3
    max_total_qudits: int = 8
    min_D: int = 2
    min_q: int = 1

    def check(self) -> None:
        if not 2 <= self.min_D <= self.max_D:
            raise ValueError(f"need 2 <= min_D <= max_D, got {self.min_D}, {self.max_D}")
        if not 1 <= self.min_q <= self.max_q:
            raise ValueError(f"need 1 <= min_q <= max_q, got {self.min_q}, {self.max_q}")
        if 2 * self.min_q > self.max_total_qudits:
            raise ValueError(
                f"{self.min_q} systems need at least {2 * self.min_q} qudits, "
                f"limit is {self.max_total_qudits}"
            )
        check_size(self.min_D, 2 * self.min_q)


def random_scenario(seed: int, limits: Limits = Limits()) -> SwapScenario:
    """Deterministic random scenario within ``limits`` and the size guard."""
    limits.check()
    rng = np.random.default_rng(seed)
    for _ in range(1000):
        D = int(rng.integers(limits.min_D, limits.max_D + 1))
        q = int(rng.integers(limits.min_q, min(limits.max_q, limits.max_total_qudits // 2) + 1))
        total = int(rng.integers(2 * q, limits.max_total_qudits + 1))
        sizes = [2] * q
        for j in rng.integers(0, q, size=total - 2 * q):
            sizes[j] += 1
        try:
            check_size(D, total)
        except ValueError:
            continue
        systems, counts = [], []
        for n in sizes:
            systems.append(MultiEntangledSpec(D, int(rng.integers(D)),
                                              tuple(int(x) for x in rng.integers(0, D, size=n - 1))))
            counts.append(int(rng.integers(1, n)))
        try:
            check_size(D, sum(counts), what="measurement basis")
        except ValueError:
            continue
        return SwapScenario(D, tuple(systems), tuple(counts))
    raise ValueError("could not draw a scenario inside the size guard for these limits")


def random_particles(seed: int, scenario: SwapScenario) -> list[list[int]]:
    """Random ordered choice of ``a_j`` particles inside each system."""
    rng = np.random.default_rng(seed)
    out = []
    for start, spec, a in zip(scenario.system_starts(), scenario.systems, scenario.measured_counts):
        picks = rng.permutation(spec.num_particles)[:a]
        out.append([start + int(p) for p in picks])
    return out
