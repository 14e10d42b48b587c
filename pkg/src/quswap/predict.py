"""Closed-form post-measurement states for entanglement swapping.

A scenario is a product of ``q`` maximally entangled systems; system ``j``
holds ``m_j + 1`` particles in psi(l^j; k^j) and its last ``a_j`` particles are
measured jointly in the generalized Bell basis. Measured particles are listed
system by system, so system ``j``'s first measured particle sits at flat
position ``A_{j-1} = a_1 + ... + a_{j-1}`` of the outcome label (position 0 is
the ``r`` slot, position ``p >= 1`` is ``s_p``).

Write ``n^j`` for the summation index of system ``j``. A nonzero outcome ties
the systems together through

    n^j - n^1 = -(k^1_f + s_{A_{j-1}} - k^j_f)      (mod D)

with ``k^j_f = k^j_{m_j - a_j + 1}`` the offset of system ``j``'s first
measured particle. The unmeasured particles then form one psi state with
phase index ``sum_j l^j - r``; particle ``i`` of system ``j`` has offset
``k^j_i - (n^j - n^1)`` relative to system 1's first particle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

from .gbell import GBellLabel, MultiEntangledSpec
from .measurement import MeasurementSpec
from .state import check_size


class InfeasibleOutcomeError(ValueError):
    """The outcome has probability zero for this scenario."""


@dataclass(frozen=True)
class SwapScenario:
    dimension: int
    systems: tuple[MultiEntangledSpec, ...]
    measured_counts: tuple[int, ...]

    def __post_init__(self):
        D = self.dimension
        systems = tuple(self.systems)
        counts = tuple(int(a) for a in self.measured_counts)
        object.__setattr__(self, "systems", systems)
        object.__setattr__(self, "measured_counts", counts)
        if not systems:
            raise ValueError("a scenario needs at least one system")
        if len(counts) != len(systems):
            raise ValueError(
                f"{len(systems)} systems but {len(counts)} measured counts"
            )
        for j, (spec, a) in enumerate(zip(systems, counts), start=1):
            if spec.dimension != D:
                raise ValueError(f"system {j} has dimension {spec.dimension}, expected {D}")
            if spec.num_particles < 2:
                raise ValueError(f"system {j} must hold at least two particles")
            if a < 1:
                raise ValueError("each system must contribute at least one measured particle")
            if a > len(spec.k):
                raise ValueError(
                    f"system {j} has {spec.num_particles} particles; at most "
                    f"{len(spec.k)} may be measured so one stays behind"
                )
        check_size(D, self.num_qudits)

    @property
    def q(self) -> int:
        return len(self.systems)

    @property
    def num_qudits(self) -> int:
        return sum(s.num_particles for s in self.systems)

    @property
    def num_measured(self) -> int:
        return sum(self.measured_counts)

    def system_starts(self) -> list[int]:
        starts, pos = [], 0
        for spec in self.systems:
            starts.append(pos)
            pos += spec.num_particles
        return starts

    def measured_particles(self) -> tuple[int, ...]:
        out = []
        for start, spec, a in zip(self.system_starts(), self.systems, self.measured_counts):
            n = spec.num_particles
            out.extend(range(start + n - a, start + n))
        return tuple(out)

    def unmeasured_particles(self) -> tuple[int, ...]:
        return MeasurementSpec(self.measured_particles()).unmeasured(self.num_qudits)

    def measurement(self) -> MeasurementSpec:
        return MeasurementSpec(self.measured_particles())

    def block_starts(self) -> list[int]:
        """Flat label position of each system's first measured particle."""
        starts, pos = [], 0
        for a in self.measured_counts:
            starts.append(pos)
            pos += a
        return starts


@dataclass(frozen=True)
class Prediction:
    result: MultiEntangledSpec
    offsets: tuple[int, ...]


def _flat(label: GBellLabel) -> tuple[int, ...]:
    # offset at flat position p; the reference slot has offset 0
    return (0,) + label.s


def _check_shape(scenario: SwapScenario, label: GBellLabel) -> None:
    if label.dimension != scenario.dimension:
        raise ValueError("label dimension does not match the scenario")
    if label.num_particles != scenario.num_measured:
        raise ValueError(
            f"label {label} covers {label.num_particles} particles, scenario "
            f"measures {scenario.num_measured}"
        )


def is_feasible(scenario: SwapScenario, label: GBellLabel, *, _bump: int = 0) -> bool:
    """Whether ``label`` has nonzero probability.

    Inside one system the measured digits differ by fixed offsets, so the
    label's offsets within each block must reproduce those differences.
    """
    _check_shape(scenario, label)
    D = scenario.dimension
    flat = _flat(label)
    for start, spec, a in zip(scenario.block_starts(), scenario.systems, scenario.measured_counts):
        k = spec.offsets()
        first = len(k) - a
        for u in range(1, a):
            want = (k[first + u] - k[first] + _bump) % D
            if (flat[start + u] - flat[start]) % D != want:
                return False
    return True


def feasible_labels(scenario: SwapScenario) -> list[GBellLabel]:
    """The D**q feasible labels, in enumeration order.

    ``r`` and the first offset of every block after the first are free; all
    other offsets follow from the block constraints.
    """
    D = scenario.dimension
    starts = scenario.block_starts()
    out = []
    for free in itertools.product(range(D), repeat=scenario.q):
        flat = [0] * scenario.num_measured
        for j, (start, spec, a) in enumerate(zip(starts, scenario.systems, scenario.measured_counts)):
            head = 0 if j == 0 else free[j]
            k = spec.offsets()
            first = len(k) - a
            for u in range(a):
                flat[start + u] = (head + k[first + u] - k[first]) % D
        out.append(GBellLabel(D, free[0], tuple(flat[1:])))
    return sorted(out, key=lambda lab: (lab.r,) + lab.s)


def predict_pairs(D: int, l: int, k: int, l2: int, k2: int, r: int, s: int) -> tuple[int, int]:
    """psi(l; k)_{01} (x) psi(l2; k2)_{23}, particles 1 and 2 measured -> (l~, k~) on 0, 3."""
    return (l + l2 - r) % D, (k + k2 + s) % D


def predict_two_systems(
    D: int,
    spec1: MultiEntangledSpec,
    spec2: MultiEntangledSpec,
    a1: int,
    a2: int,
    label: GBellLabel,
) -> Prediction:
    """Last ``a1`` particles of system 1 and last ``a2`` of system 2 measured."""
    scenario = SwapScenario(D, (spec1, spec2), (a1, a2))
    _check_shape(scenario, label)
    if not is_feasible(scenario, label):
        raise InfeasibleOutcomeError(f"{label} cannot occur for this scenario")
    m1, m2 = len(spec1.k), len(spec2.k)
    k, kp = spec1.offsets(), spec2.offsets()  # k[0] = kp[0] = 0
    s = _flat(label)
    delta_k = (k[m1 - a1 + 1] + s[a1] - kp[m2 - a2 + 1]) % D
    l_tilde = (spec1.l + spec2.l - label.r) % D
    k_tilde = []
    for i in range(1, m1 + m2 + 2 - a1 - a2):
        if i < m1 - a1 + 1:
            k_tilde.append(k[i])
        else:
            k_tilde.append((kp[i - m1 + a1 - 1] + delta_k) % D)
    return Prediction(MultiEntangledSpec(D, l_tilde, tuple(k_tilde)), (0, (-delta_k) % D))


def predict_general(
    scenario: SwapScenario,
    label: GBellLabel,
    perturb: Mapping[str, int] | None = None,
) -> Prediction:
    """Post-measurement state of the unmeasured particles.

    Unmeasured particles are ordered system by system, original order within
    each system; system 1's first particle is the phase reference.

    ``perturb`` adds an integer to one named modular term (``"phase"``,
    ``"offset"``, ``"inherited"``, ``"bridge"``, ``"constraint"``). It exists
    only to build negative controls for the verifier.
    """
    bump = dict(perturb or {})
    unknown = set(bump) - {"phase", "offset", "inherited", "bridge", "constraint"}
    if unknown:
        raise ValueError(f"unknown perturbation terms: {sorted(unknown)}")
    _check_shape(scenario, label)
    if not is_feasible(scenario, label, _bump=bump.get("constraint", 0)):
        raise InfeasibleOutcomeError(f"{label} cannot occur for this scenario")

    D = scenario.dimension
    s = _flat(label)
    firsts = [spec.offsets()[spec.num_particles - a]
              for spec, a in zip(scenario.systems, scenario.measured_counts)]
    offsets = [0]
    for j, start in enumerate(scenario.block_starts()[1:], start=1):
        delta = -(firsts[0] + s[start] - firsts[j]) + bump.get("offset", 0)
        offsets.append(delta % D)

    l_tilde = (sum(spec.l for spec in scenario.systems) - label.r + bump.get("phase", 0)) % D
    k_tilde: list[int] = []
    for j, (spec, a) in enumerate(zip(scenario.systems, scenario.measured_counts)):
        kept = spec.num_particles - a
        # particle 0 of system j > 1 is the bridge entry appended by system j - 1
        for i in range(1, kept):
            k_tilde.append((spec.k[i - 1] - offsets[j] + bump.get("inherited", 0)) % D)
        if j + 1 < scenario.q:
            k_tilde.append((-offsets[j + 1] + bump.get("bridge", 0)) % D)
    return Prediction(MultiEntangledSpec(D, l_tilde, tuple(k_tilde)), tuple(offsets))


def scenario_from_sequences(D: int, systems: Sequence[tuple[int, Sequence[int]]], counts: Sequence[int]) -> SwapScenario:
    """Convenience constructor from ``[(l, [k...]), ...]``."""
    return SwapScenario(D, tuple(MultiEntangledSpec(D, l, tuple(k)) for l, k in systems), tuple(counts))
