"""Generalized Bell measurements on arbitrary ordered subsets of a register.

The first listed particle carries the ``r`` phase of the basis and the
(t+1)-th listed particle carries offset ``s_t``. Post-measurement states are
over the unmeasured particles in ascending global index order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .gbell import GBellLabel, enumerate_basis, make_entangled
from .state import ALGEBRA_TOL, StateVector, check_size
from .weyl import root_of_unity_powers

#: Outcomes with probability at or below this are treated as impossible.
PROBABILITY_FLOOR = 1e-12

# Bound on gathered complex entries held at once in the batched projection.
_CHUNK_ENTRIES = 2**22


@dataclass(frozen=True)
class MeasurementSpec:
    particles: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.particles)
        if not parts:
            raise ValueError("a measurement needs at least one particle")
        if len(set(parts)) != len(parts):
            raise ValueError(f"measured particles must be distinct: {parts}")
        object.__setattr__(self, "particles", parts)

    def validate(self, num_qudits: int) -> None:
        bad = [p for p in self.particles if not 0 <= p < num_qudits]
        if bad:
            raise IndexError(f"particles {bad} out of range for {num_qudits} qudits")

    def unmeasured(self, num_qudits: int) -> tuple[int, ...]:
        chosen = set(self.particles)
        return tuple(p for p in range(num_qudits) if p not in chosen)


@dataclass(frozen=True, eq=False)
class CollapseResult:
    label: GBellLabel
    probability: float
    post_state: StateVector | None

    @property
    def feasible(self) -> bool:
        return self.post_state is not None


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    labels: tuple[GBellLabel, ...]
    probabilities: np.ndarray

    def __getitem__(self, label: GBellLabel) -> float:
        return float(self.probabilities[self.labels.index(label)])

    def __len__(self) -> int:
        return len(self.labels)

    def items(self) -> Iterator[tuple[GBellLabel, float]]:
        for label, p in zip(self.labels, self.probabilities):
            yield label, float(p)

    def total(self) -> float:
        return float(self.probabilities.sum())

    def feasible(self) -> list[GBellLabel]:
        return [lab for lab, p in self.items() if p > PROBABILITY_FLOOR]


def _split(state: StateVector, spec: MeasurementSpec) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reshape to a (D**A, D**U) matrix: measured axes in listed order, then the rest."""
    spec.validate(state.num_qudits)
    rest = spec.unmeasured(state.num_qudits)
    t = np.transpose(state.as_tensor(), spec.particles + rest)
    return t.reshape(state.dimension ** len(spec.particles), -1), rest


def _check_label(state: StateVector, spec: MeasurementSpec, label: GBellLabel) -> None:
    if label.dimension != state.dimension:
        raise ValueError("label dimension does not match the state")
    if label.num_particles != len(spec.particles):
        raise ValueError(
            f"label {label} covers {label.num_particles} particles, "
            f"measurement has {len(spec.particles)}"
        )


def _collapse(label: GBellLabel, projected: np.ndarray, dimension: int, remaining: int) -> CollapseResult:
    prob = float(np.vdot(projected, projected).real)
    if prob <= PROBABILITY_FLOOR:
        return CollapseResult(label, prob, None)
    return CollapseResult(label, prob, StateVector(dimension, remaining, projected / np.sqrt(prob)))


def project(state: StateVector, spec: MeasurementSpec, label: GBellLabel) -> CollapseResult:
    """Apply <bell(label)| to the measured slots (dense contraction)."""
    _check_label(state, spec, label)
    mat, rest = _split(state, spec)
    bra = make_entangled(label).amplitudes.conj()
    return _collapse(label, bra @ mat, state.dimension, len(rest))


def _project_batch(mat: np.ndarray, labels: np.ndarray, dimension: int) -> np.ndarray:
    """Projections for a block of labels given as rows ``[r, s_1, ...]``.

    Each basis vector has exactly D nonzero amplitudes, at digits
    (t, t - s_1, ...) with amplitude exp(2 pi i r t / D) / sqrt(D), so the
    projection is a D-term gather over rows of ``mat``.
    """
    D = dimension
    n_meas = labels.shape[1]
    t = np.arange(D)
    digits = np.empty((labels.shape[0], D, n_meas), dtype=np.int64)
    digits[:, :, 0] = t
    if n_meas > 1:
        digits[:, :, 1:] = np.mod(t[None, :, None] - labels[:, None, 1:], D)
    rows = digits @ (D ** np.arange(n_meas - 1, -1, -1, dtype=np.int64))
    bra = root_of_unity_powers(-labels[:, :1] * t[None, :], D) / np.sqrt(D)
    return np.einsum("lt,ltu->lu", bra, mat[rows])


def _label_array(dimension: int, n_meas: int) -> np.ndarray:
    grids = np.indices((dimension,) * n_meas).reshape(n_meas, -1).T
    return np.ascontiguousarray(grids)


def project_all(state: StateVector, spec: MeasurementSpec) -> tuple[list[GBellLabel], np.ndarray]:
    """Unnormalized projections for every label, in enumeration order.

    Returns the labels and an array of shape (D**A, D**U).
    """
    D = state.dimension
    check_size(D, len(spec.particles), what="measurement basis")
    mat, _ = _split(state, spec)
    raw = _label_array(D, len(spec.particles))
    chunk = max(1, _CHUNK_ENTRIES // (D * mat.shape[1]))
    out = np.empty((raw.shape[0], mat.shape[1]), dtype=np.complex128)
    for start in range(0, raw.shape[0], chunk):
        out[start:start + chunk] = _project_batch(mat, raw[start:start + chunk], D)
    labels = list(enumerate_basis(D, len(spec.particles)))
    return labels, out


def collapse_all(state: StateVector, spec: MeasurementSpec) -> list[CollapseResult]:
    labels, projected = project_all(state, spec)
    remaining = state.num_qudits - len(spec.particles)
    return [_collapse(lab, vec, state.dimension, remaining) for lab, vec in zip(labels, projected)]


def distribution(state: StateVector, spec: MeasurementSpec) -> OutcomeDistribution:
    labels, projected = project_all(state, spec)
    probs = np.einsum("lu,lu->l", projected.conj(), projected).real
    return OutcomeDistribution(tuple(labels), probs)


def sample(state: StateVector, spec: MeasurementSpec, seed: int) -> CollapseResult:
    """Draw one outcome with a PCG64 generator seeded by ``seed``.

    One uniform double from ``Generator.random`` is mapped through the
    cumulative distribution over labels in enumeration order.
    """
    dist = distribution(state, spec)
    probs = np.where(dist.probabilities > PROBABILITY_FLOOR, dist.probabilities, 0.0)
    cdf = np.cumsum(probs)
    if cdf[-1] <= ALGEBRA_TOL:
        raise ValueError("state has no feasible outcome; is it normalized?")
    u = np.random.Generator(np.random.PCG64(int(seed))).random()
    idx = int(np.searchsorted(cdf / cdf[-1], u, side="right"))
    idx = min(idx, len(cdf) - 1)
    return project(state, spec, dist.labels[idx])

