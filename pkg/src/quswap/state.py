"""Dense state vectors for registers of D-level systems.

Amplitudes are stored big-endian: the ket |d_0 d_1 ... d_{N-1}> lives at
index sum_i d_i * D**(N-1-i), so particle 0 is the leftmost factor of every
tensor product and ``amplitudes.reshape((D,) * N)`` has one axis per particle.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator

import numpy as np

#: Default cap on the number of amplitudes any constructor will allocate.
DEFAULT_MAX_AMPLITUDES = 2**26

ALGEBRA_TOL = 1e-12
COMPARE_TOL = 1e-10

_max_amplitudes = DEFAULT_MAX_AMPLITUDES


class IncompatibleStatesError(ValueError):
    """Operands disagree in dimension or particle count."""


class DegenerateStateError(ValueError):
    """A (near) zero vector was given where a direction is required."""


class SizeGuardError(ValueError):
    """A requested object would exceed the amplitude cap."""


def max_amplitudes() -> int:
    return _max_amplitudes


@contextmanager
def amplitude_limit(limit: int) -> Iterator[None]:
    """Temporarily replace the amplitude cap (used by the command line)."""
    global _max_amplitudes
    if limit < 1:
        raise ValueError("amplitude limit must be positive")
    previous = _max_amplitudes
    _max_amplitudes = int(limit)
    try:
        yield
    finally:
        _max_amplitudes = previous


def check_size(dimension: int, count: int, what: str = "state") -> int:
    """Return ``dimension ** count`` or raise if it exceeds the cap."""
    size = int(dimension) ** int(count)
    if size > _max_amplitudes:
        raise SizeGuardError(
            f"{what} needs {dimension}**{count} = {size} entries, "
            f"above the limit of {_max_amplitudes}"
        )
    return size


@dataclass(frozen=True, eq=False)
class StateVector:
    """Immutable amplitude vector of ``num_qudits`` qudits of dimension ``dimension``.

    A zero-qudit vector (one amplitude) is allowed; it records the scalar left
    over when every particle of a register has been measured.
    """

    dimension: int
    num_qudits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.dimension < 2:
            raise ValueError(f"dimension must be >= 2, got {self.dimension}")
        if self.num_qudits < 0:
            raise ValueError(f"num_qudits must be >= 0, got {self.num_qudits}")
        size = check_size(self.dimension, self.num_qudits)
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != size:
            raise ValueError(
                f"expected {size} amplitudes for {self.num_qudits} qudits of "
                f"dimension {self.dimension}, got {amps.size}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, dimension: int, digits) -> "StateVector":
        """Computational basis ket |digits>."""
        digits = [int(d) for d in digits]
        if any(not 0 <= d < dimension for d in digits):
            raise ValueError(f"digits {digits} out of range for dimension {dimension}")
        amps = np.zeros(check_size(dimension, len(digits)), dtype=np.complex128)
        amps[digits_to_index(digits, dimension)] = 1.0
        return cls(dimension, len(digits), amps)

    def __len__(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = ALGEBRA_TOL) -> bool:
        return abs(float(np.vdot(self.amplitudes, self.amplitudes).real) - 1.0) <= tol

    def as_tensor(self) -> np.ndarray:
        """Read-only view with one axis per particle."""
        return self.amplitudes.reshape((self.dimension,) * self.num_qudits)

    def scaled(self, factor: complex) -> "StateVector":
        return StateVector(self.dimension, self.num_qudits, factor * self.amplitudes)

    def support(self, tol: float = ALGEBRA_TOL) -> list[tuple[tuple[int, ...], complex]]:
        """Nonzero amplitudes as ``(digits, amplitude)`` pairs in index order."""
        out = []
        for idx in np.flatnonzero(np.abs(self.amplitudes) > tol):
            out.append((index_to_digits(int(idx), self.dimension, self.num_qudits),
                        complex(self.amplitudes[idx])))
        return out

    def __repr__(self) -> str:
        return f"StateVector(dimension={self.dimension}, num_qudits={self.num_qudits})"


@dataclass(frozen=True, eq=False)
class ReducedDensity:
    """Single-particle density matrix."""

    dimension: int
    entries: np.ndarray

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)

    def is_hermitian(self, tol: float = ALGEBRA_TOL) -> bool:
        return bool(np.max(np.abs(self.entries - self.entries.conj().T)) <= tol)

    def distance_to_maximally_mixed(self) -> float:
        """Max-norm distance to I / D."""
        target = np.eye(self.dimension) / self.dimension
        return float(np.max(np.abs(self.entries - target)))


def digits_to_index(digits, dimension: int) -> int:
    idx = 0
    for d in digits:
        idx = idx * dimension + int(d)
    return idx


def index_to_digits(index: int, dimension: int, num_qudits: int) -> tuple[int, ...]:
    digits = []
    for _ in range(num_qudits):
        index, d = divmod(index, dimension)
        digits.append(d)
    return tuple(reversed(digits))


def _require_same_dimension(u: StateVector, v: StateVector) -> None:
    if u.dimension != v.dimension:
        raise IncompatibleStatesError(
            f"dimension mismatch: {u.dimension} vs {v.dimension}"
        )


def _require_same_shape(u: StateVector, v: StateVector) -> None:
    _require_same_dimension(u, v)
    if u.num_qudits != v.num_qudits:
        raise IncompatibleStatesError(
            f"particle count mismatch: {u.num_qudits} vs {v.num_qudits}"
        )


def tensor(u: StateVector, v: StateVector) -> StateVector:
    """u (x) v, with u's particles first."""
    _require_same_dimension(u, v)
    n = u.num_qudits + v.num_qudits
    check_size(u.dimension, n)
    return StateVector(u.dimension, n, np.kron(u.amplitudes, v.amplitudes))


def tensor_all(states) -> StateVector:
    states = list(states)
    if not states:
        raise ValueError("need at least one state")
    out = states[0]
    for s in states[1:]:
        out = tensor(out, s)
    return out


def inner(u: StateVector, v: StateVector) -> complex:
    """<u|v>, antilinear in the first argument."""
    _require_same_shape(u, v)
    return complex(np.vdot(u.amplitudes, v.amplitudes))


def fidelity_up_to_phase(u: StateVector, v: StateVector) -> float:
    """|<u|v>|; equals 1 exactly when the normalized inputs differ by a global phase."""
    return abs(inner(u, v))


def normalize(state: StateVector) -> StateVector:
    norm = state.norm()
    if norm <= ALGEBRA_TOL:
        raise DegenerateStateError("degenerate state: cannot normalize a zero vector")
    return state.scaled(1.0 / norm)


def reduce_to_single(state: StateVector, particle: int) -> ReducedDensity:
    """Partial trace over every particle except ``particle``."""
    if not 0 <= particle < state.num_qudits:
        raise IndexError(
            f"particle {particle} out of range for {state.num_qudits} qudits"
        )
    t = np.moveaxis(state.as_tensor(), particle, 0).reshape(state.dimension, -1)
    return ReducedDensity(state.dimension, t @ t.conj().T)
