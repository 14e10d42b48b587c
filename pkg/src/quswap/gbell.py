"""Maximally entangled multi-qudit states and the generalized Bell basis.

The M-particle state with phase index ``l`` and offsets ``k_1..k_{M-1}`` is

    psi(l; k) = D**-1/2 sum_n exp(2 pi i l n / D) |n> |n - k_1> ... |n - k_{M-1}>

(all digit arithmetic mod D). The same family, relabelled ``bell(r; s)``, is
the measurement basis.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .state import StateVector, check_size, digits_to_index
from .weyl import apply_rp, apply_rx, root_of_unity_powers


def _reduced(values: Sequence[int], dimension: int) -> tuple[int, ...]:
    return tuple(int(v) % dimension for v in values)


@dataclass(frozen=True)
class MultiEntangledSpec:
    """Label ``(l; k_1..k_{M-1})`` of an M-qudit maximally entangled state."""

    dimension: int
    l: int
    k: tuple[int, ...] = ()

    def __post_init__(self):
        if self.dimension < 2:
            raise ValueError(f"dimension must be >= 2, got {self.dimension}")
        object.__setattr__(self, "l", int(self.l) % self.dimension)
        object.__setattr__(self, "k", _reduced(self.k, self.dimension))

    @property
    def num_particles(self) -> int:
        return len(self.k) + 1

    def offsets(self) -> tuple[int, ...]:
        """Per-particle digit offsets, with 0 for the reference particle."""
        return (0,) + self.k

    def __str__(self) -> str:
        return _render("psi", self.l, self.k)


@dataclass(frozen=True)
class GBellLabel:
    """Outcome label ``(r; s_1..s_{M-1})`` of a generalized Bell measurement."""

    dimension: int
    r: int
    s: tuple[int, ...] = ()

    def __post_init__(self):
        if self.dimension < 2:
            raise ValueError(f"dimension must be >= 2, got {self.dimension}")
        object.__setattr__(self, "r", int(self.r) % self.dimension)
        object.__setattr__(self, "s", _reduced(self.s, self.dimension))

    @property
    def num_particles(self) -> int:
        return len(self.s) + 1

    def as_spec(self) -> MultiEntangledSpec:
        return MultiEntangledSpec(self.dimension, self.r, self.s)

    def __str__(self) -> str:
        return _render("bell", self.r, self.s)


def _render(name: str, head: int, tail: Sequence[int]) -> str:
    if not tail:
        return f"{name}({head};)"
    return f"{name}({head}; {','.join(str(v) for v in tail)})"


_LABEL_RE = re.compile(r"^\s*(psi|bell)\(\s*(\d+)\s*;\s*([\d,\s]*)\)\s*$")


def parse_label(text: str, dimension: int) -> MultiEntangledSpec | GBellLabel:
    """Inverse of ``str()`` on specs and labels."""
    m = _LABEL_RE.match(text)
    if m is None:
        raise ValueError(f"not a psi(...) or bell(...) label: {text!r}")
    kind, head, tail = m.groups()
    values = tuple(int(v) for v in tail.replace(" ", "").split(",") if v)
    cls = MultiEntangledSpec if kind == "psi" else GBellLabel
    return cls(dimension, int(head), values)


def make_entangled(spec: MultiEntangledSpec | GBellLabel) -> StateVector:
    if isinstance(spec, GBellLabel):
        spec = spec.as_spec()
    D, M = spec.dimension, spec.num_particles
    amps = np.zeros(check_size(D, M), dtype=np.complex128)
    phases = root_of_unity_powers(np.arange(D) * spec.l, D) / np.sqrt(D)
    for n in range(D):
        digits = [(n - off) % D for off in spec.offsets()]
        amps[digits_to_index(digits, D)] = phases[n]
    return StateVector(D, M, amps)


def enumerate_basis(dimension: int, num_particles: int) -> Iterator[GBellLabel]:
    """All D**M labels, ``r`` most significant, then s_1, s_2, ..."""
    if num_particles < 1:
        raise ValueError("a basis needs at least one particle")
    check_size(dimension, num_particles, what="basis")
    for digits in itertools.product(range(dimension), repeat=num_particles):
        yield GBellLabel(dimension, digits[0], digits[1:])


def bell_from_shifts(m: int, n: int, dimension: int) -> StateVector:
    """Build psi(m; n) from psi(0; 0) by local shifts.

    The phase shift acts on particle 0 and the cyclic shift on particle 1 by
    ``-n``: with ``apply_rx`` moving |d> to |d + n>, shifting by ``+n`` would
    land on psi(m; -n) instead.
    """
    state = make_entangled(MultiEntangledSpec(dimension, 0, (0,)))
    state = apply_rp(state, 0, m)
    return apply_rx(state, 1, (dimension - n) % dimension)
