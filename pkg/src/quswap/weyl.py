"""Cyclic shift and phase operators on single particles of a register.

``apply_rx(n)`` sends |d> to |(d + n) mod D>; ``apply_rp(m)`` multiplies |d>
by exp(2 pi i m d / D) and therefore sends the Fourier ket |p_l> to
|p_{l+m}>. With these conventions

    R_x(n) R_p(m) = exp(-2 pi i m n / D) R_p(m) R_x(n).

Both act as O(D**N) permutations / phase multiplications, never as dense
D**N x D**N matrices.
"""

from __future__ import annotations

import numpy as np

from .state import StateVector


def root_of_unity_powers(exponents, dimension: int) -> np.ndarray:
    """exp(2 pi i e / D) with the exponent reduced mod D first."""
    e = np.mod(np.asarray(exponents, dtype=np.int64), dimension)
    return np.exp(2j * np.pi * e / dimension)


def _check_particle(state: StateVector, particle: int) -> None:
    if not 0 <= particle < state.num_qudits:
        raise IndexError(
            f"particle {particle} out of range for {state.num_qudits} qudits"
        )


def p_basis_state(l: int, dimension: int) -> StateVector:
    """Fourier basis ket |p_l> = D**-1/2 sum_k exp(2 pi i k l / D) |k>."""
    if not 0 <= l < dimension:
        raise ValueError(f"l={l} out of range for dimension {dimension}")
    k = np.arange(dimension)
    return StateVector(dimension, 1, root_of_unity_powers(k * l, dimension) / np.sqrt(dimension))


def apply_rx(state: StateVector, particle: int, n: int) -> StateVector:
    _check_particle(state, particle)
    shifted = np.roll(state.as_tensor(), int(n) % state.dimension, axis=particle)
    return StateVector(state.dimension, state.num_qudits, shifted)


def apply_rp(state: StateVector, particle: int, m: int) -> StateVector:
    _check_particle(state, particle)
    D = state.dimension
    shape = [1] * state.num_qudits
    shape[particle] = D
    phases = root_of_unity_powers(np.arange(D) * int(m), D).reshape(shape)
    return StateVector(D, state.num_qudits, state.as_tensor() * phases)


def shift_matrix(n: int, dimension: int) -> np.ndarray:
    """Dense matrix of ``apply_rx(n)`` on one particle (for cross-checks)."""
    out = np.zeros((dimension, dimension), dtype=np.complex128)
    for d in range(dimension):
        out[(d + n) % dimension, d] = 1.0
    return out


def clock_matrix(m: int, dimension: int) -> np.ndarray:
    """Dense matrix of ``apply_rp(m)`` on one particle (for cross-checks)."""
    return np.diag(root_of_unity_powers(np.arange(dimension) * m, dimension))
