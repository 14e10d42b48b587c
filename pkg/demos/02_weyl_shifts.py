"""
Shift and phase operators
=========================

The cyclic shift moves |d> to |d + n>; the phase operator multiplies |d>
by exp(2 pi i m d / D). Together they generate the whole two-qudit
generalized Bell basis from psi(0; 0) with local operations only.
"""

import numpy as np

from quswap import (
    StateVector,
    apply_rp,
    apply_rx,
    bell_from_shifts,
    fidelity_up_to_phase,
    make_entangled,
    MultiEntangledSpec,
    p_basis_state,
)

D = 5
ket = StateVector.basis(D, [0])
print("shift |0> by 2:", np.round(apply_rx(ket, 0, 2).amplitudes.real, 3))

# the phase operator walks through the Fourier basis
p1 = apply_rp(p_basis_state(1, D), 0, 3)
print("R_p(3)|p_1> == |p_4>:", np.allclose(p1.amplitudes, p_basis_state(4, D).amplitudes))

# the two operators commute up to a root of unity
rng = np.random.default_rng(0)
v = rng.normal(size=D) + 1j * rng.normal(size=D)
s = StateVector(D, 1, v / np.linalg.norm(v))
n, m = 2, 3
lhs = apply_rx(apply_rp(s, 0, m), 0, n).amplitudes
rhs = apply_rp(apply_rx(s, 0, n), 0, m).amplitudes
print("R_x R_p = w^(-mn) R_p R_x:", np.allclose(lhs, np.exp(-2j * np.pi * m * n / D) * rhs))

# local shifts build every psi(m; n); the cyclic shift goes by -n
worst = min(
    fidelity_up_to_phase(bell_from_shifts(m, n, D), make_entangled(MultiEntangledSpec(D, m, (n,))))
    for m in range(D) for n in range(D)
)
print("lowest fidelity over all 25 labels:", worst)
