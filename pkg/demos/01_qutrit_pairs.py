"""
Swapping entanglement between two qutrit pairs
==============================================

Particles 0-1 and 2-3 start as two independent maximally entangled pairs.
A generalized Bell measurement on particles 1 and 2 leaves 0 and 3
entangled, and the outcome fixes exactly which entangled state they share.
"""

from quswap import (
    GBellLabel,
    MeasurementSpec,
    MultiEntangledSpec,
    collapse_all,
    fidelity_up_to_phase,
    make_entangled,
    predict_pairs,
    tensor,
)

D = 3
first = make_entangled(MultiEntangledSpec(D, 0, (0,)))
second = make_entangled(MultiEntangledSpec(D, 0, (1,)))
state = tensor(first, second)

# nine product terms |n n>|m (m-1)>, each with amplitude 1/3
for digits, amp in state.support():
    print(digits, round(amp.real, 6))

# measure particles 1 and 2; particle 1 carries the phase index r
spec = MeasurementSpec((1, 2))
print("\noutcome      p         state of 0,3       fidelity")
for res in collapse_all(state, spec):
    l, k = predict_pairs(D, 0, 0, 0, 1, res.label.r, res.label.s[0])
    predicted = MultiEntangledSpec(D, l, (k,))
    fid = fidelity_up_to_phase(res.post_state, make_entangled(predicted))
    print(f"{str(res.label):12} {res.probability:.6f}  {str(predicted):18} {fid:.12f}")

# every outcome is equally likely and every one leaves a maximally entangled pair
