"""
Three Bell pairs become a GHZ state
===================================

Measure one qubit from each of three independent Bell pairs in the
three-qubit generalized Bell basis. The three partners, which never met,
end up in a GHZ-type state psi(l; k1, k2) fixed by the outcome.
"""

from quswap import (
    MultiEntangledSpec,
    SwapScenario,
    feasible_labels,
    predict_general,
    verify_scenario,
)

pair = MultiEntangledSpec(2, 0, (0,))
scenario = SwapScenario(2, (pair, pair, pair), (1, 1, 1))
print("measured:", scenario.measured_particles(), "kept:", scenario.unmeasured_particles())

for label in feasible_labels(scenario):
    print(label, "->", predict_general(scenario, label).result)

report = verify_scenario(scenario)
print("\nall outcomes checked against brute force:", report.passed)
print("largest fidelity deviation:", report.max_fidelity_deviation)

# larger systems: a 4-qutrit state and a 3-qutrit state, two and one particles measured
big = SwapScenario(3, (MultiEntangledSpec(3, 1, (2, 1, 0)), MultiEntangledSpec(3, 2, (1, 2))), (2, 1))
label = feasible_labels(big)[4]
pred = predict_general(big, label)
print(f"\n{label}: remaining {pred.result.num_particles} qutrits in {pred.result}, "
      f"n^j - n^1 = {pred.offsets}")
print("verified:", verify_scenario(big).passed)
