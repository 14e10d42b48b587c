"""
Randomized verification with negative controls
==============================================

Draw random scenarios, measure every outcome by brute force, and compare
against the closed form. Then break one modular term of the predictor at a
time and watch the campaign catch it.
"""

import time

from quswap import Limits, mutated_predictor, random_particles, random_scenario, verify_scenario
from quswap.harness import MUTATION_TERMS

limits = Limits(min_D=2, max_D=3, min_q=2, max_q=3, max_total_qudits=10)
seeds = range(200)

t0 = time.perf_counter()
reports = [verify_scenario(random_scenario(seed, limits)) for seed in seeds]
print(f"{sum(r.passed for r in reports)}/{len(reports)} scenarios pass "
      f"({time.perf_counter() - t0:.2f} s)")

# measured particles need not be the last ones of each system
shuffled = [verify_scenario(sc, particles=random_particles(seed, sc))
            for seed, sc in ((s, random_scenario(s, limits)) for s in seeds)]
print(f"{sum(r.passed for r in shuffled)}/{len(shuffled)} pass with random measured subsets")

for term in MUTATION_TERMS:
    predictor = mutated_predictor(term)
    failing = sum(not verify_scenario(random_scenario(s, limits), predictor=predictor).passed
                  for s in seeds)
    print(f"mutation {term:10s}: caught in {failing} of {len(seeds)} scenarios")
