"""Compare the solver's flexible ratio with the best ratio any allocation can reach.

For small instances every allocation can be enumerated. The solver only
promises its guarantee, so it may leave some slack against the optimum, but
it can never beat it.
"""

from fractions import Fraction

from amms import alpha_for, brute_force_best_alpha, format_rational, solve
from amms.harness import tight_example, gen_random

cases = [("tight example", tight_example())]
cases += [(f"adversarial seed {s}", gen_random(3, 7, "adversarial", s)) for s in range(4)]
cases += [(f"uniform n=4 seed {s}", gen_random(4, 7, "uniform", s)) for s in range(2)]

print(f"{'instance':<22} {'solver':>8} {'optimum':>8} {'bound':>6}")
for name, instance in cases:
    allocation, _ = solve(instance)
    achieved = max(Fraction(1), max(allocation.ratios))
    best = brute_force_best_alpha(instance)
    print(f"{name:<22} {format_rational(achieved):>8} {format_rational(best):>8} "
          f"{format_rational(alpha_for(instance.n)):>6}")
