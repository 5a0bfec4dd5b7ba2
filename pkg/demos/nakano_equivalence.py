"""The ODE norm against the Luxemburg-type norm with modular s^p / p.

Their ratio never leaves [1/2, 2]; for a constant exponent q it is
exactly q^(1/q).
"""

import numpy as np

from odenorm import Exponent, StepFunction, equivalence_ratio, nakano_norm
from odenorm import generators as gen

f = StepFunction.constant(1.0)
print("nakano norm of 1, p = 2:", nakano_norm(f, Exponent.constant(2.0)), "=", 2**-0.5)
for q in (1.0, 1.5, 2.0, np.e, 5.0, 20.0):
    print(f"q = {q:6.3f}   ratio = {equivalence_ratio(f, Exponent.constant(q)):.12f}"
          f"   q^(1/q) = {q ** (1 / q):.12f}")

ratios = []
for case in range(2000):
    rng = gen.case_rng(42, case)
    part = gen.random_partition(rng)
    ratios.append(equivalence_ratio(gen.random_step(rng, part), gen.random_exponent(rng, part)))
print(f"2000 random instances: ratio in [{min(ratios):.4f}, {max(ratios):.4f}]")
