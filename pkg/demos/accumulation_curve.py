"""How the norm is accumulated along [0, 1].

For step data the accumulation ODE is solved exactly cell by cell; the
zero initial value is approached through a ladder of positive starts.
"""

import numpy as np

from odenorm import Exponent, StepFunction, norm, phi_stabilized, stabilization_ladder
from odenorm.function_model import sample_to_step

# f = 1 with p = 2 on the first half and 4 on the second
f = StepFunction.constant(1.0)
p = Exponent([0, 0.5, 1], [2.0, 4.0])
curve = phi_stabilized(f, p)
print(curve.to_csv())
print("norm =", curve.value, " (0.75 ** 0.25 =", 0.75**0.25, ")")

# Starting from a > 0 overshoots; the ladder a = 2^-k closes the gap.
a, curves = stabilization_ladder(f, p)
for k in (0, 5, 10, 20, 34):
    print(f"a = {a[k]:.3e}   phi(1) = {curves[k, -1]:.15f}")
print("ladder settled after", curve.ladder_steps, "rungs")

# With a constant exponent the classical L^p norm comes back.
t = sample_to_step(lambda s: s, 4096)
print("||t||_3 =", norm(t, Exponent.constant(3.0)), " exact:", 0.25 ** (1 / 3))

# A smoothly varying exponent, sampled on finer and finer grids.
for n in (64, 512, 4096):
    print(n, norm(sample_to_step(lambda s: s, n), Exponent.sample(lambda s: 2 + s, n)))

print("e * sup|f| bounds every norm:", norm(f, p) <= np.e * f.sup_abs())
