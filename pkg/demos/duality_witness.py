"""Hölder's inequality and the functional that attains the norm.

With a constant exponent, x is normed by J_p(x) = sign(x)|x|^(p-1).  When
the exponent varies, J_p(x) no longer does the job; the attaining
functional is read off the accumulation curve instead.
"""

from odenorm import (
    Exponent,
    StepFunction,
    conjugate,
    exact_norming_pairing,
    holder_check,
    norm,
    norming_functional,
    norming_pairing,
    special_variation,
)

x = StepFunction([0, 0.5, 1], [1.0, 2.0])
for p in (Exponent.constant(3.0), Exponent([0, 0.5, 1], [2.0, 4.0])):
    literal = norming_pairing(x, p)
    exact = exact_norming_pairing(x, p)
    print("p =", p.values.tolist())
    print(f"  with J_p:        <x, g> = {literal.pairing:.12f}"
          f"   ||x|| ||g|| = {literal.norm_x * literal.norm_Jx:.12f}")
    print(f"  with witness g:  <x, g> = {exact.pairing:.12f}"
          f"   ||x|| = {exact.norm_x:.12f}   ||g||* = {exact.norm_Jx:.12f}")

p = Exponent([0, 0.5, 1], [2.0, 4.0])
pair = conjugate(p)
g = norming_functional(x, p)
print("witness values:", g.values.tolist())
y = StepFunction([0, 0.25, 1], [3.0, -1.0])
rep = holder_check(y, g, pair)
print(f"Hölder for another y: {rep.lhs:.6f} <= {rep.rhs:.6f}")

# The dual variation of g' dm is ||g'||_{p*}; a direct maximization agrees.
rep = special_variation(StepFunction([0, 0.3, 1], [1.0, -2.0]), pair)
print(f"variation {rep.value:.12f}   direct maximization {rep.oracle_value:.12f}")
print("norm of g' in p*:", norm(StepFunction([0, 0.3, 1], [1.0, -2.0]), pair.p_star))
