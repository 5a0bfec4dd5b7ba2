"""Weights, and the change of variables into the universal exponent.

A density w turns L^p(m) into L^p(w dm); multiplying by w^(-1/p) is an
isometry between them.  An exponent p with finitely many monotone pieces
is matched, piece by piece, to pieces of

    p0(t) = u sin u + u + 1,   u = 1 / (1 - t),

and composing with the inverse map carries L^p(|p'| dm) into
L^p0(|p0'| dm) without changing norms.
"""

import numpy as np

from odenorm import (
    Density,
    Exponent,
    StepFunction,
    WeightedSpec,
    build_embedding,
    embed_isometry_check,
    find_monotone_pieces,
    p0_eval,
    weight_isometry_check,
    weighted_norm,
)
from odenorm.weighted_embedding import BUILTIN_EXPONENTS

f = StepFunction([0, 0.4, 1], [2.0, -1.0])
spec = WeightedSpec(Exponent([0, 0.7, 1], [1.5, 3.0]), Density([0, 0.5, 1], [0.2, 6.0]))
print("weighted norm:", weighted_norm(f, spec))
print("isometry:", weight_isometry_check(f, spec))

print("p0(0) =", p0_eval(0.0))
for piece in find_monotone_pieces((2, 3), 4):
    print("  p0 sweeps [2, 3]", piece.direction.value, "on", piece.interval)

p, dp = BUILTIN_EXPONENTS["affine"]
one = StepFunction.constant(1.0)
for k in range(8, 15, 2):
    rep = embed_isometry_check(one, build_embedding(p, dp, nodes=2**k))
    print(f"2^{k:2d} nodes: source {rep.source_norm:.12f}  target {rep.target_norm:.12f}"
          f"  defect {rep.defect:.2e}")

p, dp = BUILTIN_EXPONENTS["sine"]
emap = build_embedding(p, dp, nodes=4096)
for row in emap.summary():
    print(row)
x = np.linspace(0, 1, 5)
print("p0(T(x)) - p(x):", p0_eval(emap.T(x)) - p(x))
