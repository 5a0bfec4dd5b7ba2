"""Mixed sequence norms and the varying-exponent sequence norm.

For p <= r, transposition is a contraction l^p(l^r) -> l^r(l^p), and
disjointly supported matrices add up no faster than an l^p sum.
"""

import numpy as np

from odenorm import (
    VarExpSequence,
    disjoint_matrix_sum_check,
    mixed_norm,
    nesting_inequality_check,
    seq_norm,
    transpose_contraction_check,
)
from odenorm.sequence_space import seq_norm_left

a = np.array([[1.0, 2.0], [3.0, 4.0]])
print("l^2(l^1) norm:", mixed_norm(a, 1, 2), "=", np.sqrt(58))
rep = transpose_contraction_check(a, 1.0, 2.0)
print(f"transpose: {rep.lhs:.6f} <= {rep.rhs:.6f}")

rng = np.random.default_rng(0)
b = rng.uniform(size=(5, 5))
mask = rng.integers(0, 2, b.shape).astype(bool)
rep = disjoint_matrix_sum_check([np.where(mask, b, 0), np.where(mask, 0, b)], 2.0, 3.0)
print(f"disjoint sum: {rep.lhs:.6f} <= {rep.rhs:.6f}")
rep = nesting_inequality_check(1, 1, 1, 1, 2)
print(f"nesting: {rep.lhs:.6f} <= {rep.rhs:.6f}")

x = VarExpSequence((1, 1, 1), (1, 2))
print("left-to-right fold:", seq_norm(x), "  right-to-left fold:", seq_norm_left(x))
