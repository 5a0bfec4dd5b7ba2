r"""The :math:`\boxplus_p` calculus and varying-exponent sequence norms.

.. math::
    a \boxplus_p b = (a^p + b^p)^{1/p}

Everything is evaluated by factoring out the larger argument,
``m * (1 + (min/m)**p) ** (1/p)``, so large exponents never overflow.

Mixed norms follow the row convention

.. math::
    \|A\|_{\ell^r(\ell^p)} = \Big(\sum_i \big(\sum_j a_{ij}^p\big)^{r/p}\Big)^{1/r},

inner sum over the column index ``j``, outer over rows ``i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ValidationError

__all__ = [
    "boxplus",
    "oplus",
    "VarExpSequence",
    "NonnegMatrix",
    "seq_norm",
    "seq_norm_left",
    "mixed_norm",
    "transpose_contraction_check",
    "disjoint_matrix_sum_check",
    "nesting_inequality_check",
    "InequalityReport",
]


def boxplus(a, b, p):
    """``(a**p + b**p)**(1/p)`` for ``a, b >= 0`` and ``p >= 1``."""
    if a < 0 or b < 0:
        raise ValidationError("boxplus takes non-negative arguments")
    if p < 1:
        raise ValidationError("boxplus needs p >= 1")
    hi, lo = (a, b) if a >= b else (b, a)
    if hi == 0.0:
        return 0.0
    if p == 1.0:
        return hi + lo
    if math.isinf(p):
        return float(hi)
    r = lo / hi
    return hi * math.exp(math.log1p(r**p) / p)


def oplus(x, p, axis=None):
    """``(sum x**p)**(1/p)`` over ``axis`` for non-negative ``x``."""
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        return 0.0 if axis is None else np.zeros(np.delete(x.shape, axis))
    m = np.max(x, axis=axis, keepdims=True)
    safe = np.where(m > 0, m, 1.0)
    if math.isinf(p):
        out = m
    else:
        out = safe * np.sum((x / safe) ** p, axis=axis, keepdims=True) ** (1.0 / p)
        out = np.where(m > 0, out, 0.0)
    out = np.squeeze(out, axis=axis) if axis is not None else out.reshape(())
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class VarExpSequence:
    """Finite sequence ``x_1..x_{n+1}`` with combining exponents ``p(1)..p(n)``.

    ``p(k)`` joins the accumulated prefix with ``x_{k+1}``.
    """

    values: tuple
    exponents: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        exps = tuple(float(p) for p in self.exponents)
        if not vals:
            raise ValidationError("sequence must have at least one element")
        if len(exps) != len(vals) - 1:
            raise ValidationError(
                f"need {len(vals) - 1} exponents for {len(vals)} values, got {len(exps)}"
            )
        if any(not math.isfinite(v) for v in vals):
            raise ValidationError("sequence values must be finite")
        for k, p in enumerate(exps):
            if not p >= 1.0:
                raise ValidationError(f"exponent below 1 at position {k}")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "exponents", exps)

    @classmethod
    def constant(cls, values, p):
        return cls(tuple(values), (p,) * (len(values) - 1))


def seq_norm(x):
    """Left-to-right fold ``((|x1| ⊞_{p1} |x2|) ⊞_{p2} |x3|) ...``."""
    acc = abs(x.values[0])
    for v, p in zip(x.values[1:], x.exponents):
        acc = boxplus(acc, abs(v), p)
    return acc


def seq_norm_left(x):
    """Right-to-left fold ``|x1| ⊞_{p1} (|x2| ⊞_{p2} (...))``."""
    acc = abs(x.values[-1])
    for v, p in zip(reversed(x.values[:-1]), reversed(x.exponents)):
        acc = boxplus(abs(v), acc, p)
    return acc


class NonnegMatrix:
    """Finite matrix with non-negative finite entries."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        a = np.array(entries, dtype=float)
        if a.ndim != 2:
            raise ValidationError("matrix must be two-dimensional")
        if not np.all(np.isfinite(a)):
            raise ValidationError("matrix entries must be finite")
        if np.any(a < 0):
            i, j = np.argwhere(a < 0)[0]
            raise ValidationError(f"negative entry at ({i}, {j})")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    def __setattr__(self, name, value):
        raise AttributeError("NonnegMatrix is immutable")

    @property
    def T(self):
        return NonnegMatrix(self.entries.T)

    @property
    def shape(self):
        return self.entries.shape

    def __add__(self, other):
        return NonnegMatrix(self.entries + other.entries)

    def __repr__(self):
        return f"NonnegMatrix({self.entries.tolist()!r})"


def _as_matrix(a):
    return a if isinstance(a, NonnegMatrix) else NonnegMatrix(a)


def mixed_norm(a, p, r):
    """``ℓ^r(ℓ^p)`` norm: ``ℓ^p`` within each row, ``ℓ^r`` across rows."""
    a = _as_matrix(a)
    rows = oplus(a.entries, p, axis=1)
    return oplus(rows, r)


class InequalityReport(NamedTuple):
    lhs: float
    rhs: float

    @property
    def slack(self):
        return self.rhs - self.lhs

    def holds(self, tol=0.0):
        return self.lhs <= self.rhs + tol


def _check_order(p, r):
    if not 1.0 <= p <= r:
        raise ValidationError(f"need 1 <= p <= r, got p={p}, r={r}")


def transpose_contraction_check(a, p, r):
    """Both sides of ``⊕^r_j ⊕^p_i x_ij <= ⊕^p_i ⊕^r_j x_ij``.

    The transpose is a norm-one map ``ℓ^p(ℓ^r) -> ℓ^r(ℓ^p)`` when ``p <= r``.
    """
    _check_order(p, r)
    a = _as_matrix(a)
    return InequalityReport(mixed_norm(a.T, p, r), mixed_norm(a, r, p))


def disjoint_matrix_sum_check(mats, p, r):
    """``||sum A_k||_{ℓ^r(ℓ^p)}`` against ``⊕^p_k ||A_k||_{ℓ^r(ℓ^p)}``."""
    _check_order(p, r)
    mats = [_as_matrix(m) for m in mats]
    if not mats:
        raise ValidationError("need at least one matrix")
    shape = mats[0].shape
    if any(m.shape != shape for m in mats):
        raise ValidationError("matrices must share a shape")
    support = np.sum([m.entries > 0 for m in mats], axis=0)
    if np.any(support > 1):
        i, j = np.argwhere(support > 1)[0]
        raise ValidationError(f"matrices overlap at entry ({i}, {j})")
    total = NonnegMatrix(np.sum([m.entries for m in mats], axis=0))
    parts = [mixed_norm(m, p, r) for m in mats]
    return InequalityReport(mixed_norm(total, p, r), oplus(parts, p))


def nesting_inequality_check(a, b, c, p, r):
    """``a ⊞_r (b ⊞_p c)`` against ``(a ⊞_r b) ⊞_p c`` for ``p <= r``."""
    _check_order(p, r)
    return InequalityReport(boxplus(a, boxplus(b, c, p), r), boxplus(boxplus(a, b, r), c, p))
