r"""Luxemburg-type comparison norms.

.. math::
    \|f\| = \inf\Big\{\lambda > 0 : \int \Phi\big(|f(t)|/\lambda, t\big)\,dm \le 1\Big\}

with ``Φ(s, t) = s**p(t) / p(t)`` (Nakano) or ``s**p(t)`` (plain).  The
modular is continuous and strictly decreasing in ``λ`` for ``f != 0``, so
the infimum is the root of ``modular = 1`` and is found by bisection in
``log λ``.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .errors import NonConvergenceError, ValidationError
from .function_model import Exponent, refine_all, validate_exponent
from .phi_solver import SolveConfig, norm

__all__ = ["ModularKind", "modular", "nakano_norm", "equivalence_ratio"]


class ModularKind(enum.Enum):
    NAKANO_PSI = "psi"
    PLAIN_PHI = "plain"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValidationError(f"unknown modular kind {value!r}; use 'psi' or 'plain'") from None


def _cells(f, p):
    if not isinstance(p, Exponent):
        p = validate_exponent(p)
    f, p = refine_all(f, p)
    return f.widths, np.abs(f.values), p.values


def _modular(widths, fabs, p, lam, kind):
    with np.errstate(over="ignore", divide="ignore"):
        # s**p through exp(p log s); overflow to inf is the right answer here
        s = fabs / lam
        logs = np.log(np.where(s > 0, s, 1.0))
        terms = np.where(s > 0, np.exp(p * logs), 0.0)
    if kind is ModularKind.NAKANO_PSI:
        terms = terms / p
    return float(np.dot(widths, terms))


def modular(f, p, lam, kind=ModularKind.NAKANO_PSI):
    """``sum_k Δ_k Φ(|f_k| / λ, p_k)``."""
    if not lam > 0:
        raise ValidationError("lambda must be positive")
    return _modular(*_cells(f, p), float(lam), ModularKind.parse(kind))


def nakano_norm(f, p, kind=ModularKind.NAKANO_PSI, tol=1e-12, max_doublings=200):
    """Infimum ``λ`` with ``modular(f, λ) <= 1`` to relative width ``tol``."""
    kind = ModularKind.parse(kind)
    widths, fabs, pv = _cells(f, p)
    top = float(fabs.max()) if fabs.size else 0.0
    if top == 0.0:
        return 0.0

    def excess(lam):
        return _modular(widths, fabs, pv, lam, kind) - 1.0

    # at λ = sup|f| every term is <= Δ_k, so the modular is <= 1
    hi = top
    lo = top
    for _ in range(max_doublings):
        if excess(lo) > 0:
            break
        hi = lo
        lo = lo / 2.0
    else:
        raise NonConvergenceError(
            f"no infeasible lambda found after {max_doublings} halvings", best=hi
        )
    while hi / lo - 1.0 > tol:
        mid = math.sqrt(lo * hi)
        if mid <= lo or mid >= hi:
            break
        if excess(mid) > 0:
            lo = mid
        else:
            hi = mid
    return hi


def equivalence_ratio(f, p, cfg=None):
    """ODE norm divided by the ψ-Nakano norm; lies in ``[1/2, 2]``."""
    cfg = cfg or SolveConfig()
    if not np.any(f.values != 0):
        raise ValidationError("equivalence ratio is undefined for f = 0")
    return norm(f, p, cfg) / nakano_norm(f, p, ModularKind.NAKANO_PSI)
