r"""Norm-accumulation curves for variable exponents.

The accumulation function :math:`\varphi_f(t) = \|1_{[0,t]} f\|` solves

.. math::
    \varphi'(t) = \frac{|f(t)|^{p(t)}}{p(t)}\,\varphi(t)^{1-p(t)}

in the Carathéodory sense.  On a cell where ``f`` and ``p`` are constant
the solution is closed form,

.. math::
    \varphi(t_k + \Delta) = \varphi(t_k) \boxplus_{p_k} \Delta^{1/p_k}|f_k|,

so step data is propagated exactly, cell by cell, with no time stepping.
A weight ``w = d\mu/dm`` replaces ``\Delta`` by ``w_k \Delta``.

The zero initial value is reached through the stabilization ladder
``a_k = base**k``; every cell map is continuous and 1-Lipschitz in the
incoming value, so the ladder converges to the curve started from 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import NonConvergenceError, ValidationError
from .function_model import (
    Exponent,
    Partition,
    StepFunction,
    refine_all,
    sample_to_step,
    validate_exponent,
)
from .sequence_space import oplus

__all__ = [
    "SolveConfig",
    "NormCurve",
    "phi_step_exact",
    "stabilization_ladder",
    "phi_stabilized",
    "norm",
    "norm_general",
    "disjoint_estimates_check",
    "sup_bound_check",
    "EstimatesReport",
    "SupBoundReport",
    "SolverInvariantError",
]


class SolverInvariantError(RuntimeError):
    """A mathematical bound the engine must satisfy was violated."""


@dataclass(frozen=True)
class SolveConfig:
    abs_tol: float = 1e-10
    ladder_base: float = 0.5
    max_ladder_steps: int = 60
    grid_doublings: int = 4
    base_cells: int = 64

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValidationError("abs_tol must be positive")
        if not 0 < self.ladder_base < 1:
            raise ValidationError("ladder_base must lie in (0, 1)")
        if self.max_ladder_steps < 2:
            raise ValidationError("max_ladder_steps must be >= 2")
        if self.grid_doublings < 1 or self.base_cells < 1:
            raise ValidationError("grid_doublings and base_cells must be >= 1")

    def ladder(self):
        return self.ladder_base ** np.arange(self.max_ladder_steps, dtype=float)


@dataclass(frozen=True, eq=False)
class NormCurve:
    """``phi`` at every breakpoint of ``partition``.

    ``initial_value`` is 0 for stabilized curves; ``ladder_steps`` and
    ``ladder_gap`` record how the stabilization ladder terminated.
    """

    partition: Partition
    phi: np.ndarray
    initial_value: float = 0.0
    ladder_steps: int = 0
    ladder_gap: float = 0.0
    converged: bool = True

    @property
    def t(self):
        return self.partition.breakpoints

    @property
    def value(self):
        return float(self.phi[-1])

    def to_csv(self, header=True):
        lines = ["t,phi"] if header else []
        lines += [f"{t!r},{v!r}" for t, v in zip(self.t.tolist(), self.phi.tolist())]
        return "\n".join(lines) + "\n"


def _prepare(f, p, density):
    if not isinstance(p, Exponent):
        p = validate_exponent(p)
    if density is None:
        f, p = refine_all(f, p)
        masses = f.widths
    else:
        f, p, density = refine_all(f, p, density)
        masses = density.values * f.widths
    return f.partition, masses, np.abs(f.values), p.values


def _propagate_scalar(masses, fabs, p, a):
    out = np.empty(masses.size + 1)
    phi = float(a)
    out[0] = phi
    for k in range(masses.size):
        fk = fabs[k]
        if fk != 0.0:
            pk = p[k]
            b = masses[k] ** (1.0 / pk) * fk
            if pk == 1.0:
                phi = phi + b
            else:
                hi, lo = (phi, b) if phi >= b else (b, phi)
                if hi > 0.0:
                    phi = hi * math.exp(math.log1p((lo / hi) ** pk) / pk)
        out[k + 1] = phi
    return out


def _propagate(masses, fabs, p, a):
    """Curves for every initial value in ``a``; shape ``(m + 1, len(a))``."""
    a = np.asarray(a, dtype=float)
    out = np.empty((masses.size + 1, a.size))
    phi = a.copy()
    out[0] = phi
    for k in range(masses.size):
        fk = fabs[k]
        if fk != 0.0:
            pk = p[k]
            b = masses[k] ** (1.0 / pk) * fk
            if pk == 1.0:
                phi = phi + b
            else:
                hi = np.maximum(phi, b)
                lo = np.minimum(phi, b)
                safe = np.where(hi > 0.0, hi, 1.0)
                phi = hi * np.exp(np.log1p((lo / safe) ** pk) / pk)
        out[k + 1] = phi
    return out


def phi_step_exact(f, p, a=0.0, density=None):
    """Exact accumulation curve from initial value ``a >= 0``."""
    if a < 0:
        raise ValidationError("initial value must be non-negative")
    part, masses, fabs, pv = _prepare(f, p, density)
    return NormCurve(part, _propagate_scalar(masses, fabs, pv, a), initial_value=float(a))


def stabilization_ladder(f, p, cfg=None, density=None):
    """All ladder curves at once.

    Returns ``(a, curves)`` with ``curves[i]`` the breakpoint values of the
    solution started from ``a[i] = cfg.ladder_base**i``.
    """
    cfg = cfg or SolveConfig()
    part, masses, fabs, pv = _prepare(f, p, density)
    a = cfg.ladder()
    return a, _propagate(masses, fabs, pv, a).T


def phi_stabilized(f, p, cfg=None, density=None):
    """Stabilized (``0+``) accumulation curve.

    Runs the ladder until two successive curves are within ``cfg.abs_tol``
    in sup norm and returns the limit curve.  Raises
    :class:`NonConvergenceError` when the ladder is exhausted.
    """
    cfg = cfg or SolveConfig()
    part, masses, fabs, pv = _prepare(f, p, density)
    a = np.append(cfg.ladder(), 0.0)
    curves = _propagate(masses, fabs, pv, a).T
    ladder, limit = curves[:-1], curves[-1]
    gaps = np.max(np.abs(np.diff(ladder, axis=0)), axis=1)
    hit = np.flatnonzero(gaps < cfg.abs_tol)
    if hit.size == 0:
        raise NonConvergenceError(
            f"stabilization ladder did not settle within {cfg.max_ladder_steps} steps "
            f"(last gap {gaps[-1]:.3e})",
            gap=float(gaps[-1]),
            last=ladder[-1],
            previous=ladder[-2],
        )
    k = int(hit[0]) + 1
    return NormCurve(part, limit, 0.0, ladder_steps=k + 1, ladder_gap=float(gaps[k - 1]))


def norm(f, p, cfg=None, density=None):
    """``||f||_{L^{p(.)}}``: the stabilized curve at ``t = 1``."""
    return phi_stabilized(f, p, cfg, density).value


def norm_general(f, p, cfg=None):
    """Norm of general evaluators by midpoint sampling on doubling grids.

    Returns ``(value, error_estimate)`` where the estimate is the gap
    between the last two grids.
    """
    cfg = cfg or SolveConfig()
    values = []
    for j in range(cfg.grid_doublings + 1):
        n = cfg.base_cells * 2**j
        fs = sample_to_step(f, n)
        ps = validate_exponent(sample_to_step(p, n))
        values.append(norm(fs, ps, cfg))
    return values[-1], abs(values[-1] - values[-2])


class EstimatesReport(NamedTuple):
    norm_of_sum: float
    upper_bound: float
    lower_bound: float

    def holds(self, tol=0.0):
        return self.lower_bound - tol <= self.norm_of_sum <= self.upper_bound + tol


def disjoint_estimates_check(fs, p, cfg=None):
    """Upper ``ess inf p`` and lower ``ess sup p`` estimates for disjoint ``fs``.

    Returns ``(||sum f_i||, ⊕^{ess inf p} ||f_i||, ⊕^{ess sup p} ||f_i||)``.
    """
    cfg = cfg or SolveConfig()
    if not fs:
        raise ValidationError("need at least one function")
    if not isinstance(p, Exponent):
        p = validate_exponent(p)
    *fs, p = refine_all(*fs, p)
    nonzero = np.sum([f.values != 0 for f in fs], axis=0)
    if np.any(nonzero > 1):
        k = int(np.flatnonzero(nonzero > 1)[0])
        raise ValidationError(f"supports overlap on cell {k}")
    total = StepFunction(p.partition, np.sum([f.values for f in fs], axis=0))
    parts = [norm(f, p, cfg) for f in fs]
    return EstimatesReport(norm(total, p, cfg), oplus(parts, p.ess_inf), oplus(parts, p.ess_sup))


class SupBoundReport(NamedTuple):
    norm: float
    bound: float


def sup_bound_check(f, p, cfg=None):
    """``||f|| <= e * sup|f|``; a violation means the engine is wrong."""
    cfg = cfg or SolveConfig()
    value = norm(f, p, cfg)
    bound = math.e * f.sup_abs()
    if value > bound + cfg.abs_tol:
        raise SolverInvariantError(f"norm {value!r} exceeds e*sup|f| = {bound!r}")
    return SupBoundReport(value, bound)
