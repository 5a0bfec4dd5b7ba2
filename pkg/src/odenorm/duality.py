r"""Conjugate exponents, Hölder's inequality and norming functionals.

For ``1/p + 1/p* = 1`` cellwise, the duality map is

.. math::
    J_p(x)(t) = \operatorname{sign}(x(t))\,|x(t)|^{p(t) - 1}.

With a constant exponent ``∫ x J_p(x) = ||x||_p ||J_p(x)||_{p*}``.  With a
varying exponent that identity breaks (``J_p`` is not homogeneous), and the
functional attaining ``||x||`` is :func:`norming_functional`, built from
the accumulation curve of ``x``:

.. math::
    g_k = \operatorname{sign}(x_k)\Big(\frac{|x_k|}{\varphi_{k+1}}\Big)^{p_k-1}
          \prod_{j>k}\Big(\frac{\varphi_j}{\varphi_{j+1}}\Big)^{p_j-1},

which has ``||g||_{p*} = 1`` and ``∫ x g = ||x||_p`` on step data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import optimize

from .errors import ValidationError
from .function_model import Exponent, StepFunction, refine_all, validate_exponent
from .phi_solver import SolveConfig, _propagate_scalar, norm, phi_stabilized
from .sequence_space import InequalityReport

__all__ = [
    "ConjugatePair",
    "PairingReport",
    "VariationReport",
    "conjugate",
    "duality_map",
    "norming_functional",
    "holder_check",
    "norming_pairing",
    "exact_norming_pairing",
    "truncation_projection",
    "truncation_ladder",
    "extended_norm",
    "special_variation",
]


@dataclass(frozen=True, eq=False)
class ConjugatePair:
    p: Exponent
    p_star: Exponent


class PairingReport(NamedTuple):
    pairing: float
    norm_x: float
    norm_Jx: float
    defect: float

    @property
    def scale(self):
        return max(1.0, self.norm_x * self.norm_Jx)

    @property
    def relative_defect(self):
        return self.defect / self.scale


class VariationReport(NamedTuple):
    value: float
    oracle_value: float
    oracle_converged: bool


def _exponent(p):
    return p if isinstance(p, Exponent) else validate_exponent(p)


def conjugate(p):
    """Cellwise ``p* = p / (p - 1)``; every cell must have ``p > 1``."""
    p = _exponent(p)
    ones = np.flatnonzero(p.values <= 1.0)
    if ones.size:
        raise ValidationError(f"conjugate exponent undefined: p = 1 at cell {int(ones[0])}")
    return ConjugatePair(p, Exponent(p.partition, p.values / (p.values - 1.0)))


def duality_map(x, p):
    """``sign(x) |x|^(p-1)`` cellwise."""
    x, p = refine_all(x, _exponent(p))
    return StepFunction(x.partition, np.sign(x.values) * np.abs(x.values) ** (p.values - 1.0))


def norming_functional(x, p, cfg=None):
    """Unit-norm element of the ``p*`` space attaining ``∫ x g = ||x||_p``.

    Exact on step data.  Returns the zero function when ``x = 0``.
    """
    x, p = refine_all(x, _exponent(p))
    phi = phi_stabilized(x, p, cfg).phi
    xabs = np.abs(x.values)
    pm1 = p.values - 1.0
    active = xabs > 0
    g = np.zeros_like(xabs)
    if not active.any():
        return StepFunction(x.partition, g)
    # log of prod_{j>k} (phi_j / phi_{j+1})^(p_j - 1), zero on frozen cells
    first = np.flatnonzero(active)[0]
    later = active.copy()
    later[first] = False  # phi leaves 0 on this cell; nothing upstream to rescale
    steps = np.zeros_like(xabs)
    steps[later] = pm1[later] * (np.log(phi[1:][later]) - np.log(phi[:-1][later]))
    tail = np.concatenate([np.cumsum(steps[::-1])[::-1][1:], [0.0]])
    g[active] = (xabs[active] / phi[1:][active]) ** pm1[active] * np.exp(-tail[active])
    return StepFunction(x.partition, np.sign(x.values) * g)


def holder_check(f, g, pair, cfg=None):
    """``∫|fg|`` against ``||f||_p ||g||_{p*}``."""
    cfg = cfg or SolveConfig()
    f, g, p, ps = refine_all(f, g, pair.p, pair.p_star)
    lhs = float(np.dot(f.widths, np.abs(f.values * g.values)))
    rhs = norm(f, p, cfg) * norm(g, ps, cfg)
    return InequalityReport(lhs, rhs)


def _pairing(x, g, p, ps, cfg):
    x, g, p, ps = refine_all(x, g, p, ps)
    pairing = float(np.dot(x.widths, x.values * g.values))
    nx = norm(x, p, cfg)
    ng = norm(g, ps, cfg)
    return PairingReport(pairing, nx, ng, abs(pairing - nx * ng))


def norming_pairing(x, p, cfg=None):
    """Both sides of ``∫ x J_p(x) = ||x||_p ||J_p(x)||_{p*}``.

    The identity holds for constant exponents; for varying ones the defect
    is genuinely non-zero (see :func:`exact_norming_pairing`).
    """
    cfg = cfg or SolveConfig()
    pair = conjugate(p)
    return _pairing(x, duality_map(x, pair.p), pair.p, pair.p_star, cfg)


def exact_norming_pairing(x, p, cfg=None):
    """Pairing report for :func:`norming_functional` in place of ``J_p``."""
    cfg = cfg or SolveConfig()
    pair = conjugate(p)
    return _pairing(x, norming_functional(x, pair.p, cfg), pair.p, pair.p_star, cfg)


def truncation_projection(f, p, n):
    """Zero ``f`` wherever ``p`` leaves ``[1 + 1/n, n]``."""
    if n < 2:
        raise ValidationError("truncation level n must be >= 2")
    f, p = refine_all(f, _exponent(p))
    keep = (p.values >= 1.0 + 1.0 / n) & (p.values <= n)
    return StepFunction(f.partition, np.where(keep, f.values, 0.0))


def truncation_ladder(f, p, cfg=None):
    """``[(n, ||1_{p <= n} f||)]`` for ``n = 2, 4, 8, ...`` up to covering ``ess sup p``."""
    cfg = cfg or SolveConfig()
    f, p = refine_all(f, _exponent(p))
    out = []
    n = 2
    while True:
        g = StepFunction(f.partition, np.where(p.values <= n, f.values, 0.0))
        out.append((n, norm(g, p, cfg)))
        if n >= p.ess_sup:
            return out
        n *= 2


def extended_norm(f, p, cfg=None):
    """``sup_n ||1_{p <= n} f||``; equals the norm for bounded step exponents."""
    return max(v for _, v in truncation_ladder(f, p, cfg))


def special_variation(g_prime, pair, cfg=None, maxiter=5000, restarts=200):
    """Dual variation of the absolutely continuous measure ``g' dm``.

    ``value`` comes from the isometric duality, ``||g'||_{p*}``.
    ``oracle_value`` maximizes ``∫ f g' / ||f||_p`` directly over step
    ``f >= 0`` on the common partition: L-BFGS-B in linear and in log
    coordinates, alternated with exact one-dimensional sweeps, restarted
    until the gain stalls.  It is a lower bound even when the optimizer
    stops early.
    """
    cfg = cfg or SolveConfig()
    g, p, ps = refine_all(g_prime, pair.p, pair.p_star)
    value = norm(g, ps, cfg)
    support = g.values != 0
    if not support.any():
        return VariationReport(0.0, 0.0, True)
    widths = g.widths[support]
    gabs = np.abs(g.values[support])
    pv = p.values[support]
    mass = widths * gabs

    # dropping the zero cells of g' keeps the order of accumulation intact
    def neg_ratio(f):
        phi = _propagate_scalar(widths, f, pv, 0.0)
        nf = phi[-1]
        if nf == 0.0:
            return 0.0, -mass
        # reverse sweep through phi_{k+1} = phi_k ⊞_p (w_k^(1/p) f_k)
        dn_df = np.zeros_like(f)
        carry = 1.0
        for k in range(f.size - 1, -1, -1):
            if phi[k + 1] == 0.0:
                break
            scale = widths[k] ** (1.0 / pv[k])
            dn_df[k] = carry * scale * (scale * f[k] / phi[k + 1]) ** (pv[k] - 1.0)
            carry *= (phi[k] / phi[k + 1]) ** (pv[k] - 1.0)
        paired = float(np.dot(mass, f))
        return -paired / nf, -(mass / nf - paired * dn_df / nf**2)

    def neg_ratio_log(z):
        f = np.exp(z)
        val, grad = neg_ratio(f)
        return val, grad * f

    # the ratio is scale invariant and quasi-concave on f >= 0; the optimum
    # can span dozens of decades, so linear and log coordinates alternate
    opts = {"maxiter": maxiter, "ftol": 1e-16, "gtol": 1e-15}
    f = np.ones(gabs.size)
    best = -np.inf
    converged = False
    for _ in range(restarts):
        lin = optimize.minimize(
            neg_ratio, f, jac=True, method="L-BFGS-B",
            bounds=[(0.0, None)] * gabs.size, options=opts,
        )
        f = lin.x / lin.x.max()
        z0 = np.log(np.maximum(f, 1e-300))
        log = optimize.minimize(
            neg_ratio_log, z0, jac=True, method="L-BFGS-B",
            bounds=[(-700.0, 1.0)] * gabs.size, options=opts,
        )
        if log.fun <= lin.fun:
            f = np.exp(log.x - log.x.max())
        f = _coordinate_sweep(neg_ratio, f)
        value_here = -float(neg_ratio(f)[0])
        gain = value_here - best
        best = max(best, value_here)
        if gain <= 1e-15 * abs(best):
            converged = True
            break
    return VariationReport(value, best, converged)


def _coordinate_sweep(neg_ratio, f):
    """One pass of exact 1-D maximization per coordinate (in log scale)."""
    f = f.copy()
    for k in range(f.size):
        def along(z, k=k):
            trial = f.copy()
            trial[k] = math.exp(z)
            return neg_ratio(trial)[0]

        zk = math.log(f[k]) if f[k] > 0 else -700.0
        lo, hi = max(zk - 20.0, -700.0), min(zk + 20.0, 50.0)
        res = optimize.minimize_scalar(along, bounds=(lo, hi), method="bounded",
                                       options={"xatol": 1e-12})
        if res.fun < neg_ratio(f)[0]:
            f[k] = math.exp(res.x)
    return f / f.max()
