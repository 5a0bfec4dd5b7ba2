r"""Weighted norms and the change-of-variables embedding into ``L^{p0}``.

A density ``w = dμ/dm`` enters the accumulation equation as

.. math::
    \varphi' = w(t)\,\frac{|f|^{p}}{p}\,\varphi^{1-p},

so each cell mass ``Δ_k`` becomes ``w_k Δ_k``.  Multiplying by
``w^{-1/p}`` is then an isometry from ``L^{p}(m)`` onto ``L^{p}(μ)``.

The universal exponent

.. math::
    p_0(t) = u \sin u + u + 1, \qquad u = \frac{1}{1 - t},

oscillates with growing amplitude as ``t -> 1``, so every bounded range
above 1 is swept monotonically, in either direction, infinitely often.
Given a piecewise monotone ``p``, each monotone piece ``Δ_n`` is matched to
a later piece ``Δ'_n`` of ``p0`` running the same way, and
``T_n = p0^{-1} ∘ p`` is tabulated.  Since ``p0(T x) = p(x)``, the measures
``ν = |p'| dm`` and ``μ = |p0'| dm`` satisfy ``T_* ν = μ`` and composition
with ``T^{-1}`` is an isometry of ``L^{p}(ν)`` into ``L^{p0}(μ)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy import optimize

from .errors import NonConvergenceError, ValidationError
from .function_model import Density, Exponent, Partition, StepFunction, refine_all
from .phi_solver import SolveConfig, norm

__all__ = [
    "WeightedSpec",
    "WeightIsometryReport",
    "weighted_norm",
    "weight_isometry_check",
    "p0_eval",
    "p0_prime",
    "Direction",
    "MonotonePiece",
    "find_monotone_pieces",
    "EmbeddingPiece",
    "EmbeddingMap",
    "EmbedReport",
    "build_embedding",
    "embed_isometry_check",
    "BUILTIN_EXPONENTS",
]

#: Upper bound on exponent values accepted by :func:`build_embedding`.
DEFAULT_P_MAX = 50.0


@dataclass(frozen=True, eq=False)
class WeightedSpec:
    p: Exponent
    w: Density

    def __post_init__(self):
        if not isinstance(self.p, Exponent):
            object.__setattr__(self, "p", Exponent(self.p.partition, self.p.values))
        if not isinstance(self.w, Density):
            object.__setattr__(self, "w", Density(self.w.partition, self.w.values))


class WeightIsometryReport(NamedTuple):
    norm_m: float
    norm_mu_of_Tf: float

    @property
    def defect(self):
        return abs(self.norm_m - self.norm_mu_of_Tf)


def weighted_norm(f, spec, cfg=None):
    """``||f||`` in ``L^{p}(μ)`` with ``dμ = w dm``."""
    return norm(f, spec.p, cfg, density=spec.w)


def weight_isometry_check(f, spec, cfg=None):
    """``||f||_{L^p(m)}`` against ``||w^{-1/p} f||_{L^p(μ)}``."""
    f, p, w = refine_all(f, spec.p, spec.w)
    tf = StepFunction(f.partition, w.values ** (-1.0 / p.values) * f.values)
    return WeightIsometryReport(norm(f, p, cfg), norm(tf, p, cfg, density=w))


# the universal exponent


def _g(u):
    return u * np.sin(u) + u + 1.0


def _dg(u):
    return 1.0 + np.sin(u) + u * np.cos(u)


def _check_t(t):
    t = np.asarray(t, dtype=float)
    if np.any(~(t < 1.0)):
        raise ValidationError("p0 is defined on [0, 1) only")
    return t


def p0_eval(t):
    """``u sin u + u + 1`` with ``u = 1/(1 - t)``; always ``>= 1``."""
    t = _check_t(t)
    out = _g(1.0 / (1.0 - t))
    return float(out) if out.ndim == 0 else out


def p0_prime(t):
    """``dp0/dt = u**2 (1 + sin u + u cos u)``."""
    t = _check_t(t)
    u = 1.0 / (1.0 - t)
    out = u * u * _dg(u)
    return float(out) if out.ndim == 0 else out


class Direction(enum.Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"

    @classmethod
    def parse(cls, value):
        if value is None or isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValidationError(f"unknown direction {value!r}") from None


@dataclass(frozen=True)
class MonotonePiece:
    """Interval of ``t`` on which ``p0`` sweeps exactly ``range``."""

    interval: tuple
    direction: Direction
    range: tuple

    def __post_init__(self):
        lo, hi = self.interval
        if not 0.0 <= lo < hi < 1.0:
            raise ValidationError(f"bad piece interval {self.interval!r}")

    @property
    def u_interval(self):
        lo, hi = self.interval
        return 1.0 / (1.0 - lo), 1.0 / (1.0 - hi)

    def invert(self, y, iterations=80):
        """``t`` in the piece with ``p0(t) = y``, by vectorized bisection in ``u``."""
        y = np.asarray(y, dtype=float)
        ulo, uhi = self.u_interval
        a = np.full(y.shape, ulo)
        b = np.full(y.shape, uhi)
        sign = 1.0 if self.direction is Direction.INCREASING else -1.0
        for _ in range(iterations):
            mid = 0.5 * (a + b)
            below = sign * (_g(mid) - y) < 0
            a = np.where(below, mid, a)
            b = np.where(below, b, mid)
        return 1.0 - 1.0 / (0.5 * (a + b))


def _critical_points(u_start, windows, samples=256):
    """Sign changes of ``g'`` after ``u_start``, one ``2π`` window at a time."""
    u0 = u_start
    for _ in range(windows):
        grid = np.linspace(u0, u0 + 2.0 * math.pi, samples + 1)
        d = _dg(grid)
        for i in np.flatnonzero(np.sign(d[:-1]) * np.sign(d[1:]) < 0):
            yield optimize.brentq(_dg, grid[i], grid[i + 1], xtol=1e-15)
        u0 = grid[-1]


def find_monotone_pieces(target_range, count, direction=None, start=0.0, max_windows=10_000):
    """First ``count`` pieces after ``start`` on which ``p0`` sweeps ``target_range``.

    ``direction`` restricts the pieces to one monotonicity.  Pieces are
    disjoint and returned in increasing order of ``t``.
    """
    p_lo, p_hi = map(float, target_range)
    if not 1.0 < p_lo < p_hi < math.inf:
        raise ValidationError(f"need 1 < p_lo < p_hi < inf, got {target_range!r}")
    if count < 1:
        raise ValidationError("count must be >= 1")
    if not 0.0 <= start < 1.0:
        raise ValidationError("start must lie in [0, 1)")
    direction = Direction.parse(direction)

    pieces = []
    left = 1.0 / (1.0 - start)
    for right in _critical_points(left, max_windows):
        ga, gb = _g(left), _g(right)
        up = gb > ga
        if min(ga, gb) <= p_lo and max(ga, gb) >= p_hi:
            here = Direction.INCREASING if up else Direction.DECREASING
            if direction in (None, here):
                ua = optimize.brentq(lambda u: _g(u) - p_lo, left, right, xtol=1e-15)
                ub = optimize.brentq(lambda u: _g(u) - p_hi, left, right, xtol=1e-15)
                lo, hi = sorted((ua, ub))
                pieces.append(
                    MonotonePiece((1.0 - 1.0 / lo, 1.0 - 1.0 / hi), here, (p_lo, p_hi))
                )
                if len(pieces) == count:
                    return pieces
        left = right
    raise NonConvergenceError(
        f"found {len(pieces)} of {count} pieces within {max_windows} windows",
        pieces=pieces,
    )


# building the embedding


def _central_difference(p, h=1e-6):
    def dp(x):
        x = np.asarray(x, dtype=float)
        a = np.clip(x - h, 0.0, 1.0)
        b = np.clip(x + h, 0.0, 1.0)
        return (np.asarray(p(b)) - np.asarray(p(a))) / (b - a)

    return dp


@dataclass(frozen=True, eq=False)
class EmbeddingPiece:
    """``T`` on one source piece, tabulated at ``nodes``."""

    source: tuple
    target: MonotonePiece
    nodes: np.ndarray
    images: np.ndarray
    residual: float


@dataclass(frozen=True, eq=False)
class EmbeddingMap:
    p: Callable
    dp: Callable
    pieces: tuple

    @property
    def max_residual(self):
        return max(piece.residual for piece in self.pieces)

    def T(self, x):
        """Interpolated ``T``; ``nan`` off the source pieces."""
        x = np.asarray(x, dtype=float)
        out = np.full(x.shape, np.nan)
        for piece in self.pieces:
            a, b = piece.source
            inside = (x >= a) & (x <= b)
            out[inside] = np.interp(x[inside], piece.nodes, piece.images)
        return out

    def summary(self):
        return [
            {
                "source": list(piece.source),
                "target": list(piece.target.interval),
                "direction": piece.target.direction.value,
                "range": list(piece.target.range),
                "nodes": int(piece.nodes.size),
                "residual": piece.residual,
            }
            for piece in self.pieces
        ]


def _source_pieces(p, dp, domain, scan):
    a, b = domain
    x = np.linspace(a, b, scan + 1)
    d = np.asarray(dp(x), dtype=float)
    if d.shape != x.shape or not np.all(np.isfinite(d)):
        raise ValidationError("derivative of p must be finite on the domain")
    if np.all(d == 0):
        raise ValidationError("p is constant; it must not be constant on any interval")
    cuts = [a]
    for i in np.flatnonzero(np.sign(d[:-1]) * np.sign(d[1:]) < 0):
        cuts.append(optimize.brentq(dp, x[i], x[i + 1], xtol=1e-15))
    cuts.append(b)
    out = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        inside = (x > lo) & (x < hi)
        if inside.any() and np.all(d[inside] == 0):
            raise ValidationError(f"p is constant on [{lo}, {hi}]")
        out.append((lo, hi))
    return out


def build_embedding(p, dp=None, nodes=2**12, p_max=DEFAULT_P_MAX, domain=(0.0, 1.0),
                    scan=4096, tol=1e-10):
    """Tabulate ``T`` with ``p0 ∘ T = p`` on every monotone piece of ``p``.

    ``p`` (and ``dp``, when given) are vectorized evaluators on ``domain``;
    without ``dp`` the derivative is a central difference.  ``nodes`` is
    the number of tabulation points per piece.
    """
    a, b = map(float, domain)
    if not 0.0 <= a < b <= 1.0:
        raise ValidationError(f"domain must be a subinterval of [0, 1], got {domain!r}")
    if nodes < 2:
        raise ValidationError("need at least two tabulation nodes")
    dp = dp or _central_difference(p)
    pieces = []
    start = 0.0
    for lo, hi in _source_pieces(p, dp, (a, b), scan):
        x = np.linspace(lo, hi, int(nodes))
        px = np.asarray(p(x), dtype=float)
        if not np.all(np.isfinite(px)):
            raise ValidationError("p must be finite on the domain")
        bad = np.flatnonzero((px <= 1.0) | (px > p_max))
        if bad.size:
            raise ValidationError(
                f"p = {float(px[bad[0]])!r} at t = {float(x[bad[0]])!r} is outside (1, {p_max}]"
            )
        rising = px[-1] > px[0]
        target = find_monotone_pieces(
            (px.min(), px.max()), 1,
            Direction.INCREASING if rising else Direction.DECREASING, start,
        )[0]
        images = target.invert(px)
        residual = float(np.max(np.abs(p0_eval(images) - px)))
        if residual > tol:
            raise NonConvergenceError(
                f"inversion residual {residual:.3e} exceeds {tol:.1e}", residual=residual
            )
        if not np.all(np.diff(images) > 0):
            raise NonConvergenceError("tabulated T is not strictly increasing")
        pieces.append(EmbeddingPiece((lo, hi), target, x, images, residual))
        start = target.interval[1]
    return EmbeddingMap(p, dp, tuple(pieces))


class EmbedReport(NamedTuple):
    """Both isometries of the embedding, evaluated on the tabulation grid.

    ``source_norm``/``target_norm`` compare ``L^p(ν)`` with ``L^{p0}(μ)``
    under ``f -> f ∘ T^{-1}``; the ``plain_`` pair compares ``L^p(m)`` with
    ``L^{p0}(m)`` under ``f -> (|p0'| / |p' ∘ T^{-1}|)^{1/p0} f ∘ T^{-1}``.
    """

    source_norm: float
    target_norm: float
    plain_source_norm: float
    plain_target_norm: float
    residual: float

    @property
    def defect(self):
        return max(
            abs(self.source_norm - self.target_norm),
            abs(self.plain_source_norm - self.plain_target_norm),
        )


def _step(breaks, values, kind=StepFunction):
    return kind(Partition(breaks), values)


def embed_isometry_check(f, emap, cfg=None):
    """Norms of ``f`` and of its image under the tabulated embedding."""
    cfg = cfg or SolveConfig()
    pieces = emap.pieces
    spans = []
    for piece in pieces:
        lo, hi = piece.source
        if spans and spans[-1][1] == lo:
            spans[-1][1] = hi
        else:
            spans.append([lo, hi])
    covered = np.zeros(f.n_cells, dtype=bool)
    for lo, hi in spans:
        covered |= (f.breakpoints[:-1] >= lo) & (f.breakpoints[1:] <= hi)
    stray = np.flatnonzero(~covered & (f.values != 0))
    if stray.size:
        raise ValidationError(f"f is non-zero off the source pieces at cell {int(stray[0])}")

    # source cells: tabulation nodes refined by the breakpoints of f
    src_breaks, tgt_breaks = [0.0], [0.0]
    src = {"f": [], "p": [], "w": []}
    tgt = {"f": [], "p": [], "w": [], "r": []}

    def gap(side, breaks, end):
        # f vanishes between pieces; exponent and density there are inert
        if end > breaks[-1]:
            breaks.append(end)
            side["f"].append(0.0)
            side["p"].append(2.0)
            side["w"].append(1.0)
            side.get("r", []).append(1.0)

    for piece in pieces:
        lo, hi = piece.source
        inner = f.breakpoints[(f.breakpoints > lo) & (f.breakpoints < hi)]
        x = np.union1d(piece.nodes, inner)
        tx = np.interp(x, piece.nodes, piece.images)
        keep = np.r_[True, (np.diff(x) > 0) & (np.diff(tx) > 0)]
        x, tx = x[keep], tx[keep]
        xm = 0.5 * (x[:-1] + x[1:])
        tm = 0.5 * (tx[:-1] + tx[1:])
        fx = f(xm)
        px = np.asarray(emap.p(xm), dtype=float)
        wx = np.abs(np.asarray(emap.dp(xm), dtype=float))
        pt = p0_eval(tm)
        wt = np.abs(p0_prime(tm))

        gap(src, src_breaks, x[0])
        src_breaks.extend(x[1:])
        src["f"].extend(fx)
        src["p"].extend(px)
        src["w"].extend(wx)

        gap(tgt, tgt_breaks, tx[0])
        tgt_breaks.extend(tx[1:])
        tgt["f"].extend(fx)
        tgt["p"].extend(pt)
        tgt["w"].extend(wt)
        tgt["r"].extend(wt / wx)
    gap(src, src_breaks, 1.0)
    gap(tgt, tgt_breaks, 1.0)

    def norms(breaks, side):
        fv = np.asarray(side["f"])
        pv = _step(breaks, side["p"], Exponent)
        w = _step(breaks, side["w"], Density)
        plain_f = fv * np.asarray(side["r"]) ** (1.0 / pv.values) if "r" in side else fv
        return norm(_step(breaks, fv), pv, cfg, density=w), norm(_step(breaks, plain_f), pv, cfg)

    source_w, source_plain = norms(src_breaks, src)
    target_w, target_plain = norms(tgt_breaks, tgt)
    return EmbedReport(source_w, target_w, source_plain, target_plain, emap.max_residual)


BUILTIN_EXPONENTS = {
    "affine": (lambda t: 2.0 + np.asarray(t, dtype=float),
               lambda t: np.ones_like(np.asarray(t, dtype=float))),
    "sine": (lambda t: 2.0 + np.sin(3.0 * np.asarray(t, dtype=float)),
             lambda t: 3.0 * np.cos(3.0 * np.asarray(t, dtype=float))),
}
