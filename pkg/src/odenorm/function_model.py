"""Step functions on the unit interval.

Everything in the package is evaluated on piecewise-constant data: a
:class:`Partition` ``0 = t_0 < ... < t_m = 1`` and one value per cell
``[t_k, t_{k+1})`` (the last cell is closed).  General measurable data
enters through :func:`sample_to_step`.

Objects are immutable; the underlying arrays are flagged read-only.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ValidationError

__all__ = [
    "Partition",
    "StepFunction",
    "Exponent",
    "Density",
    "refine_common",
    "refine_all",
    "sample_to_step",
    "validate_exponent",
    "load_step",
]

#: Breakpoints closer than this are merged by :func:`refine_all`.
COALESCE_EPS = 1e-15


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


class Partition:
    """Strictly increasing breakpoints from 0 to 1."""

    __slots__ = ("breakpoints",)

    def __init__(self, breakpoints):
        bp = _frozen(breakpoints)
        if bp.ndim != 1 or bp.size < 2:
            raise ValidationError("a partition needs at least two breakpoints")
        if bp[0] != 0.0 or bp[-1] != 1.0:
            raise ValidationError(
                f"partition must start at 0 and end at 1, got {bp[0]!r} .. {bp[-1]!r}"
            )
        if not np.all(np.diff(bp) > 0):
            k = int(np.argmin(np.diff(bp)))
            raise ValidationError(f"breakpoints not strictly increasing at index {k + 1}")
        object.__setattr__(self, "breakpoints", bp)

    def __setattr__(self, name, value):
        raise AttributeError("Partition is immutable")

    @classmethod
    def uniform(cls, n_cells):
        if n_cells < 1:
            raise ValidationError("n_cells must be >= 1")
        return cls(np.linspace(0.0, 1.0, int(n_cells) + 1))

    @property
    def n_cells(self):
        return self.breakpoints.size - 1

    @property
    def widths(self):
        return np.diff(self.breakpoints)

    @property
    def midpoints(self):
        bp = self.breakpoints
        return 0.5 * (bp[:-1] + bp[1:])

    def locate(self, t):
        """Cell index containing ``t`` (left-closed cells, last cell closed)."""
        idx = np.searchsorted(self.breakpoints, t, side="right") - 1
        return np.clip(idx, 0, self.n_cells - 1)

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return self is other or np.array_equal(self.breakpoints, other.breakpoints)

    def __hash__(self):
        return hash(self.breakpoints.tobytes())

    def __len__(self):
        return self.breakpoints.size

    def __repr__(self):
        return f"Partition({self.breakpoints.tolist()!r})"


class StepFunction:
    """Piecewise-constant real function on ``[0, 1]``."""

    __slots__ = ("partition", "values")

    def __init__(self, partition, values):
        if not isinstance(partition, Partition):
            partition = Partition(partition)
        vals = _frozen(values)
        if vals.ndim == 0:
            vals = _frozen(np.full(partition.n_cells, float(vals)))
        if vals.shape != (partition.n_cells,):
            raise ValidationError(
                f"expected {partition.n_cells} cell values, got {vals.shape[0] if vals.ndim else 0}"
            )
        if not np.all(np.isfinite(vals)):
            k = int(np.flatnonzero(~np.isfinite(vals))[0])
            raise ValidationError(f"non-finite value at cell {k}")
        object.__setattr__(self, "partition", partition)
        object.__setattr__(self, "values", vals)
        self._check()

    def _check(self):
        pass

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    # construction helpers

    @classmethod
    def constant(cls, c, partition=None):
        partition = partition if partition is not None else Partition([0.0, 1.0])
        return cls(partition, np.full(partition.n_cells, float(c)))

    @classmethod
    def from_pieces(cls, breakpoints, values):
        return cls(Partition(breakpoints), values)

    def on(self, partition):
        """Same function expressed on a refinement ``partition``."""
        if partition == self.partition:
            return self
        idx = self.partition.locate(partition.midpoints)
        return type(self)(partition, self.values[idx])

    # evaluation and arithmetic

    @property
    def n_cells(self):
        return self.partition.n_cells

    @property
    def widths(self):
        return self.partition.widths

    @property
    def breakpoints(self):
        return self.partition.breakpoints

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = self.values[self.partition.locate(t)]
        return float(out) if out.ndim == 0 else out

    def sup_abs(self):
        return float(np.max(np.abs(self.values)))

    def integral(self):
        return float(np.dot(self.widths, self.values))

    def map(self, fn):
        """Apply ``fn`` cellwise; the result is a plain :class:`StepFunction`."""
        return StepFunction(self.partition, fn(self.values))

    def _binary(self, other, op):
        if isinstance(other, StepFunction):
            a, b = refine_common(self, other)
            return StepFunction(a.partition, op(a.values, b.values))
        return StepFunction(self.partition, op(self.values, float(other)))

    def __add__(self, other):
        return self._binary(other, np.add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __mul__(self, other):
        return self._binary(other, np.multiply)

    __rmul__ = __mul__

    def __neg__(self):
        return StepFunction(self.partition, -self.values)

    def __abs__(self):
        return StepFunction(self.partition, np.abs(self.values))

    def __eq__(self, other):
        if not isinstance(other, StepFunction):
            return NotImplemented
        return self.partition == other.partition and np.array_equal(self.values, other.values)

    __hash__ = None

    def __repr__(self):
        return (
            f"{type(self).__name__}(partition={self.breakpoints.tolist()!r}, "
            f"values={self.values.tolist()!r})"
        )

    # serialization

    def to_dict(self):
        return {"partition": self.breakpoints.tolist(), "values": self.values.tolist()}

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(Partition(data["partition"]), data["values"])
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed step function record: {exc}") from None

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid JSON: {exc}") from None
        return cls.from_dict(data)


class Exponent(StepFunction):
    """Step exponent with every value ``>= 1``.

    ``ess_inf`` and ``ess_sup`` are the min and max cell values.
    """

    __slots__ = ("ess_inf", "ess_sup")

    def _check(self):
        low = np.flatnonzero(self.values < 1.0)
        if low.size:
            raise ValidationError(f"exponent below 1 at cell {int(low[0])}")
        object.__setattr__(self, "ess_inf", float(self.values.min()))
        object.__setattr__(self, "ess_sup", float(self.values.max()))

    @classmethod
    def sample(cls, h, n_cells):
        return validate_exponent(sample_to_step(h, n_cells))


class Density(StepFunction):
    """Strictly positive step density ``dmu/dm``."""

    __slots__ = ()

    def _check(self):
        bad = np.flatnonzero(self.values <= 0.0)
        if bad.size:
            raise ValidationError(f"density not strictly positive at cell {int(bad[0])}")


def _merge_breakpoints(arrays):
    x = np.unique(np.concatenate(arrays))
    keep = np.r_[True, np.diff(x) > COALESCE_EPS]
    if not keep[-1]:
        # keep the exact right end, drop its near-duplicate predecessor
        last_kept = np.flatnonzero(keep)[-1]
        keep[last_kept] = last_kept == 0
        keep[-1] = True
    return x[keep]


def refine_all(*fs):
    """Express every step function on the merged partition."""
    if not fs:
        return ()
    first = fs[0].partition
    if all(f.partition == first for f in fs[1:]):
        return tuple(fs)
    part = Partition(_merge_breakpoints([f.breakpoints for f in fs]))
    return tuple(f.on(part) for f in fs)


def refine_common(a, b):
    """Return ``a`` and ``b`` on the union of their breakpoints."""
    return refine_all(a, b)


def sample_to_step(h, n_cells):
    """Sample ``h`` at the midpoints of ``n_cells`` uniform cells.

    ``h`` may be vectorized or scalar-only; a :class:`StepFunction` works
    too.  A non-finite sample raises :class:`ValidationError` naming the
    offending ``t``.
    """
    part = Partition.uniform(n_cells)
    t = part.midpoints
    vals = None
    try:
        out = np.asarray(h(t), dtype=float)
        if out.shape == t.shape:
            vals = out
        elif out.ndim == 0:
            vals = np.full(t.shape, float(out))
    except (TypeError, ValueError):
        vals = None
    if vals is None:
        vals = np.array([float(h(float(s))) for s in t])
    bad = np.flatnonzero(~np.isfinite(vals))
    if bad.size:
        raise ValidationError(f"evaluator returned a non-finite value at t={float(t[bad[0]])!r}")
    return StepFunction(part, vals)


def validate_exponent(s):
    """Promote a step function to an :class:`Exponent`."""
    return Exponent(s.partition, s.values)


def load_step(path, kind=StepFunction):
    """Read a step-function JSON file, validating it as ``kind``."""
    return kind.from_json(Path(path).read_text())
