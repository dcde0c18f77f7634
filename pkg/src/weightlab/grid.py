"""Dyadic grids on the circle.

A weight at resolution ``N`` is a strictly positive function that is
constant on each of the ``n = 2**N`` cells ``[c/n, (c+1)/n)``.  Every
integral of such a function over a grid-aligned arc is a finite sum, so all
averages here are exact up to floating-point rounding.

Arcs are grid-aligned and may wrap past the end of the circle.  The full
circle is canonicalised to ``Arc(0, n)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

import numpy as np

# Below this resolution plain cumulative sums are accurate enough.
COMPENSATED_FROM = 16


class ValidationError(ValueError):
    """Invalid input to a constructor or operation."""


class Scope(enum.Enum):
    """Family of intervals a supremum ranges over."""

    GRID = "grid"
    DYADIC = "dyadic"

    @classmethod
    def parse(cls, value: "Scope | str") -> "Scope":
        if isinstance(value, cls):
            return value
        key = str(value).lower()
        aliases = {"grid": cls.GRID, "gridarcs": cls.GRID, "arcs": cls.GRID,
                   "continuous": cls.GRID, "dyadic": cls.DYADIC, "d": cls.DYADIC}
        if key not in aliases:
            raise ValidationError(f"unknown scope {value!r}")
        return aliases[key]


def _resolution_of(length: int) -> int:
    if length < 1 or length & (length - 1):
        raise ValidationError(f"grid length {length} is not a power of two")
    return length.bit_length() - 1


@dataclass(frozen=True, eq=False)
class Weight:
    """Strictly positive piecewise-constant function on the dyadic grid."""

    resolution: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if not isinstance(self.resolution, (int, np.integer)) or self.resolution < 0:
            raise ValidationError(f"resolution must be a nonnegative integer, got {self.resolution!r}")
        vals = np.array(self.values, dtype=np.float64, copy=True).reshape(-1)
        n = 1 << int(self.resolution)
        if vals.size != n:
            raise ValidationError(
                f"values has length {vals.size}, expected 2**{self.resolution} = {n}")
        bad = np.flatnonzero(~np.isfinite(vals))
        if bad.size:
            raise ValidationError(f"value at index {bad[0]} is not finite ({vals[bad[0]]!r})")
        bad = np.flatnonzero(vals <= 0)
        if bad.size:
            raise ValidationError(f"value at index {bad[0]} is not positive ({vals[bad[0]]!r})")
        vals.setflags(write=False)
        object.__setattr__(self, "resolution", int(self.resolution))
        object.__setattr__(self, "values", vals)

    @property
    def size(self) -> int:
        return self.values.size

    def __len__(self) -> int:
        return self.values.size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Weight):
            return NotImplemented
        return self.resolution == other.resolution and np.array_equal(self.values, other.values)

    def scaled(self, factor: float) -> "Weight":
        return Weight(self.resolution, self.values * factor)

    def log(self) -> np.ndarray:
        return np.log(self.values)


def make_weight(resolution: int, values: Sequence[float] | np.ndarray) -> Weight:
    return Weight(resolution, np.asarray(values, dtype=np.float64))


def as_grid_array(f) -> np.ndarray:
    """Values of a 1D or 2D weight / grid function, shape checked."""
    vals = getattr(f, "values", f)
    arr = np.asarray(vals, dtype=np.float64)
    if arr.ndim == 2:
        if arr.shape[0] != arr.shape[1]:
            raise ValidationError(f"2D grid must be square, got shape {arr.shape}")
        _resolution_of(arr.shape[0])
        return arr
    return as_grid_function(arr)


def as_grid_function(f: "Weight | Sequence[float] | np.ndarray") -> np.ndarray:
    """Values of a weight or a raw real grid function, length checked."""
    if isinstance(f, Weight):
        return f.values
    arr = np.asarray(f, dtype=np.float64).reshape(-1)
    _resolution_of(arr.size)
    return arr


@dataclass(frozen=True)
class Arc:
    """Grid-aligned arc: ``length`` cells starting at cell ``start``, mod n."""

    start: int
    length: int

    def validate(self, resolution: int) -> "Arc":
        n = 1 << resolution
        if not 0 <= self.start < n:
            raise ValidationError(f"arc start {self.start} outside [0, {n})")
        if not 1 <= self.length <= n:
            raise ValidationError(f"arc length {self.length} outside [1, {n}]")
        return self

    def cells(self, resolution: int) -> np.ndarray:
        n = 1 << resolution
        return (self.start + np.arange(self.length)) % n

    def shifted(self, cells: int, resolution: int) -> "Arc":
        n = 1 << resolution
        if self.length == n:
            return Arc(0, n)
        return Arc((self.start + cells) % n, self.length)


@dataclass(frozen=True, order=True)
class DyadicInterval:
    """``[index 2**-level, (index+1) 2**-level)``; never wraps."""

    level: int
    index: int

    def __post_init__(self) -> None:
        if self.level < 0 or not 0 <= self.index < (1 << self.level):
            raise ValidationError(f"invalid dyadic interval level={self.level} index={self.index}")

    @property
    def measure(self) -> float:
        return 2.0 ** -self.level

    def length_cells(self, resolution: int) -> int:
        if self.level > resolution:
            raise ValidationError(f"level {self.level} finer than resolution {resolution}")
        return 1 << (resolution - self.level)

    def start_cell(self, resolution: int) -> int:
        return self.index * self.length_cells(resolution)

    def as_arc(self, resolution: int) -> Arc:
        return Arc(self.start_cell(resolution), self.length_cells(resolution))

    def contains_cell(self, cell: int, resolution: int) -> bool:
        return (cell >> (resolution - self.level)) == self.index

    def parent(self) -> "DyadicInterval":
        if self.level == 0:
            raise ValidationError("the circle has no dyadic parent")
        return DyadicInterval(self.level - 1, self.index >> 1)

    def children(self) -> tuple["DyadicInterval", "DyadicInterval"]:
        return (DyadicInterval(self.level + 1, 2 * self.index),
                DyadicInterval(self.level + 1, 2 * self.index + 1))


def compensated_cumsum(x: np.ndarray) -> np.ndarray:
    """Prefix sums with a leading zero, Neumaier-compensated for long grids."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty(x.size + 1)
    out[0] = 0.0
    if x.size < (1 << COMPENSATED_FROM):
        np.cumsum(x, out=out[1:])
        return out
    total = 0.0
    comp = 0.0
    for i, v in enumerate(x.tolist(), start=1):
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
        out[i] = total + comp
    return out


class CyclicPrefix:
    """Prefix sums over two periods, for O(1) arc integrals."""

    def __init__(self, values: np.ndarray):
        vals = np.asarray(values, dtype=np.float64)
        self.n = vals.size
        self.values = vals
        self.table = compensated_cumsum(np.concatenate([vals, vals]))

    def sums(self, starts: np.ndarray | int, length: int) -> np.ndarray:
        starts = np.asarray(starts) % self.n
        return self.table[starts + length] - self.table[starts]

    def means(self, starts: np.ndarray | int, length: int) -> np.ndarray:
        return self.sums(starts, length) / length


def arc_average(w: "Weight | np.ndarray", q: Arc) -> float:
    vals = as_grid_function(w)
    q.validate(_resolution_of(vals.size))
    return float(CyclicPrefix(vals).means(q.start, q.length))


def translate(w: Weight, shift_cells: int) -> Weight:
    """``tau_t w(x) = w(x - t)`` with ``t = shift_cells / n``."""
    return Weight(w.resolution, np.roll(w.values, int(shift_cells) % w.size))


def enumerate_arcs(resolution: int, max_length_cells: int | None = None) -> list[Arc]:
    n = 1 << resolution
    max_len = n if max_length_cells is None else max_length_cells
    if not 1 <= max_len <= n:
        raise ValidationError(f"max_length_cells {max_len} outside [1, {n}]")
    arcs = [Arc(s, length) for length in range(1, min(max_len, n - 1) + 1) for s in range(n)]
    if max_len == n:
        arcs.append(Arc(0, n))
    return arcs


def dyadic_intervals(resolution: int) -> list[DyadicInterval]:
    return [DyadicInterval(k, j) for k in range(resolution + 1) for j in range(1 << k)]


def coarsen(values: np.ndarray, resolution: int) -> np.ndarray:
    """Cell averages at a coarser resolution (exact integration)."""
    vals = np.asarray(values, dtype=np.float64)
    if resolution > _resolution_of(vals.size):
        raise ValidationError("cannot coarsen to a finer resolution")
    return vals.reshape(1 << resolution, -1).mean(axis=1)


@dataclass
class Block:
    """All intervals of one length in a sweep, with per-interval statistics.

    ``means[k][i]`` is the average of column ``k`` over the interval starting
    at ``starts[i]``; ``lo``/``hi`` are the extreme cell values of the
    extrema column over the same interval.
    """

    length: int
    starts: np.ndarray
    means: dict[str, np.ndarray]
    lo: np.ndarray | None = None
    hi: np.ndarray | None = None


def sweep(columns: Mapping[str, np.ndarray], scope: Scope | str, *,
          extrema: np.ndarray | None = None,
          max_length: int | None = None) -> Iterator[Block]:
    """Iterate over every interval of ``scope``, grouped by length.

    Grid arcs are swept with running window sums (Kahan-compensated), which
    keeps per-arc relative error proportional to the arc length rather than
    to the whole-circle mass.  Dyadic intervals are reduced blockwise.
    """
    scope = Scope.parse(scope)
    cols = {k: np.asarray(v, dtype=np.float64) for k, v in columns.items()}
    first = next(iter(cols.values())) if cols else np.asarray(extrema)
    if first.ndim == 2:
        yield from sweep2d(cols, scope, extrema=extrema)
        return
    n = len(first)
    resolution = _resolution_of(n)
    max_len = n if max_length is None else min(max_length, n)

    if scope is Scope.DYADIC:
        for level in range(resolution + 1):
            length = n >> level
            if length > max_len:
                continue
            shaped = {k: v.reshape(1 << level, length) for k, v in cols.items()}
            block = Block(length, np.arange(0, n, length),
                          {k: v.mean(axis=1) for k, v in shaped.items()})
            if extrema is not None:
                ex = np.asarray(extrema, dtype=np.float64).reshape(1 << level, length)
                block.lo, block.hi = ex.min(axis=1), ex.max(axis=1)
            yield block
        return

    ext = {k: np.concatenate([v, v]) for k, v in cols.items()}
    sums = {k: np.zeros(n) for k in cols}
    comp = {k: np.zeros(n) for k in cols}
    if extrema is not None:
        ex_ext = np.concatenate([extrema, extrema]).astype(np.float64)
        lo = np.full(n, np.inf)
        hi = np.full(n, -np.inf)
    all_starts = np.arange(n)
    for length in range(1, max_len + 1):
        for k in cols:
            y = ext[k][length - 1:length - 1 + n] - comp[k]
            t = sums[k] + y
            comp[k] = (t - sums[k]) - y
            sums[k] = t
        take = slice(0, 1) if length == n else slice(None)
        block = Block(length, all_starts[take],
                      {k: sums[k][take] / length for k in cols})
        if extrema is not None:
            new = ex_ext[length - 1:length - 1 + n]
            np.minimum(lo, new, out=lo)
            np.maximum(hi, new, out=hi)
            block.lo, block.hi = lo[take].copy(), hi[take].copy()
        yield block


def window_sums(values: np.ndarray, max_length: int) -> Iterator[tuple[int, np.ndarray]]:
    """``(L, S)`` with ``S[s]`` the sum over cells ``s..s+L-1`` mod n, L = 1..max_length."""
    vals = np.asarray(values, dtype=np.float64)
    n = vals.size
    ext = np.concatenate([vals, vals])
    total = np.zeros(n)
    comp = np.zeros(n)
    for length in range(1, max_length + 1):
        y = ext[length - 1:length - 1 + n] - comp
        t = total + y
        comp = (t - total) - y
        total = t
        yield length, total


def window_max_cover(values: np.ndarray, length: int) -> np.ndarray:
    """``out[c] = max(values[s] for s in c-length+1 .. c)`` cyclically.

    Sparse-table reduction: O(n log length).
    """
    vals = np.asarray(values, dtype=np.float64)
    # table[s] = max over values[s .. s+span-1]
    span = 1
    table = vals
    while 2 * span <= length:
        table = np.maximum(table, np.roll(table, -span))
        span *= 2
    forward = np.maximum(table, np.roll(table, -(length - span)))
    # forward[s] covers starts s..s+length-1; the cover of cell c starts at c-length+1
    return np.roll(forward, length - 1)


def shifted_slices(rows: np.ndarray) -> np.ndarray:
    """``out[i, c] = rows[i, (c + i) mod n]``: member ``i`` read at ``x + t_i``."""
    rows = np.asarray(rows)
    m, n = rows.shape
    idx = (np.arange(n)[None, :] + np.arange(m)[:, None]) % n
    return np.take_along_axis(rows, idx, axis=1)


def translation_mean(rows: np.ndarray, mask: np.ndarray | None = None, *,
                     geometric: bool = False) -> np.ndarray:
    """Mask-normalised average over shifts of ``rows[i](x + t_i)``.

    ``geometric=True`` takes the geometric mean of positive rows.  Columns
    whose active values all agree return that value exactly.
    """
    slices = shifted_slices(rows)
    if mask is not None:
        mask = np.asarray(mask, dtype=bool)
        if not mask.any():
            raise ValidationError("shift mask selects no members")
        slices = slices[mask]
    # one column per row so numpy sums pairwise instead of sequentially
    cols = np.ascontiguousarray(slices.T)
    out = np.exp(np.log(cols).mean(axis=1)) if geometric else cols.mean(axis=1)
    flat = cols.min(axis=1) == cols.max(axis=1)
    out[flat] = cols[flat, 0]
    return out


def sweep2d(columns: Mapping[str, np.ndarray], scope: Scope | str, *,
            extrema: np.ndarray | None = None) -> Iterator[Block]:
    """Rectangle analogue of :func:`sweep` on an ``n x n`` grid.

    Blocks carry ``length = (lx, ly)``, ``starts = (xs, ys)`` and 2D arrays
    of means indexed ``[x start, y start]``.  Axis 0 is x, axis 1 is y.
    """
    scope = Scope.parse(scope)
    cols = {k: np.asarray(v, dtype=np.float64) for k, v in columns.items()}
    first = next(iter(cols.values())) if cols else np.asarray(extrema, dtype=np.float64)
    n = first.shape[0]
    resolution = _resolution_of(n)
    ex = None if extrema is None else np.asarray(extrema, dtype=np.float64)

    if scope is Scope.DYADIC:
        for kx in range(resolution + 1):
            bx = n >> kx
            for ky in range(resolution + 1):
                by = n >> ky
                shape = (1 << kx, bx, 1 << ky, by)
                block = Block((bx, by), (np.arange(0, n, bx), np.arange(0, n, by)),
                              {k: v.reshape(shape).mean(axis=(1, 3)) for k, v in cols.items()})
                if ex is not None:
                    r = ex.reshape(shape)
                    block.lo, block.hi = r.min(axis=(1, 3)), r.max(axis=(1, 3))
                yield block
        return

    all_starts = np.arange(n)
    ext_x = {k: np.concatenate([v, v], axis=0) for k, v in cols.items()}
    sx = {k: np.zeros((n, n)) for k in cols}
    if ex is not None:
        ex_x = np.concatenate([ex, ex], axis=0)
        lo_x = np.full((n, n), np.inf)
        hi_x = np.full((n, n), -np.inf)
    for lx in range(1, n + 1):
        for k in cols:
            sx[k] = sx[k] + ext_x[k][lx - 1:lx - 1 + n]
        if ex is not None:
            lo_x = np.minimum(lo_x, ex_x[lx - 1:lx - 1 + n])
            hi_x = np.maximum(hi_x, ex_x[lx - 1:lx - 1 + n])
        takex = slice(0, 1) if lx == n else slice(None)
        base = {k: v[takex] for k, v in sx.items()}
        ext_y = {k: np.concatenate([v, v], axis=1) for k, v in base.items()}
        sxy = {k: np.zeros_like(v) for k, v in base.items()}
        if ex is not None:
            lo_b, hi_b = lo_x[takex], hi_x[takex]
            lo_ext = np.concatenate([lo_b, lo_b], axis=1)
            hi_ext = np.concatenate([hi_b, hi_b], axis=1)
            lo_xy = np.full(lo_b.shape, np.inf)
            hi_xy = np.full(hi_b.shape, -np.inf)
        for ly in range(1, n + 1):
            for k in cols:
                sxy[k] = sxy[k] + ext_y[k][:, ly - 1:ly - 1 + n]
            takey = slice(0, 1) if ly == n else slice(None)
            block = Block((lx, ly), (all_starts[takex], all_starts[takey]),
                          {k: v[:, takey] / (lx * ly) for k, v in sxy.items()})
            if ex is not None:
                lo_xy = np.minimum(lo_xy, lo_ext[:, ly - 1:ly - 1 + n])
                hi_xy = np.maximum(hi_xy, hi_ext[:, ly - 1:ly - 1 + n])
                block.lo, block.hi = lo_xy[:, takey], hi_xy[:, takey]
            yield block
