"""Two-parameter (bidisc) weights on an ``n x n`` grid.

Axis 0 is ``x`` and axis 1 is ``y``; ``values[ix, iy]``.  Rectangles are
products of grid arcs (grid scope) or of dyadic intervals (dyadic scope).
The A_p / RH_p functionals are the same per-block formulas as in one
variable, evaluated by the 2D sweep in :mod:`weightlab.grid`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .constants import ap_constant, rhp_sup
from .grid import Arc, Scope, ValidationError, Weight, _resolution_of

DEFAULT_MAX_RESOLUTION = 6


def _check_cap(resolution: int, max_resolution: int | None) -> None:
    cap = DEFAULT_MAX_RESOLUTION if max_resolution is None else max_resolution
    if resolution > cap:
        raise ValidationError(f"2D resolution {resolution} exceeds the cap {cap}")


@dataclass(frozen=True, eq=False)
class Weight2D:
    resolution: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        n = 1 << self.resolution
        vals = np.array(self.values, dtype=np.float64, copy=True)
        if vals.shape != (n, n):
            raise ValidationError(f"2D weight needs shape ({n}, {n}), got {vals.shape}")
        bad = np.argwhere(~np.isfinite(vals) | (vals <= 0))
        if bad.size:
            ix, iy = bad[0]
            raise ValidationError(f"value at index ({ix}, {iy}) is not a positive finite number")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def size(self) -> int:
        return 1 << self.resolution

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Weight2D):
            return NotImplemented
        return self.resolution == other.resolution and np.array_equal(self.values, other.values)

    @classmethod
    def separable(cls, u: Weight, v: Weight) -> "Weight2D":
        if u.resolution != v.resolution:
            raise ValidationError("factors have different resolutions")
        return cls(u.resolution, np.outer(u.values, v.values))


@dataclass(frozen=True, eq=False)
class WeightFamily2D:
    """Members ``omega^{i,j}`` stored as ``members[i, j, x, y]``."""

    resolution: int
    members: np.ndarray = field(repr=False)
    mask: np.ndarray = field(default=None, repr=False)

    def __post_init__(self) -> None:
        n = 1 << self.resolution
        members = np.array(self.members, dtype=np.float64, copy=True)
        if members.shape != (n, n, n, n):
            raise ValidationError(f"2D family needs shape {(n, n, n, n)}, got {members.shape}")
        if not np.all(np.isfinite(members) & (members > 0)):
            i, j, x, y = np.argwhere(~np.isfinite(members) | (members <= 0))[0]
            raise ValidationError(f"member ({i}, {j}) value at ({x}, {y}) is not a positive finite number")
        mask = np.ones((n, n), dtype=bool) if self.mask is None else np.array(self.mask, dtype=bool)
        if mask.shape != (n, n):
            raise ValidationError(f"mask has shape {mask.shape}, expected {(n, n)}")
        if not mask.any():
            raise ValidationError("mask selects no members (|E| = 0)")
        members.setflags(write=False)
        mask.setflags(write=False)
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "mask", mask)

    @property
    def size(self) -> int:
        return 1 << self.resolution

    def member(self, i: int, j: int) -> Weight2D:
        return Weight2D(self.resolution, self.members[i, j])

    def active(self) -> np.ndarray:
        return np.argwhere(self.mask)


def rect_average(w: Weight2D | np.ndarray, qx: Arc, qy: Arc) -> float:
    vals = np.asarray(getattr(w, "values", w), dtype=np.float64)
    n = vals.shape[0]
    resolution = _resolution_of(n)
    qx.validate(resolution)
    qy.validate(resolution)
    ext = np.concatenate([vals, vals], axis=0)
    ext = np.concatenate([ext, ext], axis=1)
    prefix = np.zeros((2 * n + 1, 2 * n + 1))
    prefix[1:, 1:] = ext.cumsum(axis=0).cumsum(axis=1)
    x0, x1 = qx.start, qx.start + qx.length
    y0, y1 = qy.start, qy.start + qy.length
    total = prefix[x1, y1] - prefix[x0, y1] - prefix[x1, y0] + prefix[x0, y0]
    return float(total) / (qx.length * qy.length)


def ap_constant_2d(w: Weight2D, p: float, scope: Scope | str = Scope.GRID,
                   max_resolution: int | None = None) -> float:
    _check_cap(w.resolution, max_resolution)
    return ap_constant(w, p, scope)


def rhp_constant_2d(w: Weight2D, p: float, scope: Scope | str = Scope.GRID,
                    max_resolution: int | None = None) -> float:
    """Rectangle RH_p; in dyadic scope also at least the dyadic doubling constant."""
    _check_cap(w.resolution, max_resolution)
    scope = Scope.parse(scope)
    value = rhp_sup(w, p, scope)
    if scope is Scope.DYADIC:
        value = max(value, doubling_constant_2d(w, Scope.DYADIC))
    return value


def doubling_constant_2d(w: Weight2D, scope: Scope | str = Scope.GRID) -> float:
    """Largest mass ratio of a rectangle's double (both sides doubled) to the
    rectangle.  Grid scope uses concentric doubles of rectangles with both
    sides at most half the circle, with half cells integrated exactly."""
    scope = Scope.parse(scope)
    vals = np.asarray(w.values, dtype=np.float64)
    vals = vals / vals.mean()
    n = vals.shape[0]
    best = 4.0
    if scope is Scope.DYADIC:
        mass = vals
        while mass.shape[0] > 1:
            parent = mass[0::2, 0::2] + mass[1::2, 0::2] + mass[0::2, 1::2] + mass[1::2, 1::2]
            up = np.repeat(np.repeat(parent, 2, axis=0), 2, axis=1)
            best = max(best, float((up / mass).max()))
            mass = parent
        return best
    half = n // 2
    if half == 0:
        return best
    # prefix sums over three periods; coordinates below are in half cells
    # offset by one period, and the prefix is linear inside a cell
    ext = np.tile(vals, (3, 3))
    prefix = np.zeros((3 * n + 1, 3 * n + 1))
    prefix[1:, 1:] = ext.cumsum(axis=0).cumsum(axis=1)
    starts2 = 2 * (np.arange(n) + n)
    for lx in range(1, half + 1):
        small_x = _half_diff(prefix, starts2, starts2 + 2 * lx, axis=0)
        big_x = _half_diff(prefix, starts2 - lx, starts2 + 3 * lx, axis=0)
        for ly in range(1, half + 1):
            small = _half_diff(small_x, starts2, starts2 + 2 * ly, axis=1)
            big = _half_diff(big_x, starts2 - ly, starts2 + 3 * ly, axis=1)
            best = max(best, float((big / small).max()))
    return best


def _half_at(table: np.ndarray, h: np.ndarray, axis: int) -> np.ndarray:
    lo = h // 2
    a = np.take(table, lo, axis=axis)
    b = np.take(table, np.minimum(lo + 1, table.shape[axis] - 1), axis=axis)
    frac = ((h % 2) * 0.5).reshape((-1, 1) if axis == 0 else (1, -1))
    return a + (b - a) * frac


def _half_diff(table: np.ndarray, h0: np.ndarray, h1: np.ndarray, axis: int) -> np.ndarray:
    return _half_at(table, h1, axis) - _half_at(table, h0, axis)


def slice_constants(w: Weight2D, p: float, axis: str = "x") -> tuple[float, list[float]]:
    """Grid A_p constant of each one-variable slice.

    ``axis="x"`` takes ``x -> w(x, y)`` for every row ``y``; ``axis="y"``
    takes ``y -> w(x, y)`` for every ``x``.
    """
    if axis not in ("x", "y"):
        raise ValidationError(f"axis must be 'x' or 'y', got {axis!r}")
    vals = np.asarray(w.values)
    slices = vals.T if axis == "x" else vals
    consts = [ap_constant(Weight(w.resolution, s), p, Scope.GRID) for s in slices]
    return max(consts), consts


def _shifted_mean(members: np.ndarray, mask: np.ndarray, geometric: bool = False) -> np.ndarray:
    """``mean_{(i,j) in E} members[i, j](x + i, y + j)``; cells where every
    active value agrees return that value exactly."""
    pairs = np.argwhere(mask)
    stack = np.stack([np.roll(members[i, j], (-i, -j), axis=(0, 1)) for i, j in pairs], axis=-1)
    out = np.exp(np.log(stack).mean(axis=-1)) if geometric else stack.mean(axis=-1)
    flat = stack.min(axis=-1) == stack.max(axis=-1)
    out[flat] = stack[..., 0][flat]
    return out


def ga_average_2d(fam: WeightFamily2D) -> Weight2D:
    return Weight2D(fam.resolution, _shifted_mean(fam.members, fam.mask, geometric=True))


def translation_average_2d(fam: WeightFamily2D) -> Weight2D:
    return Weight2D(fam.resolution, _shifted_mean(fam.members, fam.mask))


def double_translate_family(w: Weight2D) -> WeightFamily2D:
    """Members ``w(x - i, y - j)``, so that every shifted slice is ``w``."""
    n = w.size
    members = np.empty((n, n, n, n))
    for i in range(n):
        for j in range(n):
            members[i, j] = np.roll(w.values, (i, j), axis=(0, 1))
    return WeightFamily2D(w.resolution, members)


def uniform_dyadic_bound_2d(fam: WeightFamily2D, p: float) -> float:
    return max(ap_constant(fam.members[i, j], p, Scope.DYADIC) for i, j in fam.active())
