"""Weight-class constants on the grid.

Every constant is a supremum of a per-interval functional.  ``Scope.GRID``
ranges over all grid-aligned arcs (the discretisation of "all intervals");
``Scope.DYADIC`` over the dyadic intervals of level ``<= N``.  Essential
infima and suprema over an interval are the min and max cell values.

All functionals are invariant under ``w -> lambda w``; weights are divided by
their geometric mean before sweeping, and exponentials are formed in log
space with a per-column shift so that large ``p`` or wide dynamic range does
not overflow.
"""

from __future__ import annotations

import math
from typing import Iterator, Sequence

import numpy as np

from .grid import (Scope, ValidationError, Weight, as_grid_array, as_grid_function, sweep,
                   window_max_cover, window_sums)

INF = math.inf


def _log_normalized(w: Weight | np.ndarray) -> np.ndarray:
    phi = np.log(as_grid_array(w))
    return phi - phi.mean()


def _exp_column(phi: np.ndarray, a: float) -> tuple[np.ndarray, float]:
    """``exp(a phi - shift)`` and the shift, chosen so the column's max is 1."""
    e = a * phi
    shift = float(e.max())
    return np.exp(e - shift), shift


def _log_means(means: np.ndarray) -> np.ndarray:
    """``log`` of block means of a shifted exponential column.

    A zero mean means the column underflowed: the weight's dynamic range is
    too wide for this exponent in double precision.
    """
    if not np.all(means > 0):
        raise ValidationError("weight dynamic range too wide for this exponent (exp underflow)")
    return np.log(means)


def _check_ap(p: float) -> float:
    p = float(p)
    if not p >= 1:
        raise ValidationError(f"A_p needs p >= 1, got {p}")
    return p


def _check_rh(p: float) -> float:
    p = float(p)
    if not p > 1:
        raise ValidationError(f"RH_p needs p > 1, got {p}")
    return p


def iter_ap_functional(w, p: float, scope: Scope | str = Scope.GRID,
                       max_length: int | None = None) -> Iterator[tuple[int, np.ndarray, np.ndarray]]:
    """``(length, starts, values)`` of the A_p functional for every interval."""
    p = _check_ap(p)
    phi = _log_normalized(w)
    w1, s1 = _exp_column(phi, 1.0)
    if p == 1:
        for b in sweep({"w": w1}, scope, extrema=phi, max_length=max_length):
            yield b.length, b.starts, np.exp(_log_means(b.means["w"]) + s1 - b.lo)
    elif p == INF:
        for b in sweep({"w": w1, "phi": phi}, scope, max_length=max_length):
            yield b.length, b.starts, np.exp(_log_means(b.means["w"]) + s1 - b.means["phi"])
    else:
        r = 1.0 / (p - 1.0)
        w2, s2 = _exp_column(phi, -r)
        for b in sweep({"w": w1, "v": w2}, scope, max_length=max_length):
            log_val = (_log_means(b.means["w"]) + s1
                       + (p - 1.0) * (_log_means(b.means["v"]) + s2))
            yield b.length, b.starts, np.exp(log_val)


def iter_rh_functional(w, p: float, scope: Scope | str = Scope.GRID,
                       max_length: int | None = None) -> Iterator[tuple[int, np.ndarray, np.ndarray]]:
    """``(length, starts, values)`` of the RH_p functional (no doubling clause)."""
    p = _check_rh(p)
    phi = _log_normalized(w)
    w1, s1 = _exp_column(phi, 1.0)
    if p == INF:
        for b in sweep({"w": w1}, scope, extrema=phi, max_length=max_length):
            yield b.length, b.starts, np.exp(b.hi - s1 - _log_means(b.means["w"]))
    else:
        wp, sp = _exp_column(phi, p)
        for b in sweep({"w": w1, "wp": wp}, scope, max_length=max_length):
            log_val = (_log_means(b.means["wp"]) + sp) / p - _log_means(b.means["w"]) - s1
            yield b.length, b.starts, np.exp(log_val)


def _sup(it) -> float:
    best = -INF
    for _, _, vals in it:
        if vals.size == 0:
            continue
        best = max(best, float(vals.max()))
    return best


def ap_constant(w, p: float, scope: Scope | str = Scope.GRID) -> float:
    return _sup(iter_ap_functional(w, p, scope))


def rhp_sup(w, p: float, scope: Scope | str = Scope.GRID) -> float:
    """Supremum part of the RH_p constant, without the dyadic doubling clause."""
    return _sup(iter_rh_functional(w, p, scope))


def rhp_constant(w, p: float, scope: Scope | str = Scope.GRID) -> float:
    """RH_p constant; in dyadic scope the larger of the supremum and the
    dyadic doubling constant."""
    scope = Scope.parse(scope)
    value = rhp_sup(w, p, scope)
    if scope is Scope.DYADIC:
        value = max(value, doubling_constant(w, Scope.DYADIC))
    return value


def doubling_constant(w, scope: Scope | str = Scope.GRID) -> float:
    """Largest ratio of the mass of the double of an interval to its own mass.

    Dyadic scope uses the dyadic parent.  Grid scope uses the concentric
    double of each arc of at most half the circle; odd-length arcs have a
    double ending in half cells, integrated exactly.  Intervals inside a
    single cell always give exactly 2, which is therefore a floor.
    """
    scope = Scope.parse(scope)
    vals = as_grid_function(w)
    vals = vals / vals.mean()
    n = vals.size
    best = 2.0
    if scope is Scope.DYADIC:
        level_mass = vals
        while level_mass.size > 1:
            parent = level_mass[0::2] + level_mass[1::2]
            best = max(best, float((np.repeat(parent, 2) / level_mass).max()))
            level_mass = parent
        return best
    half = n // 2
    if half == 0:
        return best
    ext = np.concatenate([vals, vals])
    starts = np.arange(n)
    single = np.zeros(n)     # window sums of length L
    double = np.zeros(n)     # window sums of length 2L (after the even update)
    for length in range(1, half + 1):
        single = single + ext[length - 1:length - 1 + n]
        odd = double + ext[2 * length - 2:2 * length - 2 + n]          # length 2L-1
        double = odd + ext[2 * length - 1:2 * length - 1 + n]          # length 2L
        if length % 2 == 0:
            u = (starts - length // 2) % n
            big = double[u]
        else:
            u = (starts - (length - 1) // 2) % n
            big = odd[u] + 0.5 * vals[(u - 1) % n] + 0.5 * vals[(u + 2 * length - 1) % n]
        best = max(best, float((big / single).max()))
    return best


def bmo_norm(f, scope: Scope | str = Scope.GRID, exponent: int = 1) -> float:
    """``sup_Q (mean_Q |f - f_Q|**q)**(1/q)`` for ``q`` in {1, 2}."""
    if exponent not in (1, 2):
        raise ValidationError(f"BMO exponent must be 1 or 2, got {exponent}")
    scope = Scope.parse(scope)
    vals = as_grid_function(f).astype(np.float64)
    vals = vals - vals.mean()
    n = vals.size
    best = 0.0
    if scope is Scope.DYADIC:
        k = 0
        while (1 << k) <= n:
            blocks = vals.reshape(1 << k, -1)
            dev = np.abs(blocks - blocks.mean(axis=1, keepdims=True))
            if exponent == 2:
                dev = dev**2
            best = max(best, float(dev.mean(axis=1).max()))
            k += 1
        return best if exponent == 1 else math.sqrt(best)
    if exponent == 2:
        for b in sweep({"f": vals, "f2": vals**2}, Scope.GRID):
            var = np.maximum(b.means["f2"] - b.means["f"] ** 2, 0.0)
            best = max(best, float(var.max()))
        return math.sqrt(best)
    ext = np.concatenate([vals, vals])
    windows_all = np.lib.stride_tricks.sliding_window_view(ext, n)
    for length, sums in window_sums(vals, n):
        m = sums[:1] / length if length == n else sums / length
        win = windows_all[:m.size, :length]
        best = max(best, float(np.abs(win - m[:, None]).mean(axis=1).max()))
    return best


def hl_maximal(f) -> np.ndarray:
    """Uncentred maximal function over grid arcs containing each cell."""
    a = np.abs(as_grid_function(f)).astype(np.float64)
    n = a.size
    out = a.copy()
    for length, sums in window_sums(a, n):
        if length == n:
            np.maximum(out, sums[0] / n, out=out)
            break
        np.maximum(out, window_max_cover(sums / length, length), out=out)
    return out


def maximal_norm_ratio(w, p: float, test_functions: Sequence) -> float:
    """Largest ``int |Mf|**p w / int |f|**p w`` over the test functions."""
    p = float(p)
    if not 1 < p < INF:
        raise ValidationError(f"maximal inequality needs 1 < p < inf, got {p}")
    vals = as_grid_function(w)
    best = -INF
    for i, f in enumerate(test_functions):
        fv = as_grid_function(f)
        if fv.size != vals.size:
            raise ValidationError(f"test function {i} has the wrong resolution")
        if not np.any(fv):
            raise ValidationError(f"test function {i} is identically zero")
        num = float(np.sum(hl_maximal(fv) ** p * vals))
        den = float(np.sum(np.abs(fv) ** p * vals))
        best = max(best, num / den)
    return best
