"""Haar analysis on the dyadic circle.

``h_J = |J|**-1/2`` on the left half of ``J`` and ``-|J|**-1/2`` on the
right half.  A grid function at resolution ``N`` is determined by its mean
and the coefficients ``(f, h_J)`` for the ``2**N - 1`` dyadic intervals of
level ``< N``.  Coefficients are stored level by level in one flat array:
level ``k`` occupies ``coeffs[2**k - 1 : 2**(k+1) - 1]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .grid import (Arc, DyadicInterval, ValidationError, _resolution_of,
                   as_grid_function, translation_mean)

MEAN_ZERO_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class HaarCoeffs:
    resolution: int
    mean: float
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        c = np.asarray(self.coeffs, dtype=np.float64).reshape(-1)
        if c.size != (1 << self.resolution) - 1:
            raise ValidationError(
                f"expected {(1 << self.resolution) - 1} coefficients, got {c.size}")
        object.__setattr__(self, "coeffs", c)

    def level(self, k: int) -> np.ndarray:
        if not 0 <= k < self.resolution:
            raise ValidationError(f"level {k} outside [0, {self.resolution})")
        return self.coeffs[(1 << k) - 1:(1 << (k + 1)) - 1]

    def __getitem__(self, interval: DyadicInterval) -> float:
        return float(self.level(interval.level)[interval.index])

    def items(self) -> Iterator[tuple[DyadicInterval, float]]:
        for k in range(self.resolution):
            for j, c in enumerate(self.level(k)):
                yield DyadicInterval(k, j), float(c)

    def energy(self) -> float:
        """``mean**2 + sum (f, h_J)**2``, which equals ``||f||_2**2``."""
        return self.mean**2 + float(np.dot(self.coeffs, self.coeffs))

    def to_json(self) -> dict:
        return {"resolution": self.resolution, "mean": self.mean,
                "levels": [self.level(k).tolist() for k in range(self.resolution)]}

    @classmethod
    def zeros(cls, resolution: int, mean: float = 0.0) -> "HaarCoeffs":
        return cls(resolution, mean, np.zeros((1 << resolution) - 1))


def haar_analyze(f) -> HaarCoeffs:
    values = as_grid_function(f)
    resolution = _resolution_of(values.size)
    coeffs = np.empty(values.size - 1)
    means = values.astype(np.float64)
    for k in range(resolution - 1, -1, -1):
        left, right = means[0::2], means[1::2]
        coeffs[(1 << k) - 1:(1 << (k + 1)) - 1] = 2.0 ** (-k / 2) * (left - right) / 2
        means = (left + right) / 2
    return HaarCoeffs(resolution, float(means[0]), coeffs)


def haar_reconstruct(c: HaarCoeffs) -> np.ndarray:
    values = np.array([c.mean])
    for k in range(c.resolution):
        step = c.level(k) * 2.0 ** (k / 2)
        out = np.empty(2 * values.size)
        out[0::2] = values + step
        out[1::2] = values - step
        values = out
    return values


def level_projection(f, level: int) -> np.ndarray:
    """Conditional expectation onto dyadic intervals of ``level``.

    Equal to the mean plus all Haar terms of level ``< level``.
    """
    values = as_grid_function(f)
    resolution = _resolution_of(values.size)
    if level >= resolution:
        return values.astype(np.float64, copy=True)
    block = values.size >> level
    return np.repeat(values.reshape(1 << level, block).mean(axis=1), block)


def split_level(cutoff_length: float | Arc, resolution: int) -> int:
    """First Haar level whose intervals are strictly shorter than the cutoff."""
    n = 1 << resolution
    if isinstance(cutoff_length, Arc):
        cells = cutoff_length.length
        level = 0
        while n >= cells << level:   # |J| = 2**-level >= cells/n
            level += 1
        return level
    c = float(cutoff_length)
    if not 0.0 < c <= 1.0:
        raise ValidationError(f"cutoff length {c} outside (0, 1]")
    level = 0
    while 2.0 ** -level >= c:
        level += 1
    return level


def scale_split(f, cutoff_length: float | Arc, shift: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Split ``f(. + shift)`` into fine-scale and coarse-scale Haar parts.

    ``phi_A`` collects the terms with ``|J| < cutoff_length``; ``phi_B`` is
    the mean plus the terms with ``|J| >= cutoff_length``.  Both are returned
    as grid functions of ``x`` evaluated at ``x + shift``.
    """
    values = as_grid_function(f)
    resolution = _resolution_of(values.size)
    k0 = split_level(cutoff_length, resolution)
    coeffs = haar_analyze(values)
    coarse = coeffs.coeffs.copy()
    coarse[(1 << min(k0, resolution)) - 1:] = 0.0
    phi_b = haar_reconstruct(HaarCoeffs(resolution, coeffs.mean, coarse))
    phi_a = values - phi_b
    if shift:
        phi_a, phi_b = np.roll(phi_a, -shift), np.roll(phi_b, -shift)
    return phi_a, phi_b


def carleson_constant(f, *, over_arcs: bool = False) -> float:
    """Smallest ``C`` with ``sum_{J in D, J subset I} (f,h_J)**2 <= C |I|``.

    ``f`` must have mean zero.  With ``over_arcs`` the intervals ``I`` range
    over all grid arcs instead of dyadic intervals only.
    """
    values = as_grid_function(f)
    scale = max(1.0, float(np.max(np.abs(values))))
    if abs(values.mean()) > MEAN_ZERO_TOL * scale:
        raise ValidationError(f"carleson_constant needs a mean-zero function (mean {values.mean():.3e})")
    coeffs = haar_analyze(values)
    resolution = coeffs.resolution
    if resolution == 0:
        return 0.0
    if over_arcs:
        return _carleson_over_arcs(coeffs)
    best = 0.0
    tail = np.zeros(1 << resolution)   # sums below the finest coefficient level
    for k in range(resolution - 1, -1, -1):
        tail = coeffs.level(k) ** 2 + tail[0::2] + tail[1::2]
        best = max(best, float(tail.max()) * 2.0**k)
    return best


def _carleson_over_arcs(coeffs: HaarCoeffs) -> float:
    resolution = coeffs.resolution
    n = 1 << resolution
    starts = np.arange(n)
    prefixes = []
    for k in range(resolution):
        sq = coeffs.level(k) ** 2
        prefixes.append(np.concatenate([[0.0], np.cumsum(np.concatenate([sq, sq]))]))
    best = 0.0
    for length in range(1, n + 1):
        total = np.zeros(1 if length == n else n)
        s = starts[:total.size]
        for k in range(resolution):
            block = n >> k
            if block > length:
                continue
            first = -(-s // block)                 # ceil
            last = (s + length) // block           # exclusive
            count = np.maximum(last - first, 0)
            total += prefixes[k][first + count] - prefixes[k][first]
        best = max(best, float(total.max()) * n / length)
    return best


def dyadic_square_oscillation(f) -> float:
    """``max_I mean_I |f - f_I|**2`` over dyadic ``I``, by direct reduction."""
    values = as_grid_function(f)
    resolution = _resolution_of(values.size)
    best = 0.0
    for k in range(resolution + 1):
        blocks = values.reshape(1 << k, -1)
        dev = blocks - blocks.mean(axis=1, keepdims=True)
        best = max(best, float((dev**2).mean(axis=1).max()))
    return best


@dataclass
class ScaleSplitTables:
    """Translation-averaged fine/coarse parts of a log-weight family.

    For every split level ``k0`` the coarse part is
    ``phi_B(x) = mean_{i in E} (E_k0 phi^i)(x + i)``, the fine part is
    ``phi - phi_B``.
    """

    resolution: int
    phi: np.ndarray
    coarse: dict[int, np.ndarray]

    def parts(self, length_cells: int) -> tuple[np.ndarray, np.ndarray]:
        k0 = split_level(Arc(0, length_cells), self.resolution)
        phi_b = self.coarse[min(k0, self.resolution)]
        return self.phi - phi_b, phi_b


def scale_split_tables(phis: np.ndarray, mask: np.ndarray | None = None) -> ScaleSplitTables:
    phis = np.asarray(phis, dtype=np.float64)
    m, n = phis.shape
    resolution = _resolution_of(n)
    if m != n:
        raise ValidationError("family must have one member per grid shift")
    phi = translation_mean(phis, mask)
    coarse = {resolution: phi}
    for k0 in range(1, resolution):
        block = n >> k0
        proj = np.repeat(phis.reshape(m, 1 << k0, block).mean(axis=2), block, axis=1)
        coarse[k0] = translation_mean(proj, mask)
    return ScaleSplitTables(resolution, phi, coarse)


def _check_mean_zero(phis: np.ndarray) -> None:
    means = phis.mean(axis=1)
    scale = max(1.0, float(np.abs(phis).max()))
    if np.abs(means).max() > 1e-9 * scale:
        raise ValidationError("every member log-weight must have mean zero; normalise the family first")


def empirical_CA_CB(phis: np.ndarray, q: Arc, mask: np.ndarray | None = None) -> tuple[float, float]:
    """``(C_A, C_B)`` of the translation-averaged family on one arc.

    ``C_A = mean_Q |phi_A|**2`` and
    ``C_B = max_{x0 in Q} mean_Q |phi_B(x) - phi_B(x0)|``.
    """
    phis = np.asarray(phis, dtype=np.float64)
    _check_mean_zero(phis)
    tables = scale_split_tables(phis, mask)
    q.validate(tables.resolution)
    phi_a, phi_b = tables.parts(q.length)
    cells = q.cells(tables.resolution)
    ca = float(np.mean(phi_a[cells] ** 2))
    local = phi_b[cells]
    cb = float(np.abs(local[:, None] - local[None, :]).mean(axis=1).max())
    return ca, cb


@dataclass
class ArcScaleStats:
    """Per-arc ``C_A``/``C_B`` for every arc of one length."""

    length: int
    starts: np.ndarray
    ca: np.ndarray
    cb: np.ndarray


def empirical_CA_CB_sweep(phis: np.ndarray, mask: np.ndarray | None = None,
                          max_length: int | None = None) -> Iterator[ArcScaleStats]:
    """Exact ``C_A``, ``C_B`` for every grid arc, grouped by length.  O(n**3)."""
    phis = np.asarray(phis, dtype=np.float64)
    _check_mean_zero(phis)
    tables = scale_split_tables(phis, mask)
    n = tables.phi.size
    max_len = n if max_length is None else max_length
    cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    all_starts = np.arange(n)
    for length in range(1, max_len + 1):
        k0 = min(split_level(Arc(0, length), tables.resolution), tables.resolution)
        if k0 not in cache:
            phi_a, phi_b = tables.parts(length)
            sq = phi_a**2
            pa = np.concatenate([[0.0], np.cumsum(np.concatenate([sq, sq]))])
            dev = np.abs(phi_b[None, :] - phi_b[:, None])          # [x0, x]
            pb = np.zeros((n, 2 * n + 1))
            np.cumsum(np.concatenate([dev, dev], axis=1), axis=1, out=pb[:, 1:])
            cache = {k0: (pa, pb)}
        pa, pb = cache[k0]
        starts = all_starts[:1] if length == n else all_starts
        ca = (pa[starts + length] - pa[starts]) / length
        x0 = (starts[:, None] + np.arange(length)[None, :]) % n       # [s, o]
        window = pb[x0, (starts + length)[:, None]] - pb[x0, starts[:, None]]
        cb = window.max(axis=1) / length
        yield ArcScaleStats(length, starts, np.maximum(ca, 0.0), cb)
