"""Seeded generators of weights and weight families.

All randomness comes from the SplitMix64 stream in :mod:`weightlab.rng`.

Cascade layout: the draws for dyadic level ``k`` (``2**k`` parents) are
stream outputs ``2**k - 1 .. 2**(k+1) - 2``; parent ``j`` at level ``k``
uses ``u = output[2**k - 1 + j]``, ``d = delta * (2u - 1)``, and its left
child is multiplied by ``1 + d``, its right child by ``1 - d``.  The root
value is 1, so every cascade has mean 1 and every dyadic mean is the
corresponding coarse cascade value.

Family members use child seeds ``derive_seed(seed, i)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.special import expi

from .averaging import WeightFamily
from .grid import ValidationError, Weight, translate
from .product import Weight2D, WeightFamily2D
from .rng import derive_seed, uniforms

SMOOTH_SUP_CAP = 4.0


@dataclass(frozen=True)
class CascadeSpec:
    resolution: int
    delta: float
    seed: int = 0

    def __post_init__(self) -> None:
        if self.resolution < 0:
            raise ValidationError(f"resolution must be >= 0, got {self.resolution}")
        if not 0.0 <= float(self.delta) < 1.0:
            raise ValidationError(f"cascade delta must lie in [0, 1), got {self.delta}")

    def to_json(self) -> dict:
        return {"generator": "cascade", "resolution": self.resolution,
                "delta": float(self.delta), "seed": int(self.seed)}


def _split(values: np.ndarray, factors: np.ndarray) -> np.ndarray:
    out = np.empty(2 * values.size)
    out[0::2] = values * (1.0 + factors)
    out[1::2] = values * (1.0 - factors)
    return out


def cascade_weight(spec: CascadeSpec) -> Weight:
    n = 1 << spec.resolution
    u = uniforms(spec.seed, max(n - 1, 0))
    values = np.ones(1)
    for k in range(spec.resolution):
        d = spec.delta * (2.0 * u[(1 << k) - 1:(1 << (k + 1)) - 1] - 1.0)
        values = _split(values, d)
    return Weight(spec.resolution, values)


def seam_weight(resolution: int, a: float) -> Weight:
    """Fixed-ratio cascade: every left child gets ``1 - a``, every right child ``1 + a``.

    The cell value is the product over the binary digits of the cell index
    of ``1 + a`` (digit 1) or ``1 - a`` (digit 0).
    """
    if not 0.0 < a < 1.0:
        raise ValidationError(f"seam parameter must lie in (0, 1), got {a}")
    values = np.ones(1)
    for _ in range(resolution):
        values = _split(values, np.full(values.size, -a))
    return Weight(resolution, values)


def translate_family(w: Weight) -> WeightFamily:
    """Member ``i`` is ``w`` translated by ``i`` cells, so ``member_i(x + i) = w(x)``."""
    return WeightFamily(w.resolution, np.stack([translate(w, i).values for i in range(w.size)]))


def _trig(coefficients: Sequence[tuple[float, float]], x: np.ndarray) -> np.ndarray:
    g = np.zeros_like(x)
    for k, (a, b) in enumerate(coefficients, start=1):
        g += a * np.cos(2 * np.pi * k * x) + b * np.sin(2 * np.pi * k * x)
    return g


def _coefficients(coefficients) -> list[tuple[float, float]]:
    out = []
    for i, c in enumerate(coefficients):
        a, b = (float(v) for v in c)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValidationError(f"coefficient pair {i} is not finite")
        out.append((a, b))
    return out


def trig_sup(coefficients) -> float:
    """Upper bound on ``sup |g|``: the smaller of ``sum |a_k| + |b_k|`` and the
    maximum over a dense sample plus its Lipschitz sampling error."""
    coeffs = _coefficients(coefficients)
    if not coeffs:
        return 0.0
    l1 = sum(abs(a) + abs(b) for a, b in coeffs)
    lip = 2 * np.pi * sum(k * (abs(a) + abs(b)) for k, (a, b) in enumerate(coeffs, start=1))
    m = 4096 * len(coeffs)
    x = np.arange(m) / m
    sampled = float(np.abs(_trig(coeffs, x)).max()) + lip / (2 * m)
    return min(l1, sampled)


def smooth_doubling_weight(resolution: int, coefficients) -> Weight:
    """``exp(g)`` at cell midpoints, ``g(x) = sum_k a_k cos(2 pi k x) + b_k sin(2 pi k x)``.

    ``coefficients`` lists ``(a_k, b_k)`` for ``k = 1, 2, ...``.
    """
    coeffs = _coefficients(coefficients)
    if trig_sup(coeffs) > SMOOTH_SUP_CAP:
        raise ValidationError(f"trigonometric polynomial exceeds sup |g| <= {SMOOTH_SUP_CAP}")
    n = 1 << resolution
    x = (np.arange(n) + 0.5) / n
    return Weight(resolution, np.exp(_trig(coeffs, x)))


def smooth_doubling_bound(resolution: int, coefficients) -> float:
    """A priori bound on the grid doubling constant of :func:`smooth_doubling_weight`.

    The double of an arc of at most half the circle, plus half a cell at
    each end, has length at most ``1 + 2**-N``; the sampled ``g`` varies by
    at most ``Lip(g)`` times that, and never by more than ``2 sup |g|``.
    """
    coeffs = _coefficients(coefficients)
    lip = 2 * np.pi * sum(k * (abs(a) + abs(b)) for k, (a, b) in enumerate(coeffs, start=1))
    spread = min(lip * (1.0 + 2.0 ** -resolution), 2.0 * trig_sup(coeffs))
    return 2.0 * math.exp(spread)


def random_smooth_coefficients(seed: int, degree: int = 3, budget: float = 2.0) -> list[tuple[float, float]]:
    """Random coefficients with ``sum |a_k| + |b_k| = budget`` (so ``sup |g| <= budget``)."""
    if not 0 <= budget <= SMOOTH_SUP_CAP:
        raise ValidationError(f"budget must lie in [0, {SMOOTH_SUP_CAP}]")
    u = uniforms(seed, 2 * degree)
    raw = 2.0 * u - 1.0
    total = np.abs(raw).sum()
    raw = raw * (budget / total) if total > 0 else raw
    return [(float(raw[2 * k]), float(raw[2 * k + 1])) for k in range(degree)]


def _boundary_antiderivative(kind: str, u: np.ndarray) -> np.ndarray:
    if kind == "A1_boundary":
        # d/du [-Ei(log u)] = 1 / log(1/u)
        out = np.zeros_like(u)
        pos = u > 0
        out[pos] = -expi(np.log(u[pos]))
        return out
    if kind == "RHinf_boundary":
        # max{log(1/u), 1}: u (1 - log u) below 1/e, linear above
        out = u + 1.0 / math.e
        low = u <= 1.0 / math.e
        ul = u[low]
        with np.errstate(divide="ignore", invalid="ignore"):
            out[low] = np.where(ul > 0, ul * (1.0 - np.log(np.where(ul > 0, ul, 1.0))), 0.0)
        return out
    raise ValidationError(f"unknown boundary weight {kind!r}")


BOUNDARY_KINDS = ("A1_boundary", "RHinf_boundary")


def paper_log_weight(resolution: int, kind: str) -> Weight:
    """Logarithmic borderline weights centred at the point 1/2.

    ``A1_boundary`` is ``1 / log(1/|x|)`` and ``RHinf_boundary`` is
    ``max(log(1/|x|), 1)`` with ``|x|`` the circle distance to 1/2.  Each
    cell value is the exact average of the model over the cell.
    """
    if kind not in BOUNDARY_KINDS:
        raise ValidationError(f"unknown boundary weight {kind!r}; expected one of {BOUNDARY_KINDS}")
    if resolution < 4:
        raise ValidationError(f"boundary weights need N >= 4, got {resolution}")
    n = 1 << resolution
    half = n // 2
    edges = np.arange(half + 1) / n          # distances 0, 1/n, ..., 1/2
    right = np.diff(_boundary_antiderivative(kind, edges)) * n
    # cells half .. n-1 sit at distances [j/n, (j+1)/n); the left half mirrors them
    return Weight(resolution, np.concatenate([right[::-1], right]))


def random_family(specs: Iterable[CascadeSpec | dict], mask=None) -> WeightFamily:
    specs = [s if isinstance(s, CascadeSpec) else CascadeSpec(**s) for s in specs]
    if not specs:
        raise ValidationError("random_family needs at least one spec")
    resolution = specs[0].resolution
    for i, s in enumerate(specs):
        if s.resolution != resolution:
            raise ValidationError(f"spec {i} has resolution {s.resolution}, expected {resolution}")
    if len(specs) != 1 << resolution:
        raise ValidationError(f"a family at resolution {resolution} needs {1 << resolution} members, got {len(specs)}")
    return WeightFamily(resolution, np.stack([cascade_weight(s).values for s in specs]), mask)


def cascade_family(resolution: int, delta: float, seed: int, mask=None) -> WeightFamily:
    n = 1 << resolution
    return random_family([CascadeSpec(resolution, delta, derive_seed(seed, i)) for i in range(n)], mask)


def smooth_family(resolution: int, seed: int, degree: int = 3, budget: float = 2.0) -> WeightFamily:
    n = 1 << resolution
    members = [smooth_doubling_weight(resolution, random_smooth_coefficients(derive_seed(seed, i), degree, budget))
               for i in range(n)]
    return WeightFamily.from_weights(members)


def cascade_2d(resolution: int, delta: float, seed: int) -> Weight2D:
    """Product-martingale cascade on the bidisc.

    Each dyadic square at level ``k`` splits into four with multipliers
    ``(1 +- dx)(1 +- dy)``; level ``k`` uses ``2 * 4**k`` draws, ``dx`` then
    ``dy`` for each square in row-major ``(ix, iy)`` order.
    """
    if not 0.0 <= delta < 1.0:
        raise ValidationError(f"cascade delta must lie in [0, 1), got {delta}")
    values = np.ones((1, 1))
    offset = 0
    for k in range(resolution):
        m = 1 << k
        u = uniforms(seed, 2 * m * m, offset)
        offset += 2 * m * m
        dx = (delta * (2.0 * u[0::2] - 1.0)).reshape(m, m)
        dy = (delta * (2.0 * u[1::2] - 1.0)).reshape(m, m)
        out = np.empty((2 * m, 2 * m))
        for sx, fx in ((0, 1.0), (1, -1.0)):
            for sy, fy in ((0, 1.0), (1, -1.0)):
                out[sx::2, sy::2] = values * (1.0 + fx * dx) * (1.0 + fy * dy)
        values = out
    return Weight2D(resolution, values)


def cascade_family_2d(resolution: int, delta: float, seed: int, mask=None) -> WeightFamily2D:
    n = 1 << resolution
    members = np.empty((n, n, n, n))
    for i in range(n):
        for j in range(n):
            members[i, j] = cascade_2d(resolution, delta, derive_seed(seed, i * n + j)).values
    return WeightFamily2D(resolution, members, mask)
