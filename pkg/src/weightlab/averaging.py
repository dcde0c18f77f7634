"""Geometric-arithmetic and translation averages of weight families.

A family at resolution ``N`` has one member per grid shift ``t_i = i/n``,
so ``x + t_i`` is always a grid point and both averages are exact finite
sums:

    Omega(c) = exp( mean_{i in E} log w_i(c + i) )
    omega(c) =      mean_{i in E}     w_i(c + i)

``E`` is the shift mask (default: all shifts).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import _log_means, ap_constant, rhp_constant
from .grid import (Scope, ValidationError, Weight, coarsen, sweep,
                   translation_mean)
from .haar import empirical_CA_CB_sweep
from .oscillation import OscKind, beta_constant, osc_constant


@dataclass(frozen=True, eq=False)
class WeightFamily:
    resolution: int
    members: np.ndarray = field(repr=False)
    mask: np.ndarray = field(default=None, repr=False)

    def __post_init__(self) -> None:
        n = 1 << self.resolution
        members = np.array(self.members, dtype=np.float64, copy=True)
        if members.shape != (n, n):
            raise ValidationError(f"family needs {n} members of length {n}, got shape {members.shape}")
        bad = np.argwhere(~np.isfinite(members) | (members <= 0))
        if bad.size:
            i, c = bad[0]
            raise ValidationError(f"member {i} value at index {c} is not a positive finite number")
        mask = np.ones(n, dtype=bool) if self.mask is None else np.array(self.mask, dtype=bool).reshape(-1)
        if mask.size != n:
            raise ValidationError(f"mask has length {mask.size}, expected {n}")
        if not mask.any():
            raise ValidationError("mask selects no members (|E| = 0)")
        members.setflags(write=False)
        mask.setflags(write=False)
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "mask", mask)

    @property
    def size(self) -> int:
        return 1 << self.resolution

    @property
    def mask_measure(self) -> float:
        return float(self.mask.sum()) / self.size

    def member(self, i: int) -> Weight:
        return Weight(self.resolution, self.members[i])

    def active(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def logs(self) -> np.ndarray:
        return np.log(self.members)

    def with_mask(self, mask) -> "WeightFamily":
        return WeightFamily(self.resolution, self.members, mask)

    def with_member(self, i: int, values) -> "WeightFamily":
        members = self.members.copy()
        members[i] = values
        return WeightFamily(self.resolution, members, self.mask)

    def coarsen(self, resolution: int) -> "WeightFamily":
        """The same family on the coarser shift grid and cell grid.

        Coarse shift ``j`` is fine shift ``j * 2**(N - resolution)``; its member
        is averaged over cells.
        """
        if resolution > self.resolution:
            raise ValidationError("cannot coarsen to a finer resolution")
        step = 1 << (self.resolution - resolution)
        idx = np.arange(0, self.size, step)
        members = np.stack([coarsen(self.members[i], resolution) for i in idx])
        return WeightFamily(resolution, members, self.mask[idx])

    @classmethod
    def from_weights(cls, weights: list[Weight], mask=None) -> "WeightFamily":
        if not weights:
            raise ValidationError("empty family")
        resolution = weights[0].resolution
        if any(w.resolution != resolution for w in weights):
            raise ValidationError("family members have mismatched resolutions")
        return cls(resolution, np.stack([w.values for w in weights]), mask)


@dataclass(frozen=True)
class NormalizationRecord:
    log_means: np.ndarray
    grand_factor: float

    def to_json(self) -> dict:
        return {"log_means": self.log_means.tolist(), "grand_factor": self.grand_factor}


def normalize_logmean(fam: WeightFamily) -> tuple[WeightFamily, NormalizationRecord]:
    logs = fam.logs()
    means = logs.mean(axis=1)
    normalized = WeightFamily(fam.resolution, np.exp(logs - means[:, None]), fam.mask)
    factor = math.exp(float(means[fam.mask].mean()))
    return normalized, NormalizationRecord(means, factor)


def denormalize(fam: WeightFamily, record: NormalizationRecord) -> WeightFamily:
    return WeightFamily(fam.resolution, fam.members * np.exp(record.log_means)[:, None], fam.mask)


def ga_average(fam: WeightFamily) -> Weight:
    return Weight(fam.resolution, translation_mean(fam.members, fam.mask, geometric=True))


def translation_average(fam: WeightFamily) -> Weight:
    return Weight(fam.resolution, translation_mean(fam.members, fam.mask))


def ap_factor_product(w1: Weight, w2: Weight, p: float) -> Weight:
    """``w1 * w2**(1 - p)``."""
    if w1.resolution != w2.resolution:
        raise ValidationError("factor weights have different resolutions")
    p = float(p)
    if not 1 <= p < math.inf:
        raise ValidationError(f"factorisation needs 1 <= p < inf, got {p}")
    return Weight(w1.resolution, w1.values * w2.values ** (1.0 - p))


def uniform_dyadic_bound(fam: WeightFamily, kind: str, p: float) -> float:
    """Max over active members of the dyadic ``A_p`` (kind "A") or
    ``RH_p`` (kind "RH", doubling clause included) constant."""
    if kind == "A":
        fn = ap_constant
    elif kind == "RH":
        fn = rhp_constant
    else:
        raise ValidationError(f"unknown constant kind {kind!r}")
    return max(fn(fam.member(i), p, Scope.DYADIC) for i in fam.active())


@dataclass
class EnvelopeResult:
    """Per-arc comparison of an averaged oscillation functional with its
    bound built from dyadic member constants and ``C_A``/``C_B``."""

    label: str
    dyadic_bound: float
    sup_lhs: float
    sup_rhs: float
    worst_slack: float
    worst_arc: tuple[int, int]
    ca_sup: float
    cb_sup: float
    arcs: int

    @property
    def passed(self) -> bool:
        return self.worst_slack >= -1e-9

    def global_bound(self, beta: float | None = None) -> float:
        """Bound with ``C_A`` and ``C_B`` replaced by their suprema."""
        spread = math.sqrt(self.ca_sup) + self.cb_sup
        if beta is None:
            return spread + self.dyadic_bound
        return 4.0 * self.dyadic_bound * math.exp(abs(beta) * spread)


def _envelope(fam: WeightFamily, label: str, dyadic_bound: float, lhs_fn, rhs_fn,
              *, beta: float | None = None) -> EnvelopeResult:
    normalized, _ = normalize_logmean(fam)
    phis = normalized.logs()
    phi = translation_mean(phis, fam.mask)
    columns = {"phi": phi}
    shift = 0.0
    if beta is not None:
        e = beta * phi
        shift = float(e.max())
        columns["e"] = np.exp(e - shift)
    best_lhs = best_rhs = -math.inf
    worst = math.inf
    worst_arc = (0, 0)
    ca_sup = cb_sup = 0.0
    count = 0
    blocks = sweep(columns, Scope.GRID, extrema=phi)
    for block, st in zip(blocks, empirical_CA_CB_sweep(phis, fam.mask)):
        lhs = lhs_fn(block, shift)
        rhs = rhs_fn(np.sqrt(st.ca) + st.cb)
        slack = (rhs - lhs) / np.maximum(1.0, np.abs(rhs))
        i = int(np.argmin(slack))
        if slack[i] < worst:
            worst, worst_arc = float(slack[i]), (int(block.starts[i]), block.length)
        best_lhs = max(best_lhs, float(lhs.max()))
        best_rhs = max(best_rhs, float(rhs.max()))
        ca_sup = max(ca_sup, float(st.ca.max()))
        cb_sup = max(cb_sup, float(st.cb.max()))
        count += lhs.size
    return EnvelopeResult(label, dyadic_bound, best_lhs, best_rhs, worst, worst_arc,
                          ca_sup, cb_sup, count)


def beta_envelope(fam: WeightFamily, beta: float) -> EnvelopeResult:
    """Check, on every grid arc ``Q``,

        mean_Q exp(beta (phi - phi_Q)) <= 4 C^d(beta) exp(|beta| (sqrt(C_A(Q)) + C_B(Q)))

    where ``phi`` is the log of the geometric-arithmetic average and
    ``C^d(beta)`` is the largest dyadic value of the same functional over
    the (log-mean normalised) members.
    """
    c_d = max(beta_constant(fam.member(i), beta, Scope.DYADIC) for i in fam.active())

    def lhs(block, shift):
        return np.exp(_log_means(block.means["e"]) + shift - beta * block.means["phi"])

    return _envelope(fam, f"beta={beta:g}", c_d, lhs,
                     lambda spread: 4.0 * c_d * np.exp(abs(beta) * spread), beta=beta)


def blo_envelope(fam: WeightFamily, which: str = "C3") -> EnvelopeResult:
    """Lower (``C3``) or upper (``C4``) oscillation of the averaged log,
    against ``sqrt(C_A(Q)) + C_B(Q) + max_i C3^d(w_i)`` (resp. ``C4^d``)."""
    if which not in ("C3", "C4"):
        raise ValidationError(f"blo_envelope takes C3 or C4, got {which!r}")
    c_d = max(osc_constant(fam.member(i), OscKind(which), Scope.DYADIC) for i in fam.active())

    def lhs(block, _shift):
        if which == "C3":
            return block.means["phi"] - block.lo
        return block.hi - block.means["phi"]

    return _envelope(fam, which, c_d, lhs, lambda spread: spread + c_d)
