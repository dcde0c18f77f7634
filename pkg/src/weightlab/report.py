"""Constants report for a single weight."""

from __future__ import annotations

import math
from typing import Iterable

from .constants import ap_constant, bmo_norm, doubling_constant, rhp_constant, rhp_sup
from .grid import Scope, ValidationError, Weight
from .oscillation import OscKind, _fmt_p, osc_constant

CONVENTIONS = {
    "intervals": "grid-aligned arcs (grid) or dyadic intervals (dyadic); full circle counted once",
    "essinf_esssup": "min / max cell value over the interval",
    "dyadic_rh": "dyadic RH_p is the larger of the supremum and the dyadic doubling constant; RH_p_sup is the supremum alone",
    "doubling": "grid doubling uses concentric doubles of arcs of at most half the circle",
    "bmo": "BMO is sup mean |f - f_Q|, BMO_2 is sup (mean |f - f_Q|^2)^(1/2), f = log w",
}


def parse_exponents(values: Iterable[str | float]) -> list[float]:
    out = []
    for v in values:
        text = str(v).strip().lower()
        p = math.inf if text in ("inf", "infinity") else float(text)
        if not p >= 1:
            raise ValidationError(f"exponent must be >= 1 or inf, got {v}")
        out.append(p)
    return out


def constants_for_scope(w: Weight, ps: list[float], scope: Scope, suffix: str = "") -> dict[str, float]:
    out: dict[str, float] = {}
    finite = [p for p in ps if 1 < p < math.inf]
    for p in sorted(set(ps) | {1.0, math.inf}):
        out[f"A_{_fmt_p(p)}{suffix}"] = ap_constant(w, p, scope)
    for p in sorted(set(finite) | {math.inf}):
        name = f"RH_{_fmt_p(p)}{suffix}"
        out[name] = rhp_constant(w, p, scope)
        if scope is Scope.DYADIC:
            out[f"RH_{_fmt_p(p)}_sup{suffix}"] = rhp_sup(w, p, scope)
    out[f"doubling{suffix}"] = doubling_constant(w, scope)
    kinds = [OscKind("C1"), OscKind("C3"), OscKind("C4")]
    kinds += [OscKind("C2", p) for p in sorted(set(finite))]
    kinds += [OscKind("C5", p) for p in sorted(set(finite))]
    for kind in kinds:
        out[f"{kind.name}{suffix}"] = osc_constant(w, kind, scope)
    logw = w.log()
    out[f"BMO{suffix}"] = bmo_norm(logw, scope, 1)
    out[f"BMO_2{suffix}"] = bmo_norm(logw, scope, 2)
    return out


def constants_report(w: Weight, ps: Iterable[str | float] = (2,), scope: str = "grid",
                     weight_meta: dict | None = None) -> dict:
    """``{"weight_meta", "constants", "conventions"}``.

    ``scope`` is ``grid``, ``dyadic`` or ``both``; with ``both`` the dyadic
    values carry a ``^d`` suffix.
    """
    ps = parse_exponents(ps)
    if scope == "both":
        constants = constants_for_scope(w, ps, Scope.GRID)
        constants.update(constants_for_scope(w, ps, Scope.DYADIC, "^d"))
    else:
        constants = constants_for_scope(w, ps, Scope.parse(scope))
    meta = {"resolution": w.resolution}
    meta.update(weight_meta or {})
    return {"weight_meta": meta, "constants": constants,
            "conventions": dict(CONVENTIONS, scope=scope)}
