"""Command line front end: ``weightlab gen | constants | average | verify``.

Exit codes: 0 success, 1 failed verification checks, 2 invalid input or
setup errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io
from .averaging import WeightFamily, ga_average, normalize_logmean, translation_average
from .families import (CascadeSpec, cascade_2d, cascade_family, cascade_family_2d,
                       cascade_weight, paper_log_weight, random_family,
                       random_smooth_coefficients, seam_weight, smooth_doubling_bound,
                       smooth_doubling_weight, translate_family)
from .grid import ValidationError, Weight
from .product import WeightFamily2D, ga_average_2d, translation_average_2d
from .report import constants_report
from . import verify as verify_mod

GENERATORS = ("cascade", "seam", "translate", "smooth", "paper-log", "random-family", "cascade-2d")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise ValidationError(f"generator {args.generator!r} needs --{name.replace('_', '-')}")


def _generate(args):
    g = args.generator
    meta = {"generator": g}
    if g == "cascade":
        _need(args, "n", "delta")
        spec = CascadeSpec(args.n, args.delta, args.seed)
        meta.update(spec.to_json())
        return cascade_weight(spec), meta
    if g == "seam":
        _need(args, "n", "a")
        meta.update(resolution=args.n, a=args.a)
        return seam_weight(args.n, args.a), meta
    if g == "translate":
        _need(args, "weight")
        w = io.load(args.weight)
        if not isinstance(w, Weight):
            raise ValidationError("--weight must be a weight-v1 file")
        meta.update(source=str(args.weight))
        return translate_family(w), meta
    if g == "smooth":
        _need(args, "n")
        if args.coeffs is not None:
            try:
                coeffs = json.loads(args.coeffs)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"--coeffs is not valid JSON: {exc}") from None
        else:
            coeffs = random_smooth_coefficients(args.seed, args.degree, args.budget)
        w = smooth_doubling_weight(args.n, coeffs)
        meta.update(resolution=args.n, coefficients=[list(c) for c in coeffs],
                    doubling_bound=smooth_doubling_bound(args.n, coeffs))
        return w, meta
    if g == "paper-log":
        _need(args, "n", "kind")
        meta.update(resolution=args.n, kind=args.kind)
        return paper_log_weight(args.n, args.kind), meta
    if g == "random-family":
        if args.spec is not None:
            doc = io.load_document(args.spec)
            specs = doc.get("members") if isinstance(doc, dict) else doc
            if not isinstance(specs, list):
                raise ValidationError("--spec file must hold a list of cascade specs (or {'members': [...]})")
            meta.update(members=specs)
            return random_family(specs), meta
        _need(args, "n", "delta")
        meta.update(resolution=args.n, delta=args.delta, seed=args.seed)
        return cascade_family(args.n, args.delta, args.seed), meta
    if g == "cascade-2d":
        _need(args, "n", "delta")
        meta.update(resolution=args.n, delta=args.delta, seed=args.seed, family=args.family)
        if args.family:
            return cascade_family_2d(args.n, args.delta, args.seed), meta
        return cascade_2d(args.n, args.delta, args.seed), meta
    raise ValidationError(f"unknown generator {g!r}")


def cmd_gen(args) -> int:
    obj, meta = _generate(args)
    _emit(io.dumps(io.to_document(obj, meta)), args.out)
    return 0


def cmd_constants(args) -> int:
    doc = io.load_document(args.file)
    w = io.from_document(doc)
    if not isinstance(w, Weight):
        raise ValidationError("constants takes a weight-v1 file")
    meta = {"source": str(args.file)}
    if isinstance(doc.get("meta"), dict):
        meta["meta"] = doc["meta"]
    ps = [tok for item in args.p for tok in str(item).split(",") if tok]
    report = constants_report(w, ps, args.scope, meta)
    _emit(json.dumps(report, indent=1, sort_keys=True) + "\n", args.out)
    return 0


def _parse_mask(text: str | None, count: int) -> np.ndarray | None:
    if text is None or text == "all":
        return None
    mask = np.zeros(count, dtype=bool)
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            i = int(tok)
        except ValueError:
            raise ValidationError(f"--mask entry {tok!r} is not an integer") from None
        if not 0 <= i < count:
            raise ValidationError(f"--mask index {i} outside [0, {count})")
        mask[i] = True
    if not mask.any():
        raise ValidationError("--mask selects no members (|E| = 0)")
    return mask


def cmd_average(args) -> int:
    fam = io.load(args.file)
    if isinstance(fam, WeightFamily):
        mask = _parse_mask(args.mask, fam.size)
        if mask is not None:
            fam = fam.with_mask(mask)
        _, record = normalize_logmean(fam)
        out = ga_average(fam) if args.mode == "ga" else translation_average(fam)
        normalization = record.to_json()
        active = fam.active().tolist()
    elif isinstance(fam, WeightFamily2D):
        mask = _parse_mask(args.mask, fam.size**2)
        if mask is not None:
            fam = WeightFamily2D(fam.resolution, fam.members, mask.reshape(fam.size, fam.size))
        out = ga_average_2d(fam) if args.mode == "ga" else translation_average_2d(fam)
        logs = np.log(fam.members).mean(axis=(2, 3))
        normalization = {"log_means": logs.tolist(),
                         "grand_factor": float(np.exp(logs[fam.mask].mean()))}
        active = (fam.active()[:, 0] * fam.size + fam.active()[:, 1]).tolist()
    else:
        raise ValidationError("average takes a family-v1 or family2d-v1 file")
    meta = {"mode": args.mode, "mask": active, "source": str(args.file),
            "normalization": normalization}
    _emit(io.dumps(io.to_document(out, meta)), args.out)
    return 0


def cmd_verify(args) -> int:
    report, curves = verify_mod.run(args.suite, args.seed, args.n)
    verify_mod.validate_report(report)
    text = json.dumps(report, indent=1) + "\n"
    if args.csv:
        Path(args.csv).write_text(verify_mod.curves_csv(curves))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    # progress lines go to stderr when the report itself is on stdout
    log = sys.stderr if args.out is None else sys.stdout
    for c in report["checks"]:
        print(f"{c['status']:8s} {c['id']}", file=log)
    c = report["counts"]
    print(f"suite {args.suite}: {c['pass']} pass, {c['fail']} fail, {c['reported']} reported "
          f"in {report['runtime']:.1f}s", file=log)
    return 1 if report["status"] == "fail" else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weightlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a weight or family file")
    g.add_argument("generator", choices=GENERATORS)
    g.add_argument("--n", type=int, help="resolution N (2**N cells)")
    g.add_argument("--delta", type=float, help="cascade multiplier deviation in [0, 1)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--a", type=float, help="seam split parameter in (0, 1)")
    g.add_argument("--kind", choices=("A1_boundary", "RHinf_boundary"))
    g.add_argument("--coeffs", help="JSON list of [a_k, b_k] pairs for the smooth generator")
    g.add_argument("--degree", type=int, default=3, help="random smooth coefficients: degree")
    g.add_argument("--budget", type=float, default=2.0, help="random smooth coefficients: sum |a|+|b|")
    g.add_argument("--weight", help="weight-v1 file for the translate generator")
    g.add_argument("--spec", help="JSON list of cascade specs for random-family")
    g.add_argument("--family", action="store_true", help="cascade-2d: emit a family2d-v1 file")
    g.add_argument("--out", help="output path (default stdout)")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("constants", help="compute weight constants")
    c.add_argument("file")
    c.add_argument("--p", nargs="+", default=["2"], help="exponents, e.g. --p 1.5 2 inf")
    c.add_argument("--scope", choices=("grid", "dyadic", "both"), default="grid")
    c.add_argument("--out")
    c.set_defaults(func=cmd_constants)

    a = sub.add_parser("average", help="average a weight family")
    a.add_argument("file")
    a.add_argument("--mode", choices=("ga", "arith"), default="ga")
    a.add_argument("--mask", help="comma-separated member indices (2D: i*2**N + j), or 'all'")
    a.add_argument("--out")
    a.set_defaults(func=cmd_average)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", default="all", choices=verify_mod.SUITES + ("all",))
    v.add_argument("--seed", type=int, default=verify_mod.DEFAULT_SEED)
    v.add_argument("--n", type=int, help="resolution override (default: per-suite)")
    v.add_argument("--out", help="report JSON path (default stdout)")
    v.add_argument("--csv", help="constant-vs-resolution curves CSV path")
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
