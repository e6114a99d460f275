"""Command line entry point.

    wlab verify   [--suite NAME ...] [--n N ...] [--seed S] [--jobs J] [--timing]
    wlab predict  --n N (--m M | --model fs|hyperquadric) [--p P --q Q] [--bundle] [--reduced] [--json]
    wlab spectrum (--model fs|hyperquadric|hyperquadric-tensor|sphere --n N | --file curvature.json) [--operator sym|reduced]

Exit codes: 0 when everything passes, 1 when a suite fails, 2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import predictor as pr
from .curvature import (BundleCurvature, CurvatureSymmetryError, KaehlerCurvature, RiemCurvature, Spectrum,
                        bundle_curv_operator, curvature_from_json, hyperquadric_tensor, m_positivity_level,
                        model_fubini_study, model_hyperquadric, model_round_sphere, reduced_curv_operator,
                        riem_curv_operator, sym_curv_operator)
from .report import dumps, table_to_json
from .suites import SUITES, RunConfig, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wlab", description="Weitzenboeck curvature-term laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification suites and stream JSON reports")
    v.add_argument("--suite", action="append", choices=[*SUITES, "all"],
                   help="suite to run (repeatable, default all)")
    v.add_argument("--n", type=int, action="append", help="restrict to complex dimension N (repeatable)")
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--tolerance", type=float, default=1e-9)
    v.add_argument("--identity-samples", type=int, default=1000)
    v.add_argument("--inequality-samples", type=int, default=10000)
    v.add_argument("--n-max", type=int, default=4)
    v.add_argument("--d-max", type=int, default=5)
    v.add_argument("--r-max", type=int, default=2)
    v.add_argument("--jobs", type=int, default=1, help="worker processes")
    v.add_argument("--timing", action="store_true", help="record wall-clock runtime_ms (otherwise 0)")

    p = sub.add_parser("predict", help="vanishing predictions from an m-positivity level")
    p.add_argument("--n", type=int, required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--m", help="positivity level (integer, fraction or 'none')")
    src.add_argument("--model", choices=["fs", "hyperquadric"])
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--bundle", action="store_true", help="twist by a Nakano positive bundle")
    p.add_argument("--reduced", action="store_true", help="use the reduced curvature operator rules")
    p.add_argument("--json", action="store_true")

    s = sub.add_parser("spectrum", help="eigenvalues and m-level of a curvature operator")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--model", choices=["fs", "hyperquadric", "hyperquadric-tensor", "sphere"])
    src.add_argument("--file", help="curvature JSON document")
    s.add_argument("--n", type=int, help="complex dimension (real dimension for sphere)")
    s.add_argument("--operator", choices=["sym", "reduced"], default="sym",
                   help="operator for Kaehler tensors")
    return parser


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    seed = int(os.environ["WLAB_SEED"]) if os.environ.get("WLAB_SEED") else args.seed
    try:
        cfg = RunConfig(tolerance=args.tolerance, identity_samples=args.identity_samples,
                        inequality_samples=args.inequality_samples, seed=seed, n_max=args.n_max,
                        d_max=args.d_max, r_max=args.r_max,
                        n_values=tuple(args.n) if args.n else None, timing=args.timing)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    names = args.suite or ["all"]
    selected = list(SUITES) if "all" in names else list(dict.fromkeys(names))
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = pool.map(run_suite, selected, [cfg] * len(selected))
            ok = _emit(reports)
    else:
        ok = _emit(run_suite(name, cfg) for name in selected)
    return EXIT_OK if ok else EXIT_FAIL


def _emit(reports) -> bool:
    ok = True
    for report in reports:
        print(dumps(report), flush=True)
        ok &= report.status == "pass"
    return ok


# ---------------------------------------------------------------------------
# predict


def _parse_m(text):
    if text is None or text.lower() == "none":
        return None
    try:
        m = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"invalid m {text!r}") from exc
    if m < 1:
        raise UsageError("m must be >= 1")
    return m


def cmd_predict(args) -> int:
    n = args.n
    if n < 1:
        raise UsageError("n must be >= 1")
    if args.model == "fs":
        m, label = m_positivity_level(Spectrum.of(sym_curv_operator(model_fubini_study(n)))), "fs"
    elif args.model == "hyperquadric":
        if n < 2:
            raise UsageError("the hyperquadric model needs n >= 2")
        m, label = m_positivity_level(model_hyperquadric(n)), "hyperquadric"
    else:
        m, label = _parse_m(args.m), None
    if args.bundle and args.reduced:
        raise UsageError("--bundle and --reduced are exclusive")
    if (args.p is None) != (args.q is None):
        raise UsageError("--p and --q go together")
    mode = "bundle" if args.bundle else "reduced" if args.reduced else "hodge"
    head = {"n": n, "m": None if m is None else _num(m), "mode": mode}
    if label:
        head["model"] = label
    try:
        if args.p is not None:
            verdict = _cell(mode, n, args.p, args.q, m)
            doc = {**head, "p": args.p, "q": args.q, **verdict.to_dict()}
            print(dumps(doc) if args.json else
                  f"H^{{{args.p},{args.q}}}: {verdict.verdict}" + (f" ({verdict.rule})" if verdict.rule else ""))
            return EXIT_OK
        table = (pr.bundle_report(n, m) if mode == "bundle"
                 else pr.hodge_diamond_report(n, m, "reduced" if args.reduced else "hodge"))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.json:
        print(dumps({**head, "table": table_to_json(table)}))
    else:
        print(" ".join(f"{k}={v}" for k, v in head.items()) + "   (0 vanishes, C equals C, ? no claim)")
        print(pr.render_table(table))
    return EXIT_OK


def _num(m):
    m = Fraction(m)
    return int(m) if m.denominator == 1 else float(m)


def _cell(mode, n, p, q, m):
    if mode == "bundle":
        return pr.vanishing_bundle(n, p, q, m, True)
    if mode == "reduced":
        return pr.reduced_vanishing(n, p, q, m)
    return pr.vanishing_hodge(n, p, q, m)


# ---------------------------------------------------------------------------
# spectrum


def cmd_spectrum(args) -> int:
    if args.model:
        if args.n is None or args.n < 1:
            raise UsageError("--model needs --n >= 1")
        if args.model == "hyperquadric":
            if args.n < 2:
                raise UsageError("the hyperquadric model needs n >= 2")
            spectrum, operator = model_hyperquadric(args.n), "sym"
        else:
            obj = {"fs": model_fubini_study, "hyperquadric-tensor": hyperquadric_tensor,
                   "sphere": model_round_sphere}[args.model](args.n)
            spectrum, operator = _spectrum_of(obj, args.operator)
    else:
        try:
            with open(args.file, encoding="utf-8") as fh:
                doc = json.load(fh)
            obj = curvature_from_json(doc)
        except OSError as exc:
            raise UsageError(f"cannot read {args.file}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise UsageError(f"malformed JSON in {args.file}: {exc}") from exc
        except CurvatureSymmetryError as exc:
            raise UsageError(f"symmetry violation: {exc}") from exc
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"invalid curvature document: {exc}") from exc
        spectrum, operator = _spectrum_of(obj, args.operator)
    print(dumps({"operator": operator, "eigenvalues": list(spectrum.eigenvalues), "dim": spectrum.dim,
                 "m_level": m_positivity_level(spectrum)}))
    return EXIT_OK


def _spectrum_of(obj, which):
    if isinstance(obj, KaehlerCurvature):
        M = sym_curv_operator(obj) if which == "sym" else reduced_curv_operator(obj)
        return Spectrum.of(M), which
    if isinstance(obj, BundleCurvature):
        return Spectrum.of(bundle_curv_operator(obj)), "bundle"
    if isinstance(obj, RiemCurvature):
        return Spectrum.of(riem_curv_operator(obj)), "riemannian"
    raise UsageError(f"unsupported object {type(obj).__name__}")


COMMANDS = {"verify": cmd_verify, "predict": cmd_predict, "spectrum": cmd_spectrum}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"wlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
