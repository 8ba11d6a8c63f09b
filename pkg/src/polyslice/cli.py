"""Command-line entry point: ``polyslice verify | spectrum | calc | kernel``.

Exit codes: 0 success, 1 a verification assertion failed, 2 bad input
(config, JSON layout, IO), 3 the requested computation is not defined for the
input (unsupported representation, contour or spectrum violation, point on a
singular sphere).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .calculus import calc, check_contour, default_contour
from .clifford import Paravector, SliceUnit
from .config import SUITE_NAMES, ConfigError, load_config
from .errors import ContourError, SingularError, UnsupportedRepresentationError
from .io import FormatError, load_function, load_operator
from .operators import s_spectrum_scan
from .poly_slice import PolySliceFunction, kernel_P, kernel_Pi, kernel_pi_complex
from .quadrature import ContourSpec
from .slice_functions import kernel_S
from .suites import SuiteResult, run_operator_files, run_suite

REPORT_DIR_ENV = "POLYSLICE_REPORT_DIR"
EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_UNDEFINED = 0, 1, 2, 3
METHODS = ("I", "II", "series")


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def report_document(suite: str, seed: int | None, checks: list[dict], **extra) -> dict:
    asserted = [c for c in checks if c.get("asserted", True)]
    doc = {
        "suite": suite,
        "timestamp": _timestamp(),
        "seed": seed,
        "checks": checks,
        "summary": {
            "total": len(checks),
            "asserted": len(asserted),
            "passed": sum(1 for c in asserted if c["pass"]),
            "failed": sum(1 for c in asserted if not c["pass"]),
            "probes": len(checks) - len(asserted),
        },
    }
    doc.update(extra)
    return doc


def suite_report(result: SuiteResult, seed: int) -> dict:
    return report_document(result.name, seed, [r.to_json() for r in result.records],
                           seconds=result.seconds, budget_seconds=result.budget)


def report_dir() -> Path:
    return Path(os.environ.get(REPORT_DIR_ENV, "reports"))


def _write(doc: dict, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=1))


def _emit(doc: dict, out: str | None, name: str) -> None:
    """Print the document; also save it to ``out`` or, if the env var is set, the report dir."""
    print(json.dumps(doc, indent=1))
    if out:
        _write(doc, Path(out))
    elif REPORT_DIR_ENV in os.environ:
        _write(doc, report_dir() / f"{name}.json")


def _floats(text: str, what: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise FormatError(f"{what} must be a comma-separated list of numbers") from exc


# ----------------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------------

def cmd_verify(args) -> int:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = type(cfg)(args.seed, cfg.suites, cfg.operator_files)
    names = args.suite or list(SUITE_NAMES)
    unknown = [s for s in names if s not in SUITE_NAMES]
    if unknown:
        raise ConfigError(f"unknown suite(s): {', '.join(unknown)}")
    results = [run_suite(name, cfg) for name in names]
    if cfg.operator_files:
        results.append(run_operator_files(cfg))
    out_dir = report_dir()
    ok = True
    for res in results:
        _write(suite_report(res, cfg.seed), out_dir / f"verify_{res.name}.json")
        fails = res.failures()
        ok &= not fails
        status = "PASS" if not fails else "FAIL"
        print(f"{status} {res.name}: {len(res.records)} checks, {len(fails)} failed, {res.seconds:.2f}s")
        for f in fails[:5]:
            print(f"    {f.identity} residual={f.residual:.3e} tolerance={f.tolerance:.1e} params={f.params}")
    print(f"seed {cfg.seed}; reports in {out_dir}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_spectrum(args) -> int:
    T = load_operator(args.op)
    window = None
    if args.window:
        window = tuple(_floats(args.window, "--window"))
        if len(window) != 3:
            raise FormatError("--window takes u0,u1,v1")
    est = s_spectrum_scan(T, window, args.grid)
    points = [[u, v, r] for u, v, r in est.points]
    doc = report_document("spectrum", None, [], operator=str(args.op), points=points,
                          window=list(est.window), grid=est.step, candidates=est.candidates)
    _emit(doc, args.out, "spectrum")
    return EXIT_OK


def _contour_from_args(args, T) -> ContourSpec:
    base = default_contour(T)
    j = _unit_arg(args.j, T.n) if args.j else base.j
    radius = args.radius if args.radius is not None else base.radius
    center = args.center if args.center is not None else base.center
    return ContourSpec(j, center, radius, base.quad)


def _unit_arg(text: str, n: int) -> SliceUnit:
    vec = _floats(text, "--j")
    if len(vec) != n:
        raise FormatError(f"--j needs {n} components, got {len(vec)}")
    return SliceUnit.from_vector(np.asarray(vec))


def cmd_calc(args) -> int:
    T = load_operator(args.op)
    F = load_function(args.fn)
    F = F if isinstance(F, PolySliceFunction) else PolySliceFunction.of(F)
    if F.n != T.n:
        raise FormatError(f"function has n={F.n} but operator has n={T.n}")
    contour = _contour_from_args(args, T)
    check_contour(T, contour)
    value = calc(F, T, args.method, contour)
    others = {}
    for method in METHODS:
        if method == args.method:
            continue
        try:
            others[method] = value.dist(calc(F, T, method, contour))
        except UnsupportedRepresentationError as exc:
            others[method] = None
            others[f"{method}_note"] = str(exc)
    doc = report_document("calc", None, [], method=args.method, n=T.n, m=T.m,
                          commuting=T.commuting, contour={"center": contour.center, "radius": contour.radius,
                                                          "j": contour.j.components.tolist()},
                          realrep=value.realrep.tolist(), differences=others)
    _emit(doc, args.out, "calc")
    return EXIT_OK


def _paravector_arg(text: str, n: int | None) -> Paravector:
    vals = _floats(text, "paravector")
    if not vals:
        raise FormatError("empty paravector")
    n = n or max(2, len(vals) - 1)
    if len(vals) > n + 1:
        raise FormatError(f"paravector has {len(vals)} entries but n={n}")
    return Paravector(n, np.pad(vals, (0, n + 1 - len(vals))))


def cmd_kernel(args) -> int:
    if args.kind == "pi":
        t, z = _floats(args.s, "--s"), _floats(args.x, "--x")
        if len(t) > 2 or len(z) > 2:
            raise FormatError("kind=pi takes complex arguments as re[,im]")
        n = args.n or 2
        j = _unit_arg(args.j, n) if args.j else SliceUnit.basis(1, n)
        value = kernel_pi_complex(args.ell, complex(*z) if len(z) == 2 else z[0],
                                  complex(*t) if len(t) == 2 else t[0], j)
    else:
        s = _paravector_arg(args.s, args.n)
        x = _paravector_arg(args.x, s.n)
        if args.kind in ("SL", "SR"):
            value = kernel_S(s, x, args.kind[1], args.form)
        elif args.kind == "P":
            value = kernel_P(args.ell, s, x, args.side)
        else:
            value = kernel_Pi(args.ell, s, x, args.side)
    print(json.dumps([c + 0.0 for c in value.to_list()]))
    return EXIT_OK


# ----------------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polyslice", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", action="append", choices=SUITE_NAMES, help="repeatable; default all")
    v.add_argument("--seed", type=int)
    v.add_argument("--config")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("spectrum", help="locate the S-spectrum of an operator")
    s.add_argument("--op", required=True)
    s.add_argument("--window", help="u0,u1,v1")
    s.add_argument("--grid", type=float, help="grid step")
    s.add_argument("--out")
    s.set_defaults(func=cmd_spectrum)

    c = sub.add_parser("calc", help="evaluate F(T) with the PS-functional calculus")
    c.add_argument("--op", required=True)
    c.add_argument("--fn", required=True)
    c.add_argument("--method", choices=METHODS, default="I")
    c.add_argument("--radius", type=float)
    c.add_argument("--center", type=float)
    c.add_argument("--j", help="imaginary unit as comma-separated vector components")
    c.add_argument("--out")
    c.set_defaults(func=cmd_calc)

    k = sub.add_parser("kernel", help="evaluate a Cauchy kernel")
    k.add_argument("--kind", choices=("SL", "SR", "P", "Pi", "pi"), required=True)
    k.add_argument("--ell", type=int, default=0)
    k.add_argument("--s", required=True, help="paravector components (pi: re,im)")
    k.add_argument("--x", required=True, help="paravector components (pi: re,im)")
    k.add_argument("--n", type=int, help="algebra size; default inferred, at least 2")
    k.add_argument("--form", choices=("I", "II"), default="I")
    k.add_argument("--side", choices=("L", "R"), default="L")
    k.add_argument("--j", help="imaginary unit for kind=pi")
    k.set_defaults(func=cmd_kernel)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (UnsupportedRepresentationError, ContourError, SingularError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_UNDEFINED
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
