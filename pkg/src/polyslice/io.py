"""JSON formats for multivectors, functions, operators and residual reports."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .clifford import Multivector, Paravector
from .operators import CliffordOperator, ParavectorOperator
from .poly_slice import PolySliceFunction
from .slice_functions import IntrinsicElementary, SliceMonogenicPoly


class FormatError(ValueError):
    """A JSON document does not follow the expected layout."""


def _read(path: str | Path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path} is not valid JSON: {exc}") from exc


def _require(doc, keys, what):
    if not isinstance(doc, dict):
        raise FormatError(f"{what} must be a JSON object")
    missing = [k for k in keys if k not in doc]
    if missing:
        raise FormatError(f"{what} is missing {', '.join(missing)}")


def _floats(values, shape, what) -> np.ndarray:
    try:
        arr = np.asarray(values, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{what} must contain only numbers") from exc
    if arr.shape != shape:
        raise FormatError(f"{what} has shape {arr.shape}, expected {shape}")
    if not np.all(np.isfinite(arr)):
        raise FormatError(f"{what} contains non-finite values")
    return arr


def multivector_to_json(a: Multivector) -> list[float]:
    return a.to_list()


def multivector_from_json(values, n: int) -> Multivector:
    return Multivector(n, _floats(values, (1 << n,), "multivector"))


def paravector_from_json(values, n: int) -> Paravector:
    return Paravector(n, _floats(values, (n + 1,), "paravector"))


def function_to_json(f) -> dict:
    if isinstance(f, PolySliceFunction):
        return {"side": f.side, "n": f.n, "M": f.order,
                "components": [function_to_json(c) for c in f.components]}
    if isinstance(f, IntrinsicElementary):
        return {"side": f.side, "n": f.n, "kind": f.name, "scale": f.scale}
    return {"side": f.side, "n": f.n, "coeffs": f.coeffs.tolist()}


def function_from_json(doc):
    """Slice monogenic polynomial, elementary intrinsic function, or poly function."""
    _require(doc, ["side", "n"], "function")
    side, n = doc["side"], doc["n"]
    if side not in ("L", "R"):
        raise FormatError(f"side must be 'L' or 'R', got {side!r}")
    if not isinstance(n, int) or not 2 <= n <= 5:
        raise FormatError(f"n must be an integer in [2, 5], got {n!r}")
    if "components" in doc:
        comps = doc["components"]
        if not isinstance(comps, list) or not comps:
            raise FormatError("components must be a non-empty list")
        if "M" in doc and doc["M"] != len(comps):
            raise FormatError(f"M = {doc['M']} but {len(comps)} components given")
        parsed = []
        for c in comps:
            g = function_from_json(c)
            if isinstance(g, PolySliceFunction):
                raise FormatError("components must be slice monogenic functions")
            if g.side != side or g.n != n:
                raise FormatError("component side or n differs from the function's")
            parsed.append(g)
        return PolySliceFunction(side, tuple(parsed))
    if "kind" in doc and doc["kind"] != "polynomial":
        if doc["kind"] not in ("exp", "sin", "cos"):
            raise FormatError(f"unknown function kind {doc['kind']!r}")
        return IntrinsicElementary(doc["kind"], side, n, float(doc.get("scale", 1.0)))
    _require(doc, ["coeffs"], "function")
    rows = doc["coeffs"]
    if not isinstance(rows, list) or not rows:
        raise FormatError("coeffs must be a non-empty list")
    return SliceMonogenicPoly(side, n, _floats(rows, (len(rows), 1 << n), "coeffs"))


def load_function(path: str | Path):
    return function_from_json(_read(path))


def save_function(f, path: str | Path) -> None:
    Path(path).write_text(json.dumps(function_to_json(f), indent=1))


def operator_to_json(T: ParavectorOperator) -> dict:
    return {"n": T.n, "m": T.m, "components": T.components.tolist()}


def operator_from_json(doc) -> ParavectorOperator:
    _require(doc, ["n", "m", "components"], "operator")
    n, m = doc["n"], doc["m"]
    if not isinstance(n, int) or not 2 <= n <= 5:
        raise FormatError(f"n must be an integer in [2, 5], got {n!r}")
    if not isinstance(m, int) or m < 1:
        raise FormatError(f"m must be a positive integer, got {m!r}")
    comps = doc["components"]
    if not isinstance(comps, list) or len(comps) != n + 1:
        raise FormatError(f"operator needs {n + 1} component matrices")
    mats = []
    for i, c in enumerate(comps):
        arr = np.asarray(c, dtype=object)
        # accept nested rows or a flat row-major list
        shape = (m * m,) if arr.ndim == 1 else (m, m)
        mats.append(_floats(c, shape, f"component {i}").reshape(m, m))
    return ParavectorOperator(n, np.stack(mats))


def load_operator(path: str | Path) -> ParavectorOperator:
    return operator_from_json(_read(path))


def save_operator(T: ParavectorOperator, path: str | Path) -> None:
    Path(path).write_text(json.dumps(operator_to_json(T), indent=1))


def clifford_operator_to_json(A: CliffordOperator) -> dict:
    return {"n": A.n, "m": A.m, "realrep": A.realrep.tolist()}


def residual_record(identity: str, params: dict, residual: float, tolerance: float, passed: bool) -> dict:
    return {"identity": identity, "params": params, "residual": residual,
            "pass": passed, "tolerance": tolerance}
