"""Verification suites: each runs seeded random instances of one family of identities.

A suite returns ``CheckRecord`` objects.  Records with ``asserted=False`` are
probes whose outcome is reported but does not decide the exit status.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import sampling
from .calculus import default_contour, ps_calc_I, ps_calc_II, series_oracle
from .checks import (
    helper_lemma_check,
    intrinsic_side_agreement,
    product_rule_check,
    resolvent_identity_residuals,
    series_tail_bound,
)
from .clifford import (
    Multivector,
    Paravector,
    SliceUnit,
    gp,
    random_unit,
    same_sphere,
    sign_table,
)
from .config import SUITE_NAMES, VerifyConfig
from .extended import closed_and_series
from .io import load_operator
from .operators import CliffordOperator, ParavectorOperator, s_resolvent, s_resolvent_series, s_spectrum_scan
from .poly_slice import dbar_fd_residual, eval_poly_slice, poly_cauchy_P, poly_cauchy_Pi, poly_cauchy_vanishing
from .quadrature import ContourSpec
from .slice_functions import SliceMonogenicPoly, eval_slice_poly, kernel_S, slice_cauchy_integral


@dataclass
class CheckRecord:
    identity: str
    params: dict
    residual: float
    tolerance: float
    passed: bool
    asserted: bool = True
    # "upper": residual must stay below tolerance; "lower": value must reach it
    bound: str = "upper"

    @property
    def margin(self) -> float:
        """Tolerance over residual (upper) or value over floor (lower); above 1 means passing."""
        num, den = (self.tolerance, self.residual) if self.bound == "upper" else (self.residual, self.tolerance)
        return num / den if den > 0 else float("inf")

    @property
    def params_digest(self) -> str:
        blob = json.dumps(self.params, sort_keys=True, default=str).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def to_json(self) -> dict:
        out = asdict(self)
        out["pass"] = out.pop("passed")
        out["params_digest"] = self.params_digest
        return out


@dataclass
class SuiteResult:
    name: str
    records: list = field(default_factory=list)
    seconds: float = 0.0
    budget: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records if r.asserted)

    def failures(self) -> list:
        return [r for r in self.records if r.asserted and not r.passed]


class _Recorder:
    def __init__(self):
        self.records: list[CheckRecord] = []

    def below(self, identity, params, residual, tol, asserted=True):
        residual = float(residual)
        self.records.append(CheckRecord(identity, params, residual, float(tol),
                                        bool(residual < tol), asserted))

    def above(self, identity, params, value, floor, asserted=True):
        value = float(value)
        self.records.append(CheckRecord(identity, params, value, float(floor),
                                        bool(value >= floor), asserted, "lower"))


def suite_rng(seed: int, name: str) -> np.random.Generator:
    """Independent stream per suite, so filtering suites does not change any instance."""
    return np.random.default_rng([seed, SUITE_NAMES.index(name)])


# ----------------------------------------------------------------------------
# Algebra and kernels
# ----------------------------------------------------------------------------

def suite_clifford(cfg: VerifyConfig, rng: np.random.Generator) -> list[CheckRecord]:
    rec = _Recorder()
    for n in (2, 3, 4):
        d = 1 << n
        eye = np.eye(d)
        ab = gp(eye[:, None, :], eye[None, :, :])
        lhs = gp(ab[:, :, None, :], eye[None, None, :, :])
        rhs = gp(eye[:, None, None, :], ab[None, :, :, :])
        rec.below("associativity_basis", {"n": n}, np.max(np.abs(lhs - rhs)), 1e-300)
        gens = [1 << i for i in range(n)]
        worst_sq = max(np.max(np.abs(ab[g, g] + eye[0])) for g in gens)
        worst_anti = max(np.max(np.abs(ab[a, b] + ab[b, a])) for a in gens for b in gens if a != b)
        rec.below("generator_squares", {"n": n}, worst_sq, 1e-300)
        rec.below("anticommutation", {"n": n}, worst_anti, 1e-300)
        sg = sign_table(n).astype(int)
        idx = np.arange(d)
        a, b, c = np.meshgrid(idx, idx, idx, indexing="ij")
        bad = np.count_nonzero(sg[a, b] * sg[a ^ b, c] != sg[b, c] * sg[a, b ^ c])
        rec.below("sign_cocycle", {"n": n}, bad, 0.5)
        ints = rng.integers(-5, 6, size=(200, 3, d)).astype(float)
        err = np.max(np.abs(gp(gp(ints[:, 0], ints[:, 1]), ints[:, 2]) - gp(ints[:, 0], gp(ints[:, 1], ints[:, 2]))))
        rec.below("associativity_integer", {"n": n, "samples": 200}, err, 1e-300)
    return rec.records


def suite_kernels(cfg: VerifyConfig, rng: np.random.Generator) -> list[CheckRecord]:
    rec = _Recorder()
    tol = cfg.tol("kernels", "relative")
    count = cfg.settings("kernels").count
    for n in (2, 3):
        worst = {"L": 0.0, "R": 0.0}
        for _ in range(count):
            s = sampling.random_paravector(rng, n)
            x = sampling.random_paravector(rng, n)
            if same_sphere(s, x):
                continue
            for side in "LR":
                k1 = kernel_S(s, x, side, "I")
                k2 = kernel_S(s, x, side, "II")
                worst[side] = max(worst[side], (k1 - k2).norm() / k1.norm())
        for side in "LR":
            rec.below(f"kernel_forms_{side}", {"n": n, "count": count}, worst[side], tol)
    return rec.records


def _random_contour(rng: np.random.Generator, n: int) -> ContourSpec:
    return ContourSpec(random_unit(rng, n), float(rng.uniform(-0.3, 0.3)), float(rng.uniform(1.5, 2.0)))


def suite_slice_cauchy(cfg: VerifyConfig, rng: np.random.Generator) -> list[CheckRecord]:
    rec = _Recorder()
    st = cfg.settings("slice_cauchy")
    for i in range(st.count):
        n, side = 2 + i % 2, "LR"[(i // 2) % 2]
        degree = int(rng.integers(0, 6))
        f = sampling.random_poly(rng, side, n, degree)
        c1 = _random_contour(rng, n)
        c2 = c1.with_unit(random_unit(rng, n))
        x = sampling.random_interior_point(rng, c1)
        exact = eval_slice_poly(f, x)
        v1 = slice_cauchy_integral(f, c1, x)
        v2 = slice_cauchy_integral(f, c2, x)
        params = {"i": i, "n": n, "side": side, "degree": degree}
        rec.below("slice_cauchy_reproduction", params,
                  max((v1 - exact).norm(), (v2 - exact).norm()), st.tolerances["reproduction"])
        rec.below("slice_cauchy_j_independence", params, (v1 - v2).norm(), st.tolerances["j_independence"])
    return rec.records


def suite_poly_cauchy(cfg: VerifyConfig, rng: np.random.Generator) -> list[CheckRecord]:
    rec = _Recorder()
    st = cfg.settings("poly_cauchy")
    for i in range(st.count):
        n, side, M = 2 + i % 2, "LR"[(i // 2) % 2], 1 + i % 4
        degree = int(rng.integers(0, 5))
        F = sampling.random_poly_slice(rng, side, n, M, degree)
        c1 = _random_contour(rng, n)
        c2 = c1.with_unit(random_unit(rng, n))
        x = sampling.random_interior_point(rng, c1)
        exact = eval_poly_slice(F, x)
        p1, q1 = poly_cauchy_P(F, c1, x), poly_cauchy_Pi(F, c1, x)
        p2, q2 = poly_cauchy_P(F, c2, x), poly_cauchy_Pi(F, c2, x)
        params = {"i": i, "n": n, "side": side, "M": M, "degree": degree}
        rec.below("poly_cauchy_P_reproduction", params,
                  max((p1 - exact).norm(), (p2 - exact).norm()), st.tolerances["reproduction"])
        rec.below("poly_cauchy_Pi_reproduction", params,
                  max((q1 - exact).norm(), (q2 - exact).norm()), st.tolerances["reproduction"])
        rec.below("poly_cauchy_P_vs_Pi", params, max((p1 - q1).norm(), (p2 - q2).norm()), st.tolerances["families"])
        rec.below("poly_cauchy_j_independence", params,
                  max((p1 - p2).norm(), (q1 - q2).norm()), st.tolerances["j_independence"])
    return rec.records


def suite_vanishing(cfg: VerifyConfig, rng: np.random.Generator) -> list[CheckRecord]:
    rec = _Recorder()
    st = cfg.settings("vanishing")
    for i in range(st.count):
        n, M = 2 + i % 2, 1 + i % 4
        F = sampling.random_poly_slice(rng, "L", n, int(rng.integers(1, M + 1)), int(rng.integers(0, 5)))
        G = sampling.random_poly_slice(rng, "R", n, int(rng.integers(1, M + 1)), int(rng.integers(0, 5)))
        contour = _random_contour(rng, n)
        val = poly_cauchy_vanishing(G, F, contour, M)
        rec.below("vanishing_bilinear_integral",
                  {"i": i, "n": n, "M": M, "order_F": F.order, "order_G": G.order},
                  val.norm(), st.tolerances["integral"])
    return rec.records


# ----------------------------------------------------------------------------
# Operators
# ----------------------------------------------------------------------------

def _outside_point(rng, T: ParavectorOperator, low: float = 1.1, high: float = 2.5) -> Paravector:
    radius = max(T.lift_norm, 1e-3) * rng.uniform(low, high)
    return sampling.random_paravector_with_norm(rng, T.n, radius)


def suite_series(cfg: VerifyConfig, rng: np.random.Generator) -> list[CheckRecord]:
    rec = _Recorder()
    st = cfg.settings("series")
    terms = int(st.tolerances["terms"])
    for i in range(st.count):
        n, m = 2 + i % 2, 1 + (i // 2) % 2
        T = sampling.random_operator(rng, n, m)
        s = sampling.random_paravector_with_norm(rng, n, T.component_norm * rng.uniform(2.0, 3.0))
        B = sampling.random_right_linear(rng, n, m)
        bound = 2.0 * series_tail_bound(T, s, terms)
        ext = closed_and_series(T, s, terms, B)
        params = {"i": i, "n": n, "m": m, "ratio": T.component_norm / s.norm(), "terms": terms}
        for key, (closed, diff) in ext.items():
            tail = bound * (B.norm() if key.startswith("modified") else 1.0)
            rec.below(f"series_pinning_{key}", params, np.linalg.norm(diff, 2), tail)
        # the double-precision closed forms agree with the extended ones to rounding level
        for side in "LR":
            closed64 = s_resolvent(T, s, side).realrep
            ref = ext[side][0]
            rel = np.linalg.norm(closed64 - ref, 2) / np.linalg.norm(ref, 2)
            rec.below(f"series_closed_form_float64_{side}", params, rel, 1e-13)
            series64 = s_resolvent_series(T, s, terms, side).realrep
            rec.below(f"series_float64_probe_{side}", params,
                      np.linalg.norm(closed64 - series64, 2), bound, asserted=False)
    return rec.records


def _operator_pair(rng, T: ParavectorOperator) -> tuple[Paravector, Paravector]:
    s = _outside_point(rng, T)
    while True:
        q = _outside_point(rng, T)
        if not same_sphere(q, s, 1e-3):
            return s, q


def _resolvent_records(rec: _Recorder, st, T: ParavectorOperator, s: Paravector, q: Paravector,
                       params: dict) -> None:
    for r in resolvent_identity_residuals(T, s, q):
        if r.identity in ("left_equation", "right_equation"):
            tol = st.tolerances["one_variable"]
        elif r.identity.startswith("two_variable"):
            tol = st.tolerances["two_variable"]
        else:
            tol = st.tolerances["modified"]
        rec.below(r.identity, params, r.residual, tol, r.asserted)


def suite_resolvent(cfg: VerifyConfig, rng: np.random.Generator) -> list[CheckRecord]:
    rec = _Recorder()
    st = cfg.settings("resolvent")
    for i in range(st.count):
        n, m = 2 + i % 2, 1 + i % 4
        for kind in ("commuting", "generic"):
            if kind == "commuting":
                T = sampling.random_commuting_operator(rng, n, m)
            else:
                T = sampling.random_operator(rng, n, m)
            s, q = _operator_pair(rng, T)
            params = {"i": i, "n": n, "m": m, "operator": kind, "commuting": T.commuting}
            _resolvent_records(rec, st, T, s, q, params)
    return rec.records


def suite_helper_lemma(cfg: VerifyConfig, rng: np.random.Generator) -> list[CheckRecord]:
    rec = _Recorder()
    st = cfg.settings("helper_lemma")
    tol = st.tolerances["lemma"]
    for i in range(st.count):
        n, m = 2 + i % 2, 1 + i % 3
        contour = _random_contour(rng, n)
        q = sampling.random_interior_point(rng, contour)
        square = SliceMonogenicPoly.real("L", n, [0.0, 0.0, 1.0])
        generic = sampling.random_poly(rng, "L", n, 3, intrinsic=True)
        B_any = CliffordOperator(n, m, rng.standard_normal((m << n, m << n)))
        B_lin = sampling.random_right_linear(rng, n, m)
        params = {"i": i, "n": n, "m": m}
        rec.below("helper_lemma_identity_B", params,
                  helper_lemma_check(CliffordOperator.identity(n, m), SliceMonogenicPoly.real("L", n, [1.0]),
                                     contour, q), tol)
        rec.below("helper_lemma_square_arbitrary_B", params, helper_lemma_check(B_any, square, contour, q), tol)
        rec.below("helper_lemma_poly_right_linear_B", params, helper_lemma_check(B_lin, generic, contour, q), tol)
    return rec.records


def _match_points(est, oracle: list[tuple[float, float]]) -> tuple[float, float, int]:
    """(worst oracle-to-estimate distance, worst estimate-to-oracle distance, estimate count)."""
    pts = est.as_array()
    if len(pts) == 0:
        return np.inf, 0.0, 0
    orc = np.array(oracle, dtype=float).reshape(-1, 2)
    dist = np.hypot(pts[:, None, 0] - orc[None, :, 0], pts[:, None, 1] - orc[None, :, 1])
    return float(dist.min(axis=0).max()), float(dist.min(axis=1).max()), len(pts)


def _dedupe(points: list[tuple[float, float]], tol: float = 1e-9) -> list[tuple[float, float]]:
    out: list[tuple[float, float]] = []
    for p in points:
        if all(np.hypot(p[0] - q[0], p[1] - q[1]) > tol for q in out):
            out.append(p)
    return out


def _spectrum_records(rec: _Recorder, st, T: ParavectorOperator, oracle, params) -> None:
    est = s_spectrum_scan(T)
    pts = est.as_array()
    resid = float(pts[:, 2].max()) if len(pts) else np.inf
    rec.below("spectrum_residual", params, resid, st.tolerances["residual"])
    missed, spurious, _ = _match_points(est, oracle)
    rec.below("spectrum_location", params, max(missed, spurious), st.tolerances["location"])
    radius = float(np.max(np.hypot(pts[:, 0], pts[:, 1]))) if len(pts) else 0.0
    rec.below("spectrum_containment", params, max(0.0, radius - T.component_norm), st.tolerances["containment"])


def suite_spectrum(cfg: VerifyConfig, rng: np.random.Generator) -> list[CheckRecord]:
    rec = _Recorder()
    st = cfg.settings("spectrum")
    for i in range(st.count):
        n = 2 + i % 2
        q = sampling.random_paravector(rng, n)
        T = ParavectorOperator.from_paravectors([q])
        oracle = [(q.re, float(np.linalg.norm(q.vector)))]
        _spectrum_records(rec, st, T, oracle, {"i": i, "oracle": "paravector", "n": n})

        m = 3
        comps = np.zeros((n + 1, m, m))
        comps[0] = rng.standard_normal((m, m))
        T = ParavectorOperator(n, comps)
        eig = np.linalg.eigvals(comps[0])
        oracle = _dedupe([(float(e.real), float(abs(e.imag))) for e in eig])
        _spectrum_records(rec, st, T, oracle, {"i": i, "oracle": "real_matrix", "n": n})

        qs = [sampling.random_paravector(rng, n) for _ in range(2)]
        T = ParavectorOperator.from_paravectors(qs)
        oracle = _dedupe([(p.re, float(np.linalg.norm(p.vector))) for p in qs])
        _spectrum_records(rec, st, T, oracle, {"i": i, "oracle": "diagonal", "n": n})
    return rec.records


def suite_calculus(cfg: VerifyConfig, rng: np.random.Generator) -> list[CheckRecord]:
    rec = _Recorder()
    st = cfg.settings("calculus")
    tol, tol_ind = st.tolerances["agreement"], st.tolerances["independence"]
    for i in range(st.count):
        n, m, M, side = 2 + i % 2, 2 + i % 2, 1 + i % 4, "LR"[(i // 2) % 2]
        F = sampling.random_poly_slice(rng, side, n, M, int(rng.integers(0, 4)))
        T = sampling.random_commuting_operator(rng, n, m)
        base = default_contour(T, random_unit(rng, n))
        a, b, c = ps_calc_I(F, T, base), ps_calc_II(F, T, base), series_oracle(F, T)
        params = {"i": i, "n": n, "m": m, "M": M, "side": side}
        rec.below("calculus_I_vs_II", params, a.dist(b), tol)
        rec.below("calculus_I_vs_series", params, a.dist(c), tol)
        rec.below("calculus_II_vs_series", params, b.dist(c), tol)
        other = ContourSpec(random_unit(rng, n), 0.1 * base.radius, 1.3 * base.radius)
        rec.below("calculus_contour_and_j_independence", params, a.dist(ps_calc_I(F, T, other)), tol_ind)
        # probe: the same comparison for an operator with non-commuting components
        G = sampling.random_operator(rng, n, m)
        probe = ps_calc_I(F, G).dist(ps_calc_II(F, G))
        rec.below("calculus_I_vs_II_noncommuting_probe", params, probe, tol, asserted=False)
    return rec.records


def suite_intrinsic(cfg: VerifyConfig, rng: np.random.Generator) -> list[CheckRecord]:
    rec = _Recorder()
    st = cfg.settings("intrinsic")
    tol = st.tolerances["agreement"]
    for i in range(st.count):
        n, m, M = 2 + i % 2, 2 + i % 2, 1 + i % 4
        F = sampling.random_poly_slice(rng, "L", n, M, int(rng.integers(0, 4)), intrinsic=True)
        T = sampling.random_commuting_operator(rng, n, m)
        params = {"i": i, "n": n, "m": m, "M": M}
        rec.below("intrinsic_left_right_I", params, intrinsic_side_agreement(F, T), tol)
        rec.below("intrinsic_left_right_II", params,
                  ps_calc_II(F, T).dist(ps_calc_II(F.as_side("R"), T)), tol)
        G = sampling.random_operator(rng, n, m)
        rec.below("intrinsic_left_right_noncommuting_probe", params,
                  intrinsic_side_agreement(F, G), tol, asserted=False)
    return rec.records


def _product_operands(rng, case: str, n: int):
    def poly(side, intrinsic=False, order=None):
        M = order or int(rng.integers(1, 4))
        return sampling.random_poly_slice(rng, side, n, M, int(rng.integers(0, 3)), intrinsic)

    def slice_fn(side, intrinsic=False):
        return sampling.random_poly(rng, side, n, int(rng.integers(0, 3)), intrinsic)

    return {
        "Ia": lambda: (poly("L", True), slice_fn("L")),
        "Ib": lambda: (poly("L"), slice_fn("L", True)),
        "IIa": lambda: (poly("R", True), slice_fn("R")),
        "IIb": lambda: (poly("R"), slice_fn("R", True)),
        "III": lambda: (poly("L", True), slice_fn("L", True)),
        "second:I": lambda: (poly("L", True), poly("L")),
        "second:II": lambda: (poly("R"), poly("R", True)),
    }[case]()


def suite_product(cfg: VerifyConfig, rng: np.random.Generator) -> list[CheckRecord]:
    rec = _Recorder()
    st = cfg.settings("product")
    for case in ("Ia", "Ib", "IIa", "IIb", "III", "second:I", "second:II"):
        for i in range(st.count):
            n, m = 2 + i % 2, 1 + i % 3
            T = sampling.random_commuting_operator(rng, n, m)
            F, g = _product_operands(rng, case, n)
            params = {"case": case, "i": i, "n": n, "m": m}
            rec.below(f"product_rule_{case}", params, product_rule_check(T, case, F, g), st.tolerances["rule"])
    return rec.records


def suite_poly_cr(cfg: VerifyConfig, rng: np.random.Generator) -> list[CheckRecord]:
    rec = _Recorder()
    st = cfg.settings("poly_cr")
    for i in range(st.count):
        n, M, side = 2 + i % 2, 1 + i % 4, "LR"[(i // 2) % 2]
        F = sampling.random_poly_slice(rng, side, n, M, 4)
        j = random_unit(rng, n)
        r1 = dbar_fd_residual(F, j, M, 1e-3)
        r2 = dbar_fd_residual(F, j, M, 5e-4)
        params = {"i": i, "n": n, "M": M, "side": side}
        rec.above("poly_cr_halving_ratio", params, r1 / r2, st.tolerances["ratio"])
        rec.above("poly_cr_lower_order", params, dbar_fd_residual(F, j, M - 1, 1e-3),
                  st.tolerances["lower_order_floor"])
    return rec.records


def suite_operator_files(cfg: VerifyConfig, rng: np.random.Generator) -> list[CheckRecord]:
    """Identities on user-supplied operators listed in the config."""
    rec = _Recorder()
    st = cfg.settings("resolvent")
    for path in cfg.operator_files:
        T = load_operator(path)
        s, q = _operator_pair(rng, T)
        _resolvent_records(rec, st, T, s, q, {"operator_file": path, "commuting": T.commuting})
        F = sampling.random_poly_slice(rng, "L", T.n, 2, 2)
        a, b, c = ps_calc_I(F, T), ps_calc_II(F, T), series_oracle(F, T)
        params = {"operator_file": path}
        tol = cfg.tol("calculus", "agreement")
        rec.below("calculus_I_vs_series", params, a.dist(c), tol, T.commuting)
        rec.below("calculus_II_vs_series", params, b.dist(c), tol)
    return rec.records


SUITES: dict[str, Callable[[VerifyConfig, np.random.Generator], list[CheckRecord]]] = {
    "clifford": suite_clifford,
    "kernels": suite_kernels,
    "slice_cauchy": suite_slice_cauchy,
    "poly_cauchy": suite_poly_cauchy,
    "vanishing": suite_vanishing,
    "series": suite_series,
    "resolvent": suite_resolvent,
    "spectrum": suite_spectrum,
    "calculus": suite_calculus,
    "intrinsic": suite_intrinsic,
    "product": suite_product,
    "poly_cr": suite_poly_cr,
    "helper_lemma": suite_helper_lemma,
}


def run_suite(name: str, cfg: VerifyConfig) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    start = time.perf_counter()
    records = SUITES[name](cfg, suite_rng(cfg.seed, name))
    return SuiteResult(name, records, time.perf_counter() - start, cfg.settings(name).budget_seconds)


def run_operator_files(cfg: VerifyConfig) -> SuiteResult:
    start = time.perf_counter()
    rng = np.random.default_rng([cfg.seed, len(SUITE_NAMES)])
    records = suite_operator_files(cfg, rng)
    return SuiteResult("operator_files", records, time.perf_counter() - start, 60.0)


__all__ = ["CheckRecord", "SuiteResult", "SUITES", "run_suite", "run_operator_files",
           "Multivector", "SliceUnit"]
