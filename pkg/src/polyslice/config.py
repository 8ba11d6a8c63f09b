"""Verification settings: seed, per-suite instance counts and tolerances."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

DEFAULT_SEED = 20240917


@dataclass(frozen=True)
class SuiteSettings:
    count: int
    tolerances: dict = field(default_factory=dict)
    budget_seconds: float = 60.0


def _defaults() -> dict:
    return {
        "clifford": SuiteSettings(0, {"exact": 0.0}, 1.0),
        "kernels": SuiteSettings(100, {"relative": 1e-10}, 1.0),
        "slice_cauchy": SuiteSettings(20, {"reproduction": 1e-8, "j_independence": 1e-8}, 10.0),
        "poly_cauchy": SuiteSettings(20, {"reproduction": 1e-8, "families": 2e-8, "j_independence": 1e-8}, 30.0),
        "vanishing": SuiteSettings(10, {"integral": 1e-8}, 10.0),
        "series": SuiteSettings(20, {"terms": 60}, 5.0),
        "resolvent": SuiteSettings(20, {"one_variable": 1e-10, "two_variable": 1e-9, "modified": 1e-9}, 10.0),
        "spectrum": SuiteSettings(4, {"residual": 1e-8, "location": 1e-6, "containment": 1e-6}, 30.0),
        "calculus": SuiteSettings(10, {"agreement": 1e-8, "independence": 1e-8}, 60.0),
        "intrinsic": SuiteSettings(6, {"agreement": 1e-8}, 20.0),
        "product": SuiteSettings(5, {"rule": 1e-8}, 60.0),
        "poly_cr": SuiteSettings(10, {"ratio": 3.0, "lower_order_floor": 1e-3}, 10.0),
        "helper_lemma": SuiteSettings(5, {"lemma": 1e-8}, 10.0),
    }


SUITE_NAMES = tuple(_defaults())


@dataclass(frozen=True)
class VerifyConfig:
    seed: int = DEFAULT_SEED
    suites: dict = field(default_factory=_defaults)
    operator_files: tuple = ()

    def settings(self, name: str) -> SuiteSettings:
        return self.suites[name]

    def tol(self, suite: str, key: str) -> float:
        return self.suites[suite].tolerances[key]


class ConfigError(ValueError):
    pass


def load_config(path: str | Path | None) -> VerifyConfig:
    """Read a JSON config; every key is optional and overrides the defaults.

    Layout::

        {"seed": 7,
         "operators": ["op.json"],
         "suites": {"resolvent": {"count": 5, "tolerances": {"two_variable": 1e-8}}}}
    """
    cfg = VerifyConfig()
    if path is None:
        return cfg
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    suites = dict(cfg.suites)
    for name, over in raw.get("suites", {}).items():
        if name not in suites:
            raise ConfigError(f"unknown suite {name!r} in config")
        base = suites[name]
        tols = dict(base.tolerances)
        for key, val in over.get("tolerances", {}).items():
            if key not in tols:
                raise ConfigError(f"unknown tolerance {key!r} for suite {name!r}")
            tols[key] = float(val)
        suites[name] = replace(
            base,
            count=int(over.get("count", base.count)),
            tolerances=tols,
            budget_seconds=float(over.get("budget_seconds", base.budget_seconds)),
        )
    ops = tuple(str((path.parent / p).resolve()) if not Path(p).is_absolute() else p
                for p in raw.get("operators", []))
    return VerifyConfig(int(raw.get("seed", cfg.seed)), suites, ops)
