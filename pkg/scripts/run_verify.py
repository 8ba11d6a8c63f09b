"""Run every verification suite with the default settings and print a compact table.

Usage: python scripts/run_verify.py [--seed N] [--config PATH]
"""

import argparse
import time

from polyslice.config import load_config
from polyslice.suites import SUITES, run_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int)
    ap.add_argument("--config")
    args = ap.parse_args()
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = type(cfg)(args.seed, cfg.suites, cfg.operator_files)

    start = time.perf_counter()
    ok = True
    print(f"{'suite':14s} {'checks':>6s} {'probes':>6s} {'tightest margin':>16s} {'seconds':>8s}")
    for name in SUITES:
        res = run_suite(name, cfg)
        asserted = [r for r in res.records if r.asserted]
        margin = min(r.margin for r in asserted)
        ok &= res.passed
        status = "" if res.passed else "  FAILED"
        print(f"{name:14s} {len(asserted):6d} {len(res.records) - len(asserted):6d} "
              f"{margin:16.3g} {res.seconds:8.2f}{status}")
    print(f"seed {cfg.seed}, total {time.perf_counter() - start:.1f}s, {'all passed' if ok else 'FAILURES'}")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
