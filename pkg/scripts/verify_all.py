"""Run every verification suite and print an itemised report; exit 1 on any failure."""

import argparse
import sys
import time

from pgl1d.verify import SUITES, run_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--r-param", type=int, default=1, choices=(1, 2))
    ap.add_argument("--suite", action="append", choices=list(SUITES), help="repeatable; default all")
    args = ap.parse_args()

    failed = 0
    for name in args.suite or SUITES:
        t0 = time.perf_counter()
        checks = run_suite(name, seed=args.seed, r_param=args.r_param)
        print(f"== {name} ({time.perf_counter() - t0:.1f}s)")
        for c in checks:
            print(c.line())
        failed += sum(not c.passed for c in checks)
    print(f"{failed} failures")
    sys.exit(1 if failed else 0)


if __name__ == "__main__":
    main()
