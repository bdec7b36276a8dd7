"""Census table for U1/Uk over a range of k, exhaustive where feasible and fast beyond.

    python scripts/run_census.py --k-max 11 --out results/census.json
"""

import argparse
import json
import logging
import time
from pathlib import Path

from pgl1d.census import MAX_EXHAUSTIVE_K, fast_census, full_census
from pgl1d.quotient import QuotientContext

log = logging.getLogger("run_census")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k-min", type=int, default=4)
    ap.add_argument("--k-max", type=int, default=10)
    ap.add_argument("--r-param", type=int, default=1, choices=(1, 2))
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", type=Path)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")

    rows = []
    for k in range(args.k_min, args.k_max + 1):
        ctx = QuotientContext(k, args.r_param)
        t0 = time.perf_counter()
        if k <= MAX_EXHAUSTIVE_K:
            rep = full_census(ctx, workers=args.workers)
            if k >= 8:
                fast = fast_census(ctx, args.workers)
                assert fast.counts() == rep.counts(), f"fast and exhaustive disagree at k={k}"
        else:
            rep = fast_census(ctx, args.workers)
        log.info("k=%d |G|=2^%d k(G)=%s r(G)=%d by layer %s (%.1fs)", k, rep.order_log2, rep.num_classes,
                 rep.num_real_classes, rep.real_by_layer, time.perf_counter() - t0)
        rows.append(rep.to_dict())

    print(f"{'k':>3} {'log2|G|':>8} {'k(G)':>6} {'r(G)':>5}  real by layer")
    for r in rows:
        kg = "-" if r["num_classes"] is None else r["num_classes"]
        print(f"{r['k']:>3} {r['order_log2']:>8} {kg:>6} {r['num_real_classes']:>5}  {r['real_by_layer']}")
    if args.out:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(json.dumps(rows, indent=2))


if __name__ == "__main__":
    main()
