"""Benchmark the pure and compiled kernel backends on identical workloads.

Times the branch-and-bound maximizers (downlink rank oracle, uplink
fixpoint oracle) over a batch of random associations and reports per-call
means plus the speedup.  Outputs are compared bit for bit; a mismatch
aborts the run.

Usage: python3 benchmarks/bench_kernels.py [--sizes 8,12,16,20] [--batch 40]
"""

from __future__ import annotations

import argparse
import random
import statistics
import sys
import time

from cellassoc import DEFAULT_PRIME, DEFAULT_SEEDS, association, draw_channels
from cellassoc._encode import cells_masks, channel_arrays
from cellassoc._kernels import _pure

try:
    from cellassoc._kernels import _speedups
except ImportError:
    _speedups = None


def random_instance(rng: random.Random, k: int):
    nc = rng.randint(1, 3)
    cells = []
    for i in range(1, k + 1):
        pool = [j for j in range(i - nc, i + nc + 1) if 1 <= j <= k]
        size = rng.randint(0, min(nc, len(pool)))
        cells.append(rng.sample(pool, size))
    return association(k, nc, cells)


def prepare(k: int, batch: int, seed: int):
    rng = random.Random(seed)
    h0s, h1s = [], []
    for s in DEFAULT_SEEDS:
        h0, h1 = channel_arrays(draw_channels(k, s))
        h0s.append(h0)
        h1s.append(h1)
    jobs = []
    for _ in range(batch):
        assoc = random_instance(rng, k)
        masks = list(cells_masks(assoc))
        candidates = [i for i in range(1, k + 1) if masks[i - 1]]
        jobs.append((masks, candidates))
    return h0s, h1s, jobs


def run_backend(impl, k: int, h0s, h1s, jobs):
    dl_out, ul_out = [], []
    t0 = time.perf_counter()
    for masks, candidates in jobs:
        dl_out.append(
            impl.dl_max_active(k, masks, h0s, h1s, DEFAULT_PRIME, candidates)
        )
    t_dl = time.perf_counter() - t0
    t0 = time.perf_counter()
    for masks, candidates in jobs:
        ul_out.append(impl.ul_max_active(k, masks, candidates))
    t_ul = time.perf_counter() - t0
    return dl_out, ul_out, t_dl, t_ul


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="8,12,16,20")
    parser.add_argument("--batch", type=int, default=40)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args(argv)

    if _speedups is None:
        print("compiled kernels are not built; nothing to compare", file=sys.stderr)
        return 1

    sizes = [int(tok) for tok in args.sizes.split(",") if tok.strip()]
    print(f"batch={args.batch} seeds={list(DEFAULT_SEEDS)} prime={DEFAULT_PRIME}")
    print(f"{'k':>4} {'oracle':>8} {'pure ms':>10} {'compiled ms':>12} {'speedup':>8}")
    ratios = []
    for k in sizes:
        h0s, h1s, jobs = prepare(k, args.batch, args.seed)
        dl_p, ul_p, tdl_p, tul_p = run_backend(_pure, k, h0s, h1s, jobs)
        dl_c, ul_c, tdl_c, tul_c = run_backend(_speedups, k, h0s, h1s, jobs)
        if dl_p != dl_c or ul_p != ul_c:
            print(f"backend outputs differ at k={k}", file=sys.stderr)
            return 1
        for name, tp, tc in (("downlink", tdl_p, tdl_c), ("uplink", tul_p, tul_c)):
            per_p = 1000 * tp / args.batch
            per_c = 1000 * tc / args.batch
            ratio = tp / tc if tc > 0 else float("inf")
            ratios.append(ratio)
            print(f"{k:>4} {name:>8} {per_p:>10.3f} {per_c:>12.3f} {ratio:>7.1f}x")
    print(f"median speedup: {statistics.median(ratios):.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
