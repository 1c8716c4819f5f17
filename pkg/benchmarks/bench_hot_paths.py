"""Time the hot evaluation paths.

Run from the repository root:

    python benchmarks/bench_hot_paths.py [--repeats N]

Covers raw basis-weight block fills, Jain-operator evaluation (series
summation), hybrid-operator evaluation with a cold kernel-integral cache
(quadrature dominated) and with a warm cache (series dominated).
"""

from __future__ import annotations

import argparse
import time

from jainbaskakov import EvalConfig, KernelIntegralCache, OperatorParams, get_function
from jainbaskakov._core import jain_weights
from jainbaskakov.operators import eval_jain, eval_jain_baskakov


def _best(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_blocks() -> None:
    v0 = 0
    for _ in range(40):
        jain_weights(525.0, 0.3, v0, 4096)
        v0 += 4096


def bench_jain() -> None:
    params = OperatorParams(400.0, 1.0, 0.25)
    f = get_function("e2")
    cfg = EvalConfig()
    for x in (0.25, 0.5, 1.0, 2.0, 4.0):
        eval_jain(params, f, x, cfg)


def make_hybrid(warm: bool):
    params = OperatorParams(300.0, 1.0, 0.1)
    f = get_function("exp-neg")
    cfg = EvalConfig()
    cache = KernelIntegralCache()
    if warm:
        for x in (0.25, 0.5, 1.0, 2.0):
            eval_jain_baskakov(params, f, x, cfg, cache=cache)

    def run():
        local = cache if warm else KernelIntegralCache()
        for x in (0.25, 0.5, 1.0, 2.0):
            eval_jain_baskakov(params, f, x, cfg, cache=local)

    return run


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    rows = [
        ("basis-weight blocks (163840 weights)", _best(bench_blocks, args.repeats)),
        ("jain eval, 5 points at n=400", _best(bench_jain, args.repeats)),
        ("hybrid eval, cold integral cache", _best(make_hybrid(False), args.repeats)),
        ("hybrid eval, warm integral cache", _best(make_hybrid(True), args.repeats)),
    ]
    width = max(len(r[0]) for r in rows)
    print(f"{'task'.ljust(width)}  best time")
    for name, t in rows:
        print(f"{name.ljust(width)}  {t * 1e3:9.3f} ms")


if __name__ == "__main__":
    main()
