"""Benchmark the compiled kernel against the pure-Python fallback.

Run as ``python -m mertensap.benchmark [--bound N]``.  Times the segmented
sieve, a residue-class product accumulation, and the per-class power-sum
table on each available backend, and checks that the results agree.
"""

from __future__ import annotations

import argparse
import math
import time

import mpmath as mp

from . import kernels


def _time(fn, repeats: int = 1) -> tuple[float, object]:
    best = math.inf
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def run(bound: int) -> list[dict]:
    backends = list(kernels.available_backends())
    rows = []

    def add_row(task, times, agreement):
        row = {"task": task, "agreement": agreement}
        row.update(times)
        if "compiled" in times and "fallback" in times and times["compiled"] > 0:
            row["speedup"] = times["fallback"] / times["compiled"]
        rows.append(row)

    times = {}
    maps = {}
    for name in backends:
        mod = kernels.available_backends()[name]
        times[name], maps[name] = _time(lambda m=mod: m.build_odd_bitmap(bound))
    agree = len({bytes(v) for v in maps.values()}) == 1
    add_row(f"sieve to {bound}", times, agree)

    times = {}
    sums = {}
    for name in backends:
        times[name], sums[name] = _time(
            lambda n=name: kernels.class_series_sum(4, 1, 2, 2, 2, bound, backend=n)[0]
        )
    with mp.workdps(40):
        spread = max(abs(a - b) for a in sums.values() for b in sums.values())
        agree = spread < mp.mpf("1e-26")
    add_row("class product log-sum (q=4, t=2)", times, agree)

    ps_bound = min(bound, 10**5)
    times = {}
    tables = {}
    for name in backends:
        times[name], tables[name] = _time(
            lambda n=name: kernels.class_power_sums(5, ps_bound, 64, backend=n)
        )
    with mp.workdps(40):
        spread = mp.mpf(0)
        first = tables[backends[0]]
        for other in tables.values():
            for b in first:
                for x, y in zip(first[b], other[b]):
                    spread = max(spread, abs(x - y))
        agree = spread < mp.mpf("1e-26")
    add_row(f"power-sum table (q=5, to {ps_bound})", times, agree)
    return rows


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--bound", type=int, default=10**6)
    args = parser.parse_args(argv)

    print(f"active backend: {kernels.backend_name()}")
    print(f"available: {', '.join(kernels.available_backends())}")
    rows = run(args.bound)
    for row in rows:
        print(f"\n{row['task']}  (results agree: {row['agreement']})")
        for name in ("compiled", "fallback"):
            if name in row:
                print(f"  {name:9s}: {row[name]*1000:10.2f} ms")
        if "speedup" in row:
            print(f"  speedup  : {row['speedup']:10.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
