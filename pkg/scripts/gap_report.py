#!/usr/bin/env python3
"""Heuristic-vs-exact gap study.

Runs the group-formation heuristic and the exact solver on seeded random
instances inside the oracle limits and prints the cost-ratio distribution
plus timing, as a sanity report on heuristic quality.

    python3 scripts/gap_report.py [--instances 100] [--seed 42]
"""
from __future__ import annotations

import argparse
import random
import statistics
import time

from capflow import synth
from capflow.allocator import allocate
from capflow.oracle import exact_allocate


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--instances", type=int, default=100)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    ratios: list[float] = []
    heuristic_ms: list[float] = []
    exact_ms: list[float] = []
    violations = 0
    for i in range(args.instances):
        n, p = rng.randint(6, 12), rng.randint(3, 5)
        instance, config = synth.make_instance(1000 + i, n, p)
        t0 = time.perf_counter()
        h = allocate(instance, config)
        heuristic_ms.append((time.perf_counter() - t0) * 1000)
        t0 = time.perf_counter()
        e = exact_allocate(instance, config)
        exact_ms.append((time.perf_counter() - t0) * 1000)
        hc, ec = h.objective.total, e.objective.total
        if hc < ec:
            violations += 1
            print(f"!! instance {i} ({n} students / {p} proposals): heuristic {hc} < exact {ec}")
        ratios.append(1.0 if hc == ec else (float("inf") if ec == 0 else hc / ec))

    finite = sorted(r for r in ratios if r != float("inf"))
    buckets = [(1.0, "optimal"), (1.1, "<=1.1x"), (1.25, "<=1.25x"), (1.5, "<=1.5x"), (2.0, "<=2x"), (float("inf"), ">2x")]
    print(f"\ninstances: {args.instances}   heuristic-below-exact violations: {violations}")
    previous = 0.0
    for bound, label in buckets:
        count = sum(1 for r in ratios if previous < r <= bound) if label != "optimal" else sum(
            1 for r in ratios if r == 1.0
        )
        if label == "optimal":
            previous = 1.0
        else:
            previous = bound
        print(f"  {label:>8}: {count}")
    print(
        f"ratio median {statistics.median(finite):.3f}  p90 {finite[int(0.9 * len(finite)) - 1]:.3f}  "
        f"max {finite[-1]:.3f}"
    )
    print(
        f"heuristic ms median {statistics.median(heuristic_ms):.2f}  max {max(heuristic_ms):.2f}   "
        f"exact ms median {statistics.median(exact_ms):.1f}  max {max(exact_ms):.1f}"
    )


if __name__ == "__main__":
    main()
