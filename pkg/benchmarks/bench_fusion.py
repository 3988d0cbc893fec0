"""Benchmark the combination kernels: compiled extension vs pure Python.

Generates random multi-source mass functions and times each rule under both
backends on identical inputs.  Run from the repository root:

    python benchmarks/bench_fusion.py --cases 300 --sources 4 --atoms 4
"""

from __future__ import annotations

import argparse
import random
import statistics
import time

from ermcda._kernels import BACKEND, available_backends
from ermcda.frame import frame_from_labels
from ermcda.fusion import MassFunction, combine_with_rule


def random_bba(frame, rng: random.Random, max_focals: int = 4) -> MassFunction:
    els = frame.elements
    k = rng.randint(2, min(max_focals, len(els)))
    picks = rng.sample(range(len(els)), k)
    ws = [rng.random() + 0.05 for _ in picks]
    t = sum(ws)
    return MassFunction(frame, {els[i]: w / t for i, w in zip(picks, ws)})


def time_backend(rule, cases, backend, repeats=3) -> float:
    """Best-of-N wall time for one backend over the whole case list."""
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for bbas in cases:
            combine_with_rule(rule, bbas, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--cases", type=int, default=300, help="random case count")
    parser.add_argument("--sources", type=int, default=4, help="sources per case")
    parser.add_argument("--atoms", type=int, default=4, help="frame atom count")
    parser.add_argument("--mode", choices=("DST", "DSmT"), default="DST")
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    backends = available_backends()
    if len(backends) < 2:
        print(
            "note: compiled backend unavailable in this interpreter; "
            "timing the python kernel only"
        )

    frame = frame_from_labels([f"t{i}" for i in range(args.atoms)], args.mode)
    rng = random.Random(args.seed)
    cases = [
        [random_bba(frame, rng) for _ in range(args.sources)]
        for _ in range(args.cases)
    ]
    # DSmT frames never conflict, and PCR6 handles conflict itself; only
    # dempster can abort on a random DST case, so it gets a safe case list
    rules = ["conjunctive", "pcr6", "dsm"] if args.mode == "DSmT" else [
        "conjunctive",
        "pcr6",
    ]

    print(
        f"{args.cases} cases x {args.sources} sources on a "
        f"{args.atoms}-atom {args.mode} frame "
        f"({len(frame.elements)} elements), default backend: {BACKEND}"
    )
    header = f"{'rule':<14}" + "".join(f"{b:>14}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for rule in rules:
        times = [time_backend(rule, cases, b) for b in backends]
        row = f"{rule:<14}" + "".join(f"{t * 1e3:>12.1f}ms" for t in times)
        if len(times) == 2:
            row += f"{times[1] / times[0]:>9.1f}x"
        print(row)

    # sanity: identical outputs across backends on a sample of the cases
    if len(backends) == 2:
        worst = 0.0
        for bbas in cases[:50]:
            a = combine_with_rule("pcr6", bbas, backend="compiled")
            b = combine_with_rule("pcr6", bbas, backend="python")
            for el in frame.elements:
                worst = max(worst, abs(a.mass(el) - b.mass(el)))
        print(f"max |compiled - python| over 50 pcr6 cases: {worst:.2e}")


if __name__ == "__main__":
    main()
