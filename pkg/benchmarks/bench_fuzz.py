"""Compare the compiled fuzzy-matching kernel against the pure-Python fallback.

Both backends are imported side by side (no env vars needed) and timed on
the same randomly generated workload of bullet-sized text pairs.

    python3 benchmarks/bench_fuzz.py --pairs 2000 --repeats 5
"""

from __future__ import annotations

import argparse
import random
import time

from resume_tailor.fuzz import _pure

try:
    from resume_tailor.fuzz import _kernels
except ImportError:
    _kernels = None

WORDS = (
    "built maintained dashboards pipelines revenue reporting sql python"
    " stakeholders automated weekly quarterly analysis forecasting models"
    " reduced latency improved accuracy migrated warehouse tableau etl"
).split()


def make_pairs(count: int, rng: random.Random) -> list[tuple[str, str]]:
    def sentence(words: int) -> str:
        return " ".join(rng.choice(WORDS) for _ in range(words))

    pairs = []
    for _ in range(count):
        a = sentence(rng.randrange(2, 6))
        b = sentence(rng.randrange(4, 13))
        if rng.random() < 0.3:  # plant a real substring hit sometimes
            cut = b.split()
            at = rng.randrange(0, max(1, len(cut) - 2))
            b = " ".join(cut[:at] + a.split()[:3] + cut[at:])
        pairs.append((a, b))
    return pairs


def bench(fn, pairs: list[tuple[str, str]], repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        started = time.perf_counter()
        for a, b in pairs:
            fn(a, b)
        best = min(best, time.perf_counter() - started)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--pairs", type=int, default=300)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    pairs = make_pairs(args.pairs, random.Random(args.seed))
    backends = [("pure", _pure.best_substring_similarity)]
    if _kernels is not None:
        backends.insert(0, ("compiled", _kernels.best_substring_similarity))
    else:
        print("compiled kernel not built; benchmarking the fallback only")

    # agreement check before timing anything
    for a, b in pairs[:60]:
        results = {name: fn(a, b) for name, fn in backends}
        spread = max(results.values()) - min(results.values())
        assert spread <= 1e-9, f"backends disagree on {(a, b)!r}: {results}"

    print(f"{args.pairs} pairs, best of {args.repeats} runs\n")
    print(f"{'backend':<10} {'time':>10} {'pairs/s':>12}")
    times = {}
    for name, fn in backends:
        elapsed = bench(fn, pairs, args.repeats)
        times[name] = elapsed
        print(f"{name:<10} {elapsed:>9.3f}s {args.pairs / elapsed:>12,.0f}")
    if "compiled" in times:
        print(f"\nspeedup: {times['pure'] / times['compiled']:.1f}x")


if __name__ == "__main__":
    main()
