"""Wall-time comparison of the compiled and pure-Python VM kernels.

    python benchmarks/bench_backends.py [--repeats 5]

Both kernels run the same programs and must report identical counters; the
script checks that before printing timings.
"""

import argparse
import statistics
import time

from linre.bench import FAMILIES
from linre.pipeline import MatchConfig, MatchStats, Regex, full_match
from linre.vm import available_backends

CASES = [
    ("C1", 20),
    ("C2", 30),
    ("C3", 40),
    ("C4", 2000),
    ("C5-regex", 20),
    ("C5-string", 2000),
    ("tradeoff", 8),
]


def timed(regex, text, cfg, repeats):
    full_match(regex, text, cfg)
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter_ns()
        full_match(regex, text, cfg)
        samples.append(time.perf_counter_ns() - t0)
    return statistics.median(samples)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()
    backends = available_backends()
    if "cython" not in backends:
        print("compiled kernel not built; only the Python kernel is available")
    print(f"{'family':<10} {'size':>6} " + " ".join(f"{b + ' ms':>10}" for b in backends) + "   speedup")
    for fam, n in CASES:
        pattern, text = FAMILIES[fam](n)
        regex = Regex(pattern)
        counts, times = [], []
        for b in backends:
            cfg = MatchConfig(backend=b)
            st = MatchStats()
            full_match(regex, text, cfg, st)
            counts.append((st.instructions, st.forks, st.slot_copies))
            times.append(timed(regex, text, cfg, args.repeats) / 1e6)
        assert all(c == counts[0] for c in counts), f"counter mismatch on {fam}: {counts}"
        speed = f"{times[0] / times[-1]:8.2f}x" if len(times) > 1 else ""
        print(f"{fam:<10} {n:>6} " + " ".join(f"{t:10.2f}" for t in times) + "  " + speed)


if __name__ == "__main__":
    main()
