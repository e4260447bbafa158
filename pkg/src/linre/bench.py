"""Complexity families and the benchmark harness.

Executed-instruction counts are the primary metric; they are deterministic
for a given input.  Wall time is optional and informational.
"""

from __future__ import annotations

import csv
import io
import statistics
import time
from dataclasses import asdict, dataclass, fields
from typing import Callable, Iterable, Optional

from .backtrack import BtStats, bt_match
from .compiler import CompileMode, CompileOptions
from .pipeline import MatchConfig, MatchStats, PipelineKind, Regex, full_match, select_pipeline

CSV_COLUMNS = (
    "family", "size", "bytecode", "instr_total", "instr_phase1", "instr_phase2", "instr_phase3",
    "forks", "slot_copies", "threads_peak", "wall_ns",
)


# --------------------------------------------------------------------------
# families: size -> (pattern, text)


def c1(n: int) -> tuple[str, str]:
    r = "a"
    for _ in range(n):
        r = f"({r})*"
    return r, "a" * 100


def c2(n: int) -> tuple[str, str]:
    r = "a"
    for _ in range(n):
        r = f"(?:{r})+"
    return r, "a" * 100


def c3(n: int) -> tuple[str, str]:
    r = "a|(^)"
    for _ in range(n):
        r = f"(?:{r})+"
    return r, "b"


def c4(n: int) -> tuple[str, str]:
    return "b(?:a(?<=ba*))*", "b" + "a" * n


def c5_regex(n: int) -> tuple[str, str]:
    r = "(a*)b"
    for _ in range(n):
        r = f"a(?={r})"
    return r, "a" * 1000 + "b"


def c5_string(n: int) -> tuple[str, str]:
    return "c(?:a(?=a*(?<=c(a*))b))*", "c" + "a" * n + "b"


def tradeoff(k: int) -> tuple[str, str]:
    return "(?:" + "(a)?" * k + ")*", "a" * 1000


FAMILIES: dict[str, Callable[[int], tuple[str, str]]] = {
    "C1": c1,
    "C2": c2,
    "C3": c3,
    "C4": c4,
    "C5-regex": c5_regex,
    "C5-string": c5_string,
    "tradeoff": tradeoff,
}


# --------------------------------------------------------------------------
# harness


@dataclass
class BenchRow:
    family: str
    size: int
    bytecode: int
    instr_total: int
    instr_phase1: int
    instr_phase2: int
    instr_phase3: int
    forks: int
    slot_copies: int
    threads_peak: int
    wall_ns: Optional[int] = None
    # not in the CSV
    string_passes: int = 0
    bound_violations: int = 0
    matched: bool = False


def bytecode_size(regex: Regex, pipeline: PipelineKind = PipelineKind.AUTO) -> int:
    """Total size of the programs the selected pipeline can execute."""
    if select_pipeline(regex, pipeline) is PipelineKind.STREAMING:
        return len(regex.streaming)
    return regex.bytecode_total()


def _timed(fn: Callable[[], object], repeats: int, warmup: int) -> int:
    for _ in range(warmup):
        fn()
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter_ns()
        fn()
        samples.append(time.perf_counter_ns() - t0)
    return int(statistics.median(samples))


def bench_one(
    family: str,
    size: int,
    config: Optional[MatchConfig] = None,
    options: Optional[CompileOptions] = None,
    wall: bool = False,
    repeats: int = 5,
    warmup: int = 1,
    stats: Optional[MatchStats] = None,
) -> BenchRow:
    """Pass ``stats`` to keep the per-run counters."""
    config = config or MatchConfig()
    options = options or CompileOptions(mode=config.mode)
    pattern, text = FAMILIES[family](size)
    regex = Regex(pattern, options=options)
    stats = stats if stats is not None else MatchStats()
    m = full_match(regex, text, config, stats)
    row = BenchRow(
        family, size, bytecode_size(regex, config.pipeline), stats.instructions,
        stats.phase1.instructions, stats.phase2.instructions, stats.phase3.instructions,
        stats.forks, stats.slot_copies, stats.threads_peak,
        string_passes=stats.string_passes, bound_violations=stats.bound_violations, matched=m is not None,
    )
    if wall:
        row.wall_ns = _timed(lambda: full_match(regex, text, config), repeats, warmup)
    return row


def bench_backtracker(family: str, size: int, wall: bool = False, repeats: int = 5, warmup: int = 1) -> BenchRow:
    """Same row shape; instr_total holds the backtracker's step count."""
    pattern, text = FAMILIES[family](size)
    st = BtStats()
    m = bt_match(pattern, text, budget=10**9, stats=st)
    row = BenchRow(family, size, 0, st.steps, 0, st.steps, 0, 0, 0, 0, matched=m is not None)
    if wall:
        row.wall_ns = _timed(lambda: bt_match(pattern, text, budget=10**9), repeats, warmup)
    return row


def bench_family(
    family: str,
    sizes: Iterable[int],
    metric: str = "instructions",
    config: Optional[MatchConfig] = None,
    options: Optional[CompileOptions] = None,
    engine: str = "linear",
    repeats: int = 5,
    warmup: int = 1,
) -> list[BenchRow]:
    if family not in FAMILIES:
        raise KeyError(f"unknown family {family!r}; known: {', '.join(FAMILIES)}")
    if metric not in ("instructions", "wall-time"):
        raise ValueError(f"unknown metric {metric!r}")
    wall = metric == "wall-time"
    rows = []
    for n in sizes:
        if n <= 0:
            raise ValueError("sizes must be positive")
        if engine == "backtrack":
            rows.append(bench_backtracker(family, n, wall, repeats, warmup))
        else:
            rows.append(bench_one(family, n, config, options, wall, repeats, warmup))
    return rows


def doubling_ratios(rows: list[BenchRow], key: str = "instr_total") -> list[float]:
    """value(2n)/value(n) for each consecutive pair of rows whose sizes double."""
    by_size = {r.size: getattr(r, key) for r in rows}
    return [by_size[2 * n] / by_size[n] for n in sorted(by_size) if 2 * n in by_size and by_size[n]]


def to_csv(rows: list[BenchRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        d = asdict(r)
        w.writerow(["" if d[c] is None else d[c] for c in CSV_COLUMNS])
    return buf.getvalue()


def legacy_config() -> MatchConfig:
    return MatchConfig(mode=CompileMode.LEGACY_CLEARREG)


assert set(CSV_COLUMNS) <= {f.name for f in fields(BenchRow)}
