import csv
import io

import pytest

from linre.bench import (
    CSV_COLUMNS,
    FAMILIES,
    bench_family,
    bench_one,
    doubling_ratios,
    legacy_config,
    to_csv,
)
from linre.compiler import CompileOptions
from linre.pipeline import MatchConfig, full_match
from linre.backtrack import bt_match
from linre.regstore import StoreKind


@pytest.mark.parametrize("family", list(FAMILIES))
def test_family_patterns_match_like_reference(family):
    pat, text = FAMILIES[family](3)
    m = full_match(pat, text)
    assert m is not None and m.groups == bt_match(pat, text).groups


def test_csv_columns():
    out = to_csv(bench_family("C2", [2, 4]))
    rows = list(csv.reader(io.StringIO(out)))
    assert tuple(rows[0]) == CSV_COLUMNS == (
        "family", "size", "bytecode", "instr_total", "instr_phase1", "instr_phase2", "instr_phase3",
        "forks", "slot_copies", "threads_peak", "wall_ns",
    )
    assert len(rows) == 3 and rows[1][0] == "C2" and rows[1][-1] == ""


def test_counts_are_deterministic():
    a = bench_family("C5-string", [20, 40])
    b = bench_family("C5-string", [20, 40])
    assert to_csv(a) == to_csv(b)


def test_wall_time_optional():
    row = bench_family("C4", [10], metric="wall-time", repeats=2, warmup=0)[0]
    assert row.wall_ns > 0


def test_bad_inputs():
    with pytest.raises(KeyError):
        bench_family("C9", [1])
    with pytest.raises(ValueError):
        bench_family("C1", [0])
    with pytest.raises(ValueError):
        bench_family("C1", [1], metric="cycles")


def test_c1_default_linear_legacy_superlinear():
    d = doubling_ratios(bench_family("C1", [10, 20, 40]), "bytecode")
    lg = doubling_ratios(bench_family("C1", [10, 20, 40], config=legacy_config()), "bytecode")
    assert max(d) <= 2.2 and lg[-1] > 3


def test_c2_linear_and_expansion_exponential():
    assert max(doubling_ratios(bench_family("C2", [5, 10, 20]), "bytecode")) <= 2.2
    assert bench_one("C2", 14, options=CompileOptions(expand_plus=True)).bytecode > 10_000


def test_c4_linear_vs_backtracker():
    lin = doubling_ratios(bench_family("C4", [100, 200, 400]))
    bt = doubling_ratios(bench_family("C4", [100, 200, 400], engine="backtrack"))
    assert max(lin) <= 2.2 and min(bt) >= 3.5


def test_tradeoff_copies():
    for k in (1, 4):
        arr = bench_one("tradeoff", k, MatchConfig(store=StoreKind.ARRAY))
        lst = bench_one("tradeoff", k, MatchConfig(store=StoreKind.LIST))
        assert arr.slot_copies == 2 * (k + 1) * arr.forks and lst.slot_copies == 0
        assert lst.instr_total == arr.instr_total


def test_c5_string_passes():
    assert bench_one("C5-string", 10).string_passes == 3
