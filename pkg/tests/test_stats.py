from pathlib import Path

import pytest

from linre.errors import RegexError
from linre.parser import parse
from linre.stats import CATEGORIES, corpus_stats, corpus_stats_lines, features

DATA = Path(__file__).parent / "data"
KEYS = [k for k, _ in CATEGORIES]


def load_labels():
    rows = []
    for line in (DATA / "mini_corpus_labels.tsv").read_text().splitlines():
        if line.startswith("#") or not line:
            continue
        pat, parsed, flags = line.split("\t")
        rows.append((pat, parsed == "1", dict(zip(KEYS, (f == "1" for f in flags.split())))))
    return rows


LABELS = load_labels()


def test_corpus_file_matches_labels():
    pats = (DATA / "mini_corpus.txt").read_text().splitlines()
    assert pats == [p for p, _, _ in LABELS] and len(pats) == 50


@pytest.mark.parametrize("pat,parsed,flags", LABELS, ids=[p for p, _, _ in LABELS])
def test_each_pattern_label(pat, parsed, flags):
    if not parsed:
        with pytest.raises(RegexError):
            parse(pat)
        return
    assert features(parse(pat)) == flags


def test_corpus_totals():
    st = corpus_stats(DATA / "mini_corpus.txt")
    assert st.parsed == sum(p for _, p, _ in LABELS)
    assert st.failed == 50 - st.parsed
    for k in KEYS:
        assert st.counts[k] == sum(f[k] for _, p, f in LABELS if p)


def test_small_corpus():
    st = corpus_stats_lines(["(a*)b", "(?:a|)+", "x(?<=y)"])
    assert st.parsed == 3
    assert st.counts["nonnullable_plus"] == 0
    assert st.counts["nullable_greedy_plus"] == 1
    assert st.counts["captureless_lookbehinds"] == 1


def test_empty_corpus():
    st = corpus_stats_lines([])
    assert st.parsed == st.failed == 0 and all(v == 0 for v in st.counts.values())
    assert st.percent("lookarounds") == 0.0


def test_backreference_counts_as_failure():
    st = corpus_stats_lines(["(a)\\1"])
    assert (st.parsed, st.failed) == (0, 1)


def test_report_lists_categories_in_order():
    text = corpus_stats(DATA / "mini_corpus.txt").to_text().splitlines()
    assert text[:3] == ["patterns: 50", "parsed: 45", "failed: 5"]
    assert [l.split("  ")[0].strip() for l in text[3:]] == [label for _, label in CATEGORIES]


def test_unreadable_file(tmp_path):
    with pytest.raises(OSError):
        corpus_stats(tmp_path / "missing.txt")
