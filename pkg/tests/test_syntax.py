from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from linre.backtrack import bt_empty_at, bt_match
from linre.desugar import desugar_counted
from linre.errors import StepBudgetExceeded
from linre.fuzz import FuzzProfile
from linre.parser import parse
from linre.pipeline import full_match
from linre.syntax import (
    Char,
    Concat,
    Group,
    Iterate,
    Lookaround,
    LookKind,
    Nullability,
    Union,
    node_count,
    nullability,
    reverse,
    to_pattern,
    walk,
)

from conftest import regex_asts, small_strings


@pytest.mark.parametrize("pat,expected", [
    ("a", Nullability.NN),
    (".", Nullability.NN),
    ("a*", Nullability.CIN),
    ("(?:ab)*?", Nullability.CIN),
    ("a|(?=b)", Nullability.CDN),
    ("^", Nullability.CDN),
    ("\\b", Nullability.CDN),
    ("a{0,3}", Nullability.CIN),
    ("a{2,3}", Nullability.NN),
    ("(?:a|)+", Nullability.CIN),
    ("(?:a|^)+", Nullability.CDN),
    ("(?:a|)b", Nullability.NN),
    ("(?:a|)(?=b)", Nullability.CDN),
])
def test_nullability_rules(pat, expected):
    assert nullability(parse(pat)) is expected


def test_nullability_order():
    assert Nullability.NN > Nullability.CDN > Nullability.CIN
    assert max(Nullability.CIN, Nullability.NN) is Nullability.NN


def _ids(ast):
    return Counter((type(n).__name__, getattr(n, "gid", None), getattr(n, "lid", None), getattr(n, "qid", None))
                   for n in walk(ast))


@given(regex_asts(), small_strings)
def test_nullability_agrees_with_backtracker(ast, text):
    ast = parse(to_pattern(ast))
    for node in walk(ast):
        cls = nullability(node)
        if cls is Nullability.CDN:
            continue
        for pos in range(len(text) + 1):
            try:
                empty = bt_empty_at(node, text, pos, budget=50_000)
            except StepBudgetExceeded:
                continue
            if cls is Nullability.NN:
                assert not empty, (to_pattern(node), text, pos)
            else:
                assert empty, (to_pattern(node), text, pos)


def test_reverse_spells_backwards():
    r = reverse(parse("abc"))
    assert r == Concat(Concat(Char("c"), Char("b")), Char("a"))
    assert bt_match("^(?:" + to_pattern(r) + ")$", "cba") is not None
    assert reverse(Char("a")) == Char("a")


def test_reverse_keeps_lookaround_kind():
    r = reverse(parse("x(?<=ab)"))
    look = next(n for n in walk(r) if isinstance(n, Lookaround))
    assert look.kind is LookKind.BEHIND
    assert to_pattern(look.body) == "ba"


@given(regex_asts())
def test_reverse_involution_and_shape(ast):
    ast = parse(to_pattern(ast))
    r = reverse(ast)
    assert reverse(r) == ast
    assert node_count(r) == node_count(ast)
    assert _ids(r) == _ids(ast)


@given(regex_asts(FuzzProfile(lookarounds=False, anchors=False)), st.text(alphabet="abc", max_size=6))
def test_reverse_matches_reversed_strings(ast, text):
    # exact-match languages are mirror images
    fwd = "^(?:" + to_pattern(ast) + ")$"
    bwd = "^(?:" + to_pattern(reverse(parse(to_pattern(ast)))) + ")$"
    try:
        a = bt_match(fwd, text, budget=100_000)
        b = bt_match(bwd, text[::-1], budget=100_000)
    except StepBudgetExceeded:
        return
    assert (a is None) == (b is None)


def test_desugar_exact_count_is_concat():
    d = desugar_counted(parse("a{2}"))
    assert isinstance(d, Concat)
    assert all(isinstance(x, Iterate) and not x.optional and x.body == Char("a") for x in (d.left, d.right))


def test_desugar_optional_layers_nest():
    d = desugar_counted(parse("(?:a){0,2}"))
    assert isinstance(d, Iterate) and d.optional
    assert isinstance(d.then, Iterate) and d.then.optional and d.then.then is None


def test_desugar_keeps_group_ids():
    d = desugar_counted(parse("(a){3}"))
    assert {n.gid for n in walk(d) if isinstance(n, Group)} == {1}


def test_optional_repetitions_cannot_be_empty():
    m = full_match("(?:(?:a|)(?:|b)){0,7}", "ab")
    assert m.span(0) == (0, 2)


@given(st.integers(0, 4), st.integers(0, 4), st.text(alphabet="ab", max_size=8))
def test_counted_matches_backtracker(lo, extra, text):
    pat = f"(a|b?){{{lo},{lo + extra}}}"
    expected = bt_match(pat, text)
    got = full_match(pat, text)
    assert (None if expected is None else expected.groups) == (None if got is None else got.groups)
