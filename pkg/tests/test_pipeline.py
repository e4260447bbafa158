import pytest
from hypothesis import given
from hypothesis import strategies as st

from linre.backtrack import bt_match, bt_match_at
from linre.bench import bytecode_size
from linre.errors import IneligibleRegexError, LazyNullablePlusError, StepBudgetExceeded
from linre.fuzz import FuzzProfile, RegexGenerator
from linre.parser import parse
from linre.pipeline import (
    MatchConfig,
    MatchResult,
    MatchStats,
    PipelineKind,
    Regex,
    build_oracle,
    compile_regex,
    filter_captures,
    full_match,
)
from linre.regstore import StoreKind
from linre.syntax import Group, Lookaround, to_pattern, walk

from conftest import regex_asts, small_strings

WORKED = "(c)(?:a(?=a*(?<=c(a*))b))*"
BOTH = [PipelineKind.ORACLE, PipelineKind.STREAMING]


def groups(pat, text, **kw):
    m = full_match(pat, text, MatchConfig(**kw))
    return None if m is None else m.groups


def bt_groups(pat, text):
    m = bt_match(pat, text)
    return None if m is None else m.groups


def test_worked_example_example():
    m = full_match(WORKED, "caab")
    assert m.group(0) == "caa" and m.group(1) == "c"
    # ECMAScript binds the lookbehind's (a*) over "aa"; the backtracker and V8 agree
    assert m.span(2) == (1, 3)
    assert m.groups == bt_groups(WORKED, "caab")


def test_worked_example_oracle_rows():
    oracle = build_oracle(compile_regex(WORKED), "caab")
    assert oracle.row(1) == [1, 2, 3] and oracle.row(2) == [1, 2, 3]


@pytest.mark.parametrize("pat,text,expected", [
    ("(a*)b", "caabd", ((1, 4), (1, 3))),
    ("(a|a*)", "aa", ((0, 1), (0, 1))),
    ("((a)|(b))*", "ab", ((0, 2), (1, 2), None, (1, 2))),
    ("(?:(?:a|)(?:|b))*", "ab", ((0, 2),)),
    ("(?:|.)+", "a", ((0, 1),)),
    ("(?=(c))", "c", ((0, 0), (0, 1))),
    ("(()+)+", "a", ((0, 0), (0, 0), (0, 0))),
    ("(?:a|(b)|)+", "a", ((0, 1), None)),
    ("(?:(a)|(b))*", "ab", ((0, 2), None, (1, 2))),
    ("a", "", None),
    ("a", "b", None),
])
def test_semantics(pat, text, expected):
    assert bt_groups(pat, text) == expected  # the reference agrees first
    for kind in BOTH:
        if kind is PipelineKind.STREAMING and not compile_regex(pat).streaming_ok:
            continue
        assert groups(pat, text, pipeline=kind) == expected


def test_streaming_and_oracle_agree_on_lookbehind_star():
    assert groups("b(?:a(?<=ba*))*", "baaa", pipeline=PipelineKind.STREAMING) == \
        groups("b(?:a(?<=ba*))*", "baaa", pipeline=PipelineKind.ORACLE) == ((0, 4),)


def test_streaming_rejects_ineligible():
    with pytest.raises(IneligibleRegexError):
        full_match("(?=a)", "a", MatchConfig(pipeline=PipelineKind.STREAMING))


def test_no_lookarounds_zero_rows():
    oracle = build_oracle(compile_regex("a*b"), "aab")
    assert oracle.n_looks == 0


def test_negative_lookahead_row_is_positive_body():
    oracle = build_oracle(compile_regex("(?!x)"), "y")
    assert oracle.row(1) == []
    assert full_match("(?!x)", "y").span() == (0, 0)


def test_lookahead_in_star_keeps_last_use():
    assert groups("(?:(?=(.))a)*", "aab") == bt_groups("(?:(?=(.))a)*", "aab") == ((0, 2), (1, 2))


def test_match_without_lookaround_use_has_no_tasks():
    st_ = MatchStats()
    full_match("(?=(a))b|c", "c", None, st_)
    assert st_.runs_phase3 == 0


def test_nulled_plus_reconstruction_runs():
    st_ = MatchStats()
    full_match("(()+)+", "a", None, st_)
    assert st_.runs_phase3 == 2


def test_filter_nested_quantifier_clocks():
    # outer * (q1) around a left * (q2) holding (a),(b) and a right * (q3) holding (c)
    r = Regex("(?:(?:(a)|(b))*(?:(c))*)*")
    lay = r.layout
    regs = [-1] * lay.size
    for g, (s, e, clk) in {1: (0, 1, 6), 2: (1, 2, 29), 3: (2, 3, 37)}.items():
        regs[2 * g], regs[2 * g + 1], regs[lay.gclock + g] = s, e, clk
    for q, clk in {1: 20, 2: 5, 3: 35}.items():
        regs[lay.qclock + q] = clk
    bound, tasks = filter_captures(r, r.ast, regs)
    assert bound == {1: None, 2: None, 3: (2, 3)} and tasks == []


def test_filter_identity_without_quantifiers():
    r = Regex("(a)(b)")
    regs = [-1] * r.layout.size
    regs[2:6] = [0, 1, 1, 2]
    regs[r.layout.gclock + 1] = 3
    regs[r.layout.gclock + 2] = 7
    assert filter_captures(r, r.ast, regs)[0] == {1: (0, 1), 2: (1, 2)}


def test_result_records():
    m = full_match("((a)|(b))*", "ab")
    assert m.records() == ["group 0: 0,2", "group 1: 1,2", "group 2: undefined", "group 3: 1,2"]
    assert m.to_json() == '{"0": [0, 2], "1": [1, 2], "2": null, "3": [1, 2]}'


# --------------------------------------------------------------------------
# properties


def _cmp(pat, text, **kw):
    try:
        expected = bt_match(pat, text, budget=100_000)
    except StepBudgetExceeded:
        return
    try:
        got = full_match(pat, text, MatchConfig(**kw))
    except LazyNullablePlusError:
        return
    assert (None if expected is None else expected.groups) == (None if got is None else got.groups), (pat, text)


@given(regex_asts(), small_strings)
def test_differential(ast, text):
    _cmp(to_pattern(ast), text)


@given(regex_asts(), small_strings, st.sampled_from(list(StoreKind)))
def test_differential_stores(ast, text, store):
    _cmp(to_pattern(ast), text, store=store)


@given(regex_asts(FuzzProfile(lookarounds=False)), small_strings)
def test_priority_without_lookarounds(ast, text):
    _cmp(to_pattern(ast), text)


LB_ONLY = FuzzProfile(max_nodes=15)


@given(st.integers(0, 2**32 - 1), small_strings)
def test_pipeline_equivalence(seed, text):
    import random

    gen = RegexGenerator(random.Random(seed), LB_ONLY)
    pat = to_pattern(gen.regex())
    try:
        r = compile_regex(pat)
    except LazyNullablePlusError:
        return
    if not r.streaming_ok:
        return
    a = full_match(r, text, MatchConfig(pipeline=PipelineKind.STREAMING))
    b = full_match(r, text, MatchConfig(pipeline=PipelineKind.ORACLE))
    assert (a and a.groups) == (b and b.groups)


@given(regex_asts(), small_strings)
def test_oracle_brute_force(ast, text):
    try:
        r = Regex(parse(to_pattern(ast)))
    except LazyNullablePlusError:
        return
    if not r.looks:
        return
    oracle = build_oracle(r, text)
    for lid, look in r.looks.items():
        for p in range(len(text) + 1):
            try:
                want = bt_match_at(look.body, text, p, forward=not look.kind.behind, budget=100_000)
            except StepBudgetExceeded:
                continue
            assert bool(oracle.rows[lid][p]) == want, (to_pattern(ast), text, lid, p)


@given(regex_asts(), small_strings)
def test_negative_lookarounds_never_bind(ast, text):
    try:
        r = Regex(parse(to_pattern(ast)))
        m = full_match(r, text)
    except LazyNullablePlusError:
        return
    if m is None:
        return
    for look in r.looks.values():
        if not look.kind.positive:
            for g in walk(look.body):
                if isinstance(g, Group):
                    assert m.groups[g.gid] is None


@given(regex_asts(), small_strings)
def test_phase_cost_bound(ast, text):
    try:
        r = Regex(parse(to_pattern(ast)))
        st_ = MatchStats()
        full_match(r, text, None, st_)
    except LazyNullablePlusError:
        return
    assert st_.instructions <= 3 * bytecode_size(r) * (len(text) + 1)


@given(regex_asts(), small_strings)
def test_group_ranges_well_formed(ast, text):
    try:
        m = full_match(to_pattern(ast), text)
    except LazyNullablePlusError:
        return
    if m is None:
        return
    for sp in m.groups:
        if sp is not None:
            assert 0 <= sp[0] <= sp[1] <= len(text)
