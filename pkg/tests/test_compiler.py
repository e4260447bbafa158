import pytest
from hypothesis import given

from linre.bytecode import Direction, Op
from linre.compiler import CompileMode, CompileOptions, compile_main, streaming_eligible
from linre.desugar import desugar_counted
from linre.errors import LazyNullablePlusError
from linre.fuzz import FuzzProfile
from linre.parser import parse
from linre.pipeline import Regex
from linre.syntax import Group, Quantified, CountedRep, node_count, to_pattern, walk

from conftest import regex_asts

WORKED = "(c)(?:a(?=a*(?<=c(a*))b))*"


def listing(prog):
    return [line.split(": ", 1)[1] for line in prog.lines()]


def test_tagged_nfa_listing():
    assert listing(compile_main(parse("(a|.)b"), bare=True)) == [
        "SetReg #1:entry", "Fork 2 4", "Consume a", "Jump 5", "ConsumeAny", "SetReg #1:exit", "Consume b", "Accept",
    ]


def test_listing_is_numbered():
    lines = compile_main(parse("ab")).lines()
    assert lines[:4] == ["0: Fork 3 1", "1: ConsumeAny", "2: Jump 0", "3: SetReg #0:entry"]


def test_inner_lookbehind_oracle_listing():
    prog = Regex(WORKED).oracle_program(2)
    assert prog.direction is Direction.FORWARD
    assert listing(prog) == [
        "Fork 3 1", "ConsumeAny", "Jump 0", "Consume c", "Fork 5 7", "Consume a", "Jump 4", "WriteOracle 2",
    ]


def test_outer_lookahead_oracle_listing():
    prog = Regex(WORKED).oracle_program(1)
    assert prog.direction is Direction.BACKWARD
    lines = listing(prog)
    assert lines[:3] == ["Fork 3 1", "ConsumeAny", "Jump 0"]
    assert "CheckOracle 2" in lines and lines[-1] == "WriteOracle 1"
    assert not any(l.startswith(("SetReg", "SetQuant")) for l in lines)


def test_lookahead_reconstruction_listing():
    assert listing(Regex(WORKED).recon_program(1)) == [
        "Fork 1 4", "SetQuant 2", "Consume a", "Jump 0", "CheckOracle 2", "Consume b", "Accept",
    ]


def test_lookbehind_reconstruction_shape():
    # eight instructions ending "Consume c; Accept", run backward over `(a*)`
    prog = Regex(WORKED).recon_program(2)
    lines = listing(prog)
    assert prog.direction is Direction.BACKWARD
    assert len(lines) == 8 and lines[-2:] == ["Consume c", "Accept"]
    assert lines[0] == "SetReg #2:entry" and "SetReg #2:exit" in lines


def test_single_char_lookbehind_oracle():
    assert listing(Regex("(?<=a)").oracle_program(1)) == ["Fork 3 1", "ConsumeAny", "Jump 0", "Consume a", "WriteOracle 1"]


def test_alternation_prefers_left():
    lines = listing(compile_main(parse("a|b"), bare=True))
    fork = next(l for l in lines if l.startswith("Fork"))
    _, hi, lo = fork.split()
    assert lines[int(hi)] == "Consume a" and lines[int(lo)] == "Consume b"


@pytest.mark.parametrize("pat,enters_first", [("a*", True), ("a*?", False)])
def test_star_fork_priority(pat, enters_first):
    lines = listing(compile_main(parse(pat), bare=True))
    k = next(i for i, l in enumerate(lines) if l.startswith("Fork"))
    _, hi, _ = lines[k].split()
    body_first = lines[int(hi)] in ("SetQuant 1", "Consume a")
    assert body_first is enters_first


def test_nullable_body_wrapped_in_loop_markers():
    lines = listing(compile_main(parse("(?:a|)*"), bare=True))
    assert "BeginLoop" in lines and "EndLoop" in lines
    assert "BeginLoop" not in listing(compile_main(parse("(?:a|b)*"), bare=True))


def test_cdn_plus_emits_null_path():
    lines = listing(compile_main(parse("(?:a|^)+"), bare=True))
    assert "SetNullPlus 1" in lines and "CheckNull 1" in lines
    cin = listing(compile_main(parse("(?:a|)+"), bare=True))
    assert "SetNullPlus 1" in cin and "CheckNull 1" not in cin


def test_lazy_nullable_plus_rejected():
    with pytest.raises(LazyNullablePlusError):
        compile_main(parse("(?:a|)+?"))
    compile_main(parse("(?:a)+?"))


def test_lookaround_is_one_instruction_in_main():
    lines = listing(compile_main(parse("a(?=bc)(?!d)"), bare=True))
    assert "CheckOracle 1" in lines and "NegCheckOracle 2" in lines
    assert "Consume b" not in lines


def nested_star(n):
    r = "a"
    for _ in range(n):
        r = f"({r})*"
    return r


def test_nested_star_growth_default_vs_legacy():
    d = [len(compile_main(parse(nested_star(n)))) for n in (10, 20, 40)]
    lg = [len(compile_main(parse(nested_star(n)), CompileMode.LEGACY_CLEARREG)) for n in (10, 20, 40)]
    assert d[2] - d[1] == 2 * (d[1] - d[0])  # exactly linear
    assert (lg[2] - lg[1]) > 3 * (lg[1] - lg[0])  # second difference grows: quadratic


def test_streaming_program_layout():
    r = Regex("abc(?<=ab(?<=b)c)")
    assert r.streaming_ok
    prog = r.streaming
    lines = listing(prog)
    # innermost lookbehind automaton first, then the parent, then the main expression
    assert prog.entries == [0, 5, 13] and prog.main_start == 13
    assert lines.index("WriteLB 2") < lines.index("CheckLB 2") < lines.index("WriteLB 1") < lines.index("CheckLB 1")
    assert lines[lines.index("WriteLB 2") - 1] == "Consume b"


def test_streaming_without_lookbehinds_is_main():
    r = Regex("(a)b")
    assert r.streaming.entries == [0] and listing(r.streaming) == listing(r.main)


@pytest.mark.parametrize("pat,ok", [
    ("b(?:a(?<=ba*))*", True),
    ("(?<=(a))b", False),
    ("(?=a)", False),
    ("(?<=a)(?:(b)|)+", False),
    ("(?<=a)(?:b|)+", True),
    ("(?:(b)|^)+", True),
])
def test_streaming_eligibility(pat, ok):
    assert streaming_eligible(parse(pat)) is ok


def _enclosing_quantifier_counts(ast):
    total = 0

    def go(node, depth):
        nonlocal total
        if isinstance(node, Group):
            total += depth
        inc = isinstance(node, (Quantified, CountedRep))
        for ch in node.children():
            go(ch, depth + inc)
    go(ast, 0)
    return total


NO_COUNTED = FuzzProfile(counted=False, lookarounds=False)


@given(regex_asts(NO_COUNTED))
def test_legacy_clearreg_count(ast):
    ast = parse(to_pattern(ast))
    try:
        prog = compile_main(ast, CompileMode.LEGACY_CLEARREG)
    except LazyNullablePlusError:
        return
    n_clear = sum(1 for i in prog.instrs if i.op is Op.CLEAR_REG)
    assert n_clear == _enclosing_quantifier_counts(ast)


@given(regex_asts())
def test_linear_size(ast):
    ast = parse(to_pattern(ast))
    try:
        prog = compile_main(ast)
    except LazyNullablePlusError:
        return
    assert len(prog) <= 12 * node_count(desugar_counted(ast))


@given(regex_asts(FuzzProfile(counted=False)))
def test_single_body_copy(ast):
    ast = parse(to_pattern(ast))
    try:
        prog = compile_main(ast, bare=True)
    except LazyNullablePlusError:
        return
    srcs = [i.src for i in prog.instrs if i.op in (Op.CONSUME, Op.CONSUME_ANY, Op.CONSUME_CLASS)]
    assert len(srcs) == len(set(srcs))


def test_expand_plus_is_exponential():
    r = "a"
    for _ in range(14):
        r = f"(?:{r})+"
    big = Regex(r, options=CompileOptions(expand_plus=True)).main
    small = Regex(r).main
    assert len(big) > 10_000 and len(small) < 100


@given(regex_asts())
def test_jump_targets_valid(ast):
    try:
        r = Regex(parse(to_pattern(ast)))
        progs = r.all_programs()
    except LazyNullablePlusError:
        return
    for p in progs:
        p.validate()
