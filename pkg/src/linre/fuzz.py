"""Grammar-directed differential fuzzing of the linear engine against the backtracker."""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterator, Optional

from .backtrack import bt_match
from .errors import LazyNullablePlusError, RegexError, StepBudgetExceeded
from .parser import parse
from .pipeline import MatchConfig, MatchResult, MatchStats, compile_regex, full_match
from .syntax import (
    Anchor,
    AnchorKind,
    AnyChar,
    Char,
    CharClass,
    Concat,
    CountedRep,
    Epsilon,
    Group,
    Lookaround,
    LookKind,
    NonCapGroup,
    Nullability,
    QuantKind,
    Quantified,
    RegexNode,
    Union,
    map_children,
    nullability,
    to_pattern,
    walk,
)


@dataclass
class FuzzProfile:
    max_depth: int = 6
    max_nodes: int = 25
    alphabet: str = "abc"
    outside_char: str = "d"
    lookarounds: bool = True
    anchors: bool = True
    classes: bool = True
    counted: bool = True
    max_count: int = 5
    lazy_nullable_plus_rate: float = 0.02
    max_string: int = 12
    strings_per_regex: int = 5
    step_budget: int = 200_000

    @classmethod
    def load(cls, path: str | Path) -> "FuzzProfile":
        data = json.loads(Path(path).read_text())
        unknown = set(data) - set(asdict(cls()))
        if unknown:
            raise ValueError(f"unknown profile keys: {sorted(unknown)}")
        return cls(**data)


class RegexGenerator:
    def __init__(self, rng: random.Random, profile: FuzzProfile):
        self.rng = rng
        self.p = profile
        self.budget = 0

    def regex(self) -> RegexNode:
        self.budget = self.p.max_nodes
        return self.node(0)

    def leaf(self) -> RegexNode:
        r = self.rng.random()
        a = self.p.alphabet
        if r < 0.62:
            return Char(self.rng.choice(a))
        if r < 0.72:
            return Epsilon()
        if r < 0.80:
            return AnyChar()
        if self.p.classes and r < 0.92:
            chars = self.rng.sample(a, self.rng.randint(1, min(2, len(a))))
            return CharClass(tuple((ord(c), ord(c)) for c in chars), self.rng.random() < 0.3)
        if self.p.anchors:
            return Anchor(self.rng.choice([AnchorKind.BEGIN, AnchorKind.END, AnchorKind.WORD_BOUNDARY,
                                           AnchorKind.NOT_WORD_BOUNDARY]))
        return Char(self.rng.choice(a))

    def node(self, depth: int) -> RegexNode:
        self.budget -= 1
        if depth >= self.p.max_depth or self.budget <= 0:
            return self.leaf()
        rng = self.rng
        r = rng.random()
        if r < 0.22:
            return self.leaf()
        if r < 0.42:
            return Concat(self.node(depth + 1), self.node(depth + 1))
        if r < 0.54:
            # unions with empty branches make nullable bodies common
            right = Epsilon() if rng.random() < 0.3 else self.node(depth + 1)
            return Union(self.node(depth + 1), right)
        if r < 0.64:
            return Group(self.node(depth + 1))
        if r < 0.68:
            return NonCapGroup(self.node(depth + 1))
        if r < 0.86:
            return self.quantifier(depth)
        if self.p.lookarounds and r < 0.97:
            kind = rng.choice(list(LookKind))
            return Lookaround(kind, self.node(depth + 1))
        if self.p.anchors:
            return Anchor(rng.choice([AnchorKind.BEGIN, AnchorKind.END]))
        return self.leaf()

    def quantifier(self, depth: int) -> RegexNode:
        rng = self.rng
        body = self.node(depth + 1)
        if isinstance(body, Anchor):
            body = NonCapGroup(body)
        kinds = ["*", "*?", "+", "+?", "?", "??"]
        if self.p.counted:
            kinds += ["{}", "{}"]
        k = rng.choice(kinds)
        if k == "+?" and nullability(body) is not Nullability.NN and rng.random() >= self.p.lazy_nullable_plus_rate:
            k = "+"
        if k in ("*", "*?", "+", "+?"):
            return Quantified(body, QuantKind(k))
        if k in ("?", "??"):
            return CountedRep(body, 0, 1, k == "?")
        lo = rng.randint(0, self.p.max_count)
        hi = rng.choice([lo, None, rng.randint(lo, self.p.max_count)])
        return CountedRep(body, lo, hi, rng.random() < 0.8)

    def string(self, pattern_chars: str) -> str:
        alphabet = "".join(sorted(set(pattern_chars))) + self.p.outside_char
        n = self.rng.randint(0, self.p.max_string)
        return "".join(self.rng.choice(alphabet) for _ in range(n))


def gen_regex(seed: int, profile: Optional[FuzzProfile] = None) -> str:
    """Deterministic pattern for ``seed``."""
    gen = RegexGenerator(random.Random(seed), profile or FuzzProfile())
    return to_pattern(parse(to_pattern(gen.regex())))


def literal_chars(ast: RegexNode, alphabet: str) -> str:
    chars = {n.char for n in walk(ast) if isinstance(n, Char)}
    return "".join(sorted(chars)) or alphabet


# --------------------------------------------------------------------------
# comparison


Engine = Callable[[str, str], Optional[MatchResult]]


def linear_engine(pattern: str, text: str) -> Optional[MatchResult]:
    return full_match(compile_regex(pattern), text)


@dataclass
class CaseOutcome:
    status: str  # "ok", "mismatch", "skip", "rejected"
    expected: Optional[MatchResult] = None
    actual: Optional[MatchResult] = None
    detail: str = ""


def compare_case(pattern: str, text: str, engine: Engine = linear_engine, budget: int = 200_000) -> CaseOutcome:
    try:
        expected = bt_match(pattern, text, budget=budget)
    except StepBudgetExceeded:
        return CaseOutcome("skip")
    try:
        actual = engine(pattern, text)
    except LazyNullablePlusError:
        return CaseOutcome("rejected")
    except RegexError as e:
        return CaseOutcome("mismatch", expected, None, f"engine error: {e}")
    if _groups(expected) != _groups(actual):
        return CaseOutcome("mismatch", expected, actual)
    return CaseOutcome("ok", expected, actual)


def _groups(r: Optional[MatchResult]):
    return None if r is None else r.groups


# --------------------------------------------------------------------------
# shrinking


def _subtrees(node: RegexNode) -> Iterator[tuple[RegexNode, RegexNode]]:
    """Yield (path-rebuilt candidate) trees with one subtree simplified."""
    children = node.children()
    for k, ch in enumerate(children):
        yield ch  # replace node by one child
    if not isinstance(node, Epsilon):
        yield Epsilon()
    for k, ch in enumerate(children):
        for smaller in _subtrees(ch):
            idx = [0]

            def swap(c, k=k, smaller=smaller):
                j = idx[0]
                idx[0] += 1
                return smaller if j == k else c
            yield map_children(node, swap)


def _still_fails(pattern: str, text: str, engine: Engine, budget: int) -> bool:
    try:
        out = compare_case(pattern, text, engine, budget)
    except RegexError:
        return False
    return out.status == "mismatch"


def shrink(pattern: str, text: str, engine: Engine = linear_engine, budget: int = 200_000,
           max_rounds: int = 200) -> tuple[str, str]:
    """Greedy AST-deletion and string-truncation shrinking of a mismatch."""
    for _ in range(max_rounds):
        progress = False
        for i in range(len(text)):
            cand = text[:i] + text[i + 1:]
            if _still_fails(pattern, cand, engine, budget):
                text = cand
                progress = True
                break
        ast = parse(pattern)
        for smaller in _subtrees(ast):
            try:
                cand = to_pattern(parse(to_pattern(smaller)))
            except RegexError:
                continue
            if len(cand) < len(pattern) and _still_fails(cand, text, engine, budget):
                pattern = cand
                progress = True
                break
        if not progress:
            break
    return pattern, text


# --------------------------------------------------------------------------
# campaign


@dataclass
class FuzzReport:
    cases: int = 0
    compared: int = 0
    skipped: int = 0
    rejected: int = 0
    mismatches: int = 0
    regexes: int = 0
    reproducers: list[tuple[str, str]] = field(default_factory=list)
    bound_violations: int = 0

    @property
    def skip_rate(self) -> float:
        return self.skipped / self.cases if self.cases else 0.0

    def summary(self) -> str:
        return (f"cases={self.cases} compared={self.compared} mismatches={self.mismatches} "
                f"skipped={self.skipped} ({self.skip_rate:.2%}) rejected={self.rejected} regexes={self.regexes}")


def fuzz_cases(n: int, seed: int, profile: FuzzProfile) -> Iterator[tuple[str, str]]:
    rng = random.Random(seed)
    gen = RegexGenerator(rng, profile)
    produced = 0
    while produced < n:
        ast = parse(to_pattern(gen.regex()))
        pattern = to_pattern(ast)
        chars = literal_chars(ast, profile.alphabet)
        for _ in range(profile.strings_per_regex):
            if produced >= n:
                break
            yield pattern, gen.string(chars)
            produced += 1


def fuzz_campaign(
    n: int,
    seed: int = 0,
    profile: Optional[FuzzProfile] = None,
    engine: Optional[Engine] = None,
    out_dir: Optional[str | Path] = None,
    max_reproducers: int = 20,
    check_bounds: bool = True,
    progress: Optional[Callable[[FuzzReport], None]] = None,
) -> FuzzReport:
    """Run ``n`` cases; mismatches are shrunk and optionally written to ``out_dir``."""
    profile = profile or FuzzProfile()
    report = FuzzReport()
    last_pattern = None
    for pattern, text in fuzz_cases(n, seed, profile):
        report.cases += 1
        if pattern != last_pattern:
            report.regexes += 1
            last_pattern = pattern
        if engine is None:
            stats = MatchStats()

            def eng(p, t, stats=stats):
                return full_match(compile_regex(p), t, None, stats)
        else:
            stats = None
            eng = engine
        out = compare_case(pattern, text, eng, profile.step_budget)
        if stats is not None and check_bounds:
            report.bound_violations += stats.bound_violations
        if out.status == "skip":
            report.skipped += 1
        elif out.status == "rejected":
            report.rejected += 1
        else:
            report.compared += 1
            if out.status == "mismatch":
                report.mismatches += 1
                if len(report.reproducers) < max_reproducers:
                    small = shrink(pattern, text, engine or linear_engine, profile.step_budget)
                    report.reproducers.append(small)
                    if out_dir is not None:
                        write_reproducer(out_dir, len(report.reproducers), *small)
        if progress is not None and report.cases % 10_000 == 0:
            progress(report)
    return report


def write_reproducer(out_dir: str | Path, index: int, pattern: str, text: str) -> Path:
    d = Path(out_dir)
    d.mkdir(parents=True, exist_ok=True)
    path = d / f"repro_{index:04d}.txt"
    path.write_text(f"{pattern}\n{text}\n")
    return path
