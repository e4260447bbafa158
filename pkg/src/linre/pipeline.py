"""Full matching: pipeline selection, oracle, main match, reconstruction, filtering."""

from __future__ import annotations

import enum
import json
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Union as TUnion

from .bytecode import Program, RegLayout
from .compiler import (
    CompileMode,
    CompileOptions,
    check_lazy_nullable_plus,
    clocked_quantifiers,
    compile_main,
    compile_oracle_pass,
    compile_reconstruction,
    compile_streaming,
    layout_of,
    streaming_eligible,
)
from .errors import EngineError, IneligibleRegexError
from .parser import parse
from .regstore import StoreKind
from .syntax import (
    CountedRep,
    Group,
    Lookaround,
    Nullability,
    QuantKind,
    Quantified,
    RegexNode,
    has_capture,
    lookarounds,
    nullability,
    walk,
)
from .vm import NullChecker, RunStats, run


class PipelineKind(enum.Enum):
    AUTO = "auto"
    ORACLE = "oracle"
    STREAMING = "streaming"


@dataclass(frozen=True)
class MatchConfig:
    pipeline: PipelineKind = PipelineKind.AUTO
    store: StoreKind = StoreKind.ARRAY
    mode: CompileMode = CompileMode.DEFAULT
    backend: Optional[str] = None


@dataclass
class PhaseStats:
    instructions: int = 0
    forks: int = 0
    slot_copies: int = 0
    aux_copies: int = 0
    threads_peak: int = 0
    runs: int = 0
    bytecode: int = 0

    def add(self, st: RunStats) -> None:
        self.instructions += st.instructions
        self.forks += st.forks
        self.slot_copies += st.slot_copies
        self.aux_copies += st.aux_copies
        self.threads_peak = max(self.threads_peak, st.threads_peak)
        self.runs += 1
        self.bytecode += st.program_size


@dataclass
class MatchStats:
    phase1: PhaseStats = field(default_factory=PhaseStats)
    phase2: PhaseStats = field(default_factory=PhaseStats)
    phase3: PhaseStats = field(default_factory=PhaseStats)
    pipeline: str = ""
    bound_violations: int = 0
    runs: list = field(default_factory=list)  # (phase, RunStats)

    def record(self, phase: int, st: RunStats) -> None:
        (self.phase1, self.phase2, self.phase3)[phase - 1].add(st)
        self.runs.append((phase, st))
        if not st.within_bound:
            self.bound_violations += 1

    @property
    def instructions(self) -> int:
        return self.phase1.instructions + self.phase2.instructions + self.phase3.instructions

    @property
    def forks(self) -> int:
        return self.phase1.forks + self.phase2.forks + self.phase3.forks

    @property
    def slot_copies(self) -> int:
        return self.phase1.slot_copies + self.phase2.slot_copies + self.phase3.slot_copies

    @property
    def aux_copies(self) -> int:
        return self.phase1.aux_copies + self.phase2.aux_copies + self.phase3.aux_copies

    @property
    def threads_peak(self) -> int:
        return max(self.phase1.threads_peak, self.phase2.threads_peak, self.phase3.threads_peak)

    @property
    def passes_phase1(self) -> int:
        return self.phase1.runs

    @property
    def passes_phase2(self) -> int:
        return self.phase2.runs

    @property
    def runs_phase3(self) -> int:
        return self.phase3.runs

    @property
    def string_passes(self) -> int:
        return self.passes_phase1 + self.passes_phase2


@dataclass(frozen=True)
class MatchResult:
    """Group ranges in code-point indices; None marks an undefined group."""

    text: str
    groups: tuple[Optional[tuple[int, int]], ...]

    def span(self, g: int = 0) -> Optional[tuple[int, int]]:
        return self.groups[g]

    def group(self, g: int = 0) -> Optional[str]:
        sp = self.groups[g]
        return None if sp is None else self.text[sp[0]:sp[1]]

    def records(self) -> list[str]:
        return [
            f"group {g}: undefined" if sp is None else f"group {g}: {sp[0]},{sp[1]}"
            for g, sp in enumerate(self.groups)
        ]

    def to_text(self) -> str:
        return "\n".join(self.records())

    def to_json(self) -> str:
        return json.dumps({str(g): (None if sp is None else [sp[0], sp[1]]) for g, sp in enumerate(self.groups)})


@dataclass
class Oracle:
    """rows[l][p] is 1 iff the body of lookaround l holds at position p."""

    rows: list[bytearray]
    length: int

    @classmethod
    def empty(cls, n_looks: int, length: int) -> "Oracle":
        return cls([bytearray(length + 1) for _ in range(n_looks + 1)], length)

    def row(self, lid: int) -> list[int]:
        return [p for p, v in enumerate(self.rows[lid]) if v]

    @property
    def n_looks(self) -> int:
        return len(self.rows) - 1


def _is_nullable_greedy_plus(n: RegexNode, memo: dict) -> bool:
    return isinstance(n, Quantified) and n.kind is QuantKind.PLUS and nullability(n.body, memo) is not Nullability.NN


class Regex:
    """A parsed regex with its programs compiled on demand."""

    def __init__(
        self,
        pattern: TUnion[str, RegexNode],
        mode: CompileMode = CompileMode.DEFAULT,
        options: Optional[CompileOptions] = None,
    ):
        if isinstance(pattern, str):
            self.pattern: Optional[str] = pattern
            self.ast = parse(pattern)
        else:
            self.pattern = None
            self.ast = pattern
        self.options = options or CompileOptions(mode=mode)
        self.mode = self.options.mode
        check_lazy_nullable_plus(self.ast)
        self.layout: RegLayout = layout_of(self.ast)
        self.looks = {lk.lid: lk for lk in lookarounds(self.ast)}
        memo: dict = {}
        self.nullable_plusses = {n.qid: n for n in walk(self.ast) if _is_nullable_greedy_plus(n, memo)}
        self.clocked = clocked_quantifiers(self.ast, self.mode)
        self.streaming_ok = streaming_eligible(self.ast)
        self._capture_memo: dict[int, bool] = {}
        self._main: Optional[Program] = None
        self._streaming: Optional[Program] = None
        self._oracle: dict[int, Program] = {}
        self._recon: dict[int, Program] = {}
        self._nulled: dict[int, Program] = {}

    @property
    def n_groups(self) -> int:
        return self.layout.n_groups

    @property
    def main(self) -> Program:
        if self._main is None:
            self._main = compile_main(self.ast, options=self.options, layout=self.layout)
        return self._main

    @property
    def streaming(self) -> Program:
        if self._streaming is None:
            self._streaming = compile_streaming(self.ast, options=self.options)
        return self._streaming

    def oracle_program(self, lid: int) -> Program:
        if lid not in self._oracle:
            self._oracle[lid] = compile_oracle_pass(self.looks[lid], self.layout, self.options)
        return self._oracle[lid]

    def recon_program(self, lid: int) -> Program:
        if lid not in self._recon:
            self._recon[lid] = compile_reconstruction(
                self.looks[lid], "lookaround", self.layout, clocked=self.clocked, options=self.options
            )
        return self._recon[lid]

    def nulled_program(self, qid: int) -> Program:
        if qid not in self._nulled:
            self._nulled[qid] = compile_reconstruction(
                self.nullable_plusses[qid], "nulled-plus", self.layout, clocked=self.clocked, options=self.options
            )
        return self._nulled[qid]

    def binds(self, node: RegexNode) -> bool:
        hit = self._capture_memo.get(id(node))
        if hit is None:
            hit = self._capture_memo[id(node)] = has_capture(node)
        return hit

    def all_programs(self) -> list[Program]:
        progs = [self.main]
        progs += [self.oracle_program(l) for l in self.looks]
        progs += [self.recon_program(l) for l, lk in self.looks.items() if lk.kind.positive]
        progs += [self.nulled_program(q) for q in self.nullable_plusses]
        return progs

    def bytecode_total(self) -> int:
        return sum(len(p) for p in self.all_programs())

    def match(self, text: str, config: Optional[MatchConfig] = None, stats: Optional[MatchStats] = None):
        return full_match(self, text, config, stats)


@lru_cache(maxsize=512)
def _compiled(pattern: str, mode: CompileMode, options: Optional[CompileOptions]) -> Regex:
    return Regex(pattern, mode, options)


def compile_regex(pattern: str, mode: CompileMode = CompileMode.DEFAULT,
                  options: Optional[CompileOptions] = None) -> Regex:
    return _compiled(pattern, mode, options)


# --------------------------------------------------------------------------
# phase 1


def build_oracle(
    regex: Regex,
    text: str,
    config: Optional[MatchConfig] = None,
    stats: Optional[MatchStats] = None,
) -> Oracle:
    """One pass per lookaround, innermost (highest id) first."""
    config = config or MatchConfig()
    oracle = Oracle.empty(regex.layout.n_looks, len(text))
    checker = None
    for lid in sorted(regex.looks, reverse=True):
        prog = regex.oracle_program(lid)
        if prog.null_bodies and checker is None:
            checker = NullChecker(regex_null_bodies(regex), text, oracle.rows)
        res = run(prog, text, oracle_rows=oracle.rows, store=StoreKind.ARRAY, null_check=checker,
                  backend=config.backend)
        if stats is not None:
            stats.record(1, res.stats)
    return oracle


def regex_null_bodies(regex: Regex) -> dict[int, RegexNode]:
    return {q: n.body for q, n in regex.nullable_plusses.items()}


# --------------------------------------------------------------------------
# filtering


@dataclass
class _Task:
    kind: str  # "look" or "plus"
    ident: int
    pos: int


def filter_captures(
    regex: Regex,
    scope: RegexNode,
    regs: list[int],
    backward: bool = False,
) -> tuple[dict[int, Optional[tuple[int, int]]], list[_Task]]:
    """Apply capture reset to one run's registers.

    Walks ``scope`` top-down (not into lookaround bodies).  A quantifier whose
    clock is older than its nearest live enclosing quantifier's clock did not
    run in that quantifier's last iteration, so everything under it is stale;
    a group is kept only if it was entered after the enclosing clock.
    Returns the surviving bindings for the scope's groups plus the
    reconstruction tasks (used positive lookarounds, nulled plusses).
    """
    lay = regex.layout
    clocked = regex.clocked
    groups: dict[int, Optional[tuple[int, int]]] = {}
    tasks: list[_Task] = []
    stack: list[tuple[RegexNode, int, bool]] = [(scope, -1, True)]
    while stack:
        node, ctx, live = stack.pop()
        if isinstance(node, (Quantified, CountedRep)):
            q = node.qid
            if clocked is not None and q not in clocked:
                stack.append((node.body, ctx, live))
                continue
            qc = regs[lay.qclock + q]
            if not live or qc < ctx:
                stack.append((node.body, ctx, False))
                continue
            if q in regex.nullable_plusses and regs[lay.plusnulled + q] != -1 and regex.binds(node.body):
                tasks.append(_Task("plus", q, regs[lay.plusnulled + q]))
            stack.append((node.body, qc, True))
        elif isinstance(node, Group):
            g = node.gid
            a, b = regs[2 * g], regs[2 * g + 1]
            if live and a != -1 and regs[lay.gclock + g] >= ctx:
                if b == -1:
                    raise EngineError(f"group {g} is half-defined")
                groups[g] = (b, a) if backward else (a, b)
            else:
                groups[g] = None
            stack.append((node.body, ctx, live))
        elif isinstance(node, Lookaround):
            if not node.kind.positive or not live:
                continue
            l = node.lid
            pos = regs[lay.lpos + l]
            if pos != -1 and regs[lay.lclock + l] >= ctx and regex.binds(node.body):
                tasks.append(_Task("look", l, pos))
        else:
            for c in reversed(node.children()):
                stack.append((c, ctx, live))
    return groups, tasks


# --------------------------------------------------------------------------
# phases 2 and 3


def select_pipeline(regex: Regex, requested: PipelineKind) -> PipelineKind:
    if requested is PipelineKind.AUTO:
        return PipelineKind.STREAMING if regex.streaming_ok else PipelineKind.ORACLE
    if requested is PipelineKind.STREAMING and not regex.streaming_ok:
        raise IneligibleRegexError("regex is not eligible for the streaming pipeline")
    return requested


def full_match(
    regex: TUnion[str, Regex],
    text: str,
    config: Optional[MatchConfig] = None,
    stats: Optional[MatchStats] = None,
) -> Optional[MatchResult]:
    """First match of ``regex`` in ``text`` with all capture groups, or None."""
    config = config or MatchConfig()
    if isinstance(regex, str):
        regex = compile_regex(regex, config.mode)
    if stats is None:
        stats = MatchStats()
    kind = select_pipeline(regex, config.pipeline)
    stats.pipeline = kind.value
    if kind is PipelineKind.STREAMING:
        oracle = Oracle.empty(regex.layout.n_looks, len(text))
        prog = regex.streaming
        checker = NullChecker(regex_null_bodies(regex), text, None) if prog.null_bodies else None
        res = run(prog, text, store=config.store, null_check=checker, backend=config.backend)
    else:
        oracle = build_oracle(regex, text, config, stats)
        prog = regex.main
        checker = NullChecker(regex_null_bodies(regex), text, oracle.rows)
        res = run(prog, text, oracle_rows=oracle.rows, store=config.store, null_check=checker,
                  backend=config.backend)
    stats.record(2, res.stats)
    if not res.matched:
        return None
    groups: list[Optional[tuple[int, int]]] = [None] * (regex.n_groups + 1)
    bound, tasks = filter_captures(regex, regex.ast, res.regs)
    for g, v in bound.items():
        groups[g] = v
    groups[0] = (res.regs[0], res.regs[1])
    _reconstruct(regex, text, oracle, tasks, groups, config, stats, checker)
    return MatchResult(text, tuple(groups))


def _reconstruct(regex, text, oracle, tasks, groups, config, stats, checker) -> None:
    """Phase 3 worklist: each task re-runs one body and may enqueue inner tasks."""
    queue = deque(tasks)
    while queue:
        t = queue.popleft()
        if t.kind == "look":
            look = regex.looks[t.ident]
            prog = regex.recon_program(t.ident)
            res = run(prog, text, t.pos, oracle_rows=oracle.rows, store=config.store, null_check=checker,
                      backend=config.backend)
            scope = look.body
            backward = look.kind.behind
        else:
            prog = regex.nulled_program(t.ident)
            res = run(prog, text, t.pos, oracle_rows=oracle.rows, store=config.store, empty_only=True,
                      null_check=checker, backend=config.backend)
            scope = regex.nullable_plusses[t.ident].body
            backward = False
        stats.record(3, res.stats)
        if not res.matched:
            raise EngineError(f"reconstruction of {t.kind} {t.ident} at {t.pos} failed")
        bound, sub = filter_captures(regex, scope, res.regs, backward)
        for g, v in bound.items():
            groups[g] = v
        queue.extend(sub)

