"""Lowering of annotated regexes to Pike VM bytecode.

Every program of one regex shares a register layout sized by the regex's
highest group, quantifier and lookaround ids, so registers written by any
run can be read back with the same offsets.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .bytecode import ANCHOR_CODES, Direction, Instr, Op, Program, RegLayout
from .desugar import DEFAULT_REPETITION_LIMIT, desugar_counted
from .errors import IneligibleRegexError, LazyNullablePlusError
from .syntax import (
    Anchor,
    AnyChar,
    Char,
    CharClass,
    Concat,
    CountedRep,
    Epsilon,
    Group,
    Iterate,
    Lookaround,
    NonCapGroup,
    Nullability,
    QuantKind,
    Quantified,
    RegexNode,
    Union,
    has_capture,
    lookarounds,
    nullability,
    reverse,
    walk,
)


class CompileMode(enum.Enum):
    DEFAULT = "default"
    LEGACY_CLEARREG = "legacy-clearreg"


@dataclass(frozen=True)
class CompileOptions:
    mode: CompileMode = CompileMode.DEFAULT
    repetition_limit: int = DEFAULT_REPETITION_LIMIT
    # test-only: e+ as e e*, the exponential construction
    expand_plus: bool = False


def layout_of(ast: RegexNode) -> RegLayout:
    g = q = l = 0
    for n in walk(ast):
        if isinstance(n, Group):
            g = max(g, n.gid)
        elif isinstance(n, (Quantified, CountedRep)):
            q = max(q, n.qid)
        elif isinstance(n, Lookaround):
            l = max(l, n.lid)
    return RegLayout(g, q, l)


def check_lazy_nullable_plus(ast: RegexNode) -> None:
    memo: dict = {}
    for n in walk(ast):
        if isinstance(n, Quantified) and n.kind is QuantKind.LAZY_PLUS:
            if nullability(n.body, memo) is not Nullability.NN:
                raise LazyNullablePlusError(n.qid)


def _scope_groups(node: RegexNode) -> list[int]:
    """Group ids in ``node`` that live in the same program (not behind a lookaround)."""
    return sorted({n.gid for n in walk(node, into_lookarounds=False) if isinstance(n, Group)})


def _needs_clock_legacy(node: RegexNode, memo: dict) -> bool:
    for n in walk(node.body if hasattr(node, "body") else node):
        if isinstance(n, Lookaround):
            return True
        if isinstance(n, Quantified) and n.kind is QuantKind.PLUS and nullability(n.body, memo) is not Nullability.NN:
            return True
    return False


def clocked_quantifiers(ast: RegexNode, mode: CompileMode) -> Optional[frozenset]:
    """Quantifiers that carry a clock; None means all of them."""
    if mode is CompileMode.DEFAULT:
        return None
    memo: dict = {}
    return frozenset(
        n.qid for n in walk(ast) if isinstance(n, (Quantified, CountedRep)) and _needs_clock_legacy(n, memo)
    )


class _Emitter:
    def __init__(
        self,
        *,
        strip_groups: bool = False,
        strip_clocks: bool = False,
        look_mode: str = "oracle",
        legacy: bool = False,
        clocked: Optional[frozenset] = None,
        null_only_plus: bool = False,
    ):
        self.code: list[Instr] = []
        self.strip_groups = strip_groups
        self.strip_clocks = strip_clocks
        self.look_mode = look_mode
        self.legacy = legacy
        self.clocked = clocked
        self.null_only_plus = null_only_plus
        self.null_bodies: dict[int, RegexNode] = {}
        self.memo: dict = {}

    @property
    def here(self) -> int:
        return len(self.code)

    def add(self, op: Op, a: int = 0, b: int = 0, obj=None, src=None) -> Instr:
        ins = Instr(op, a, b, obj, src)
        self.code.append(ins)
        return ins

    def null(self, node: RegexNode) -> Nullability:
        return nullability(node, self.memo)

    def prefix(self) -> None:
        # lazy `.*?`: try the regex first, else consume one more character
        self.add(Op.FORK, self.here + 3, self.here + 1)
        self.add(Op.CONSUME_ALL)
        self.add(Op.JUMP, self.here - 2)

    def iteration_entry(self, qid: int, body: RegexNode) -> None:
        if self.legacy and not self.strip_groups:
            for g in _scope_groups(body):
                self.add(Op.CLEAR_REG, g)
        if self.strip_clocks:
            return
        if self.clocked is None or qid in self.clocked:
            self.add(Op.SET_QUANT, qid)

    def emit(self, node: RegexNode) -> None:
        while isinstance(node, Concat):
            self.emit(node.left)
            node = node.right
        t = type(node)
        if t is Char:
            self.add(Op.CONSUME, ord(node.char), obj=node.char, src=id(node))
        elif t is AnyChar:
            self.add(Op.CONSUME_ANY, src=id(node))
        elif t is CharClass:
            self.add(Op.CONSUME_CLASS, obj=node, src=id(node))
        elif t is Epsilon:
            pass
        elif t is Union:
            self.emit_union(node)
        elif t is Group:
            if self.strip_groups:
                self.emit(node.body)
            else:
                self.add(Op.SET_REG, 2 * node.gid)
                self.emit(node.body)
                self.add(Op.SET_REG, 2 * node.gid + 1)
        elif t is NonCapGroup:
            self.emit(node.body)
        elif t is Lookaround:
            if self.look_mode == "lb":
                self.add(Op.CHECK_LB if node.kind.positive else Op.NEG_CHECK_LB, node.lid)
            else:
                self.add(Op.CHECK_ORACLE if node.kind.positive else Op.NEG_CHECK_ORACLE, node.lid)
        elif t is Anchor:
            self.add(Op.ASSERT, ANCHOR_CODES[node.kind], obj=node.kind)
        elif t is Quantified:
            if node.kind.is_plus:
                self.emit_plus(node)
            else:
                self.emit_star(node)
        elif t is Iterate:
            self.emit_iterate(node)
        elif t is CountedRep:
            raise TypeError("counted repetitions must be desugared before emission")
        else:
            raise TypeError(f"cannot compile {t.__name__}")

    def emit_union(self, node: Union) -> None:
        jumps = []
        while isinstance(node, Union):
            fork = self.add(Op.FORK, self.here + 1)
            self.emit(node.left)
            jumps.append(self.add(Op.JUMP))
            fork.b = self.here
            node = node.right
        self.emit(node)
        for j in jumps:
            j.a = self.here

    def emit_loop_body(self, qid: int, body: RegexNode) -> None:
        self.iteration_entry(qid, body)
        nullable = self.null(body) is not Nullability.NN
        if nullable:
            self.add(Op.BEGIN_LOOP)
        self.emit(body)
        if nullable:
            self.add(Op.END_LOOP)

    def emit_star(self, node: Quantified) -> None:
        l0 = self.here
        fork = self.add(Op.FORK)
        l1 = self.here
        self.emit_loop_body(node.qid, node.body)
        self.add(Op.JUMP, l0)
        if node.kind.greedy:
            fork.a, fork.b = l1, self.here
        else:
            fork.a, fork.b = self.here, l1

    def emit_plus(self, node: Quantified) -> None:
        nb = self.null(node.body)
        q = node.qid
        if nb is Nullability.NN:
            l0 = self.here
            self.iteration_entry(q, node.body)
            self.emit(node.body)
            fork = self.add(Op.FORK)
            if node.kind.greedy:
                fork.a, fork.b = l0, self.here
            else:
                fork.a, fork.b = self.here, l0
            return
        if not node.kind.greedy:
            raise LazyNullablePlusError(q)
        if self.null_only_plus:
            self.emit_null_path(q, nb, node.body)
            return
        fork0 = self.add(Op.FORK, self.here + 1)
        lnn = self.here
        self.emit_loop_body(q, node.body)
        fork1 = self.add(Op.FORK, lnn)
        fork0.b = self.here
        self.emit_null_path(q, nb, node.body)
        fork1.b = self.here

    def emit_null_path(self, q: int, nb: Nullability, body: RegexNode) -> None:
        if nb is Nullability.CDN:
            self.null_bodies[q] = body
            self.add(Op.CHECK_NULL, q)
        if not self.strip_clocks:
            self.add(Op.SET_NULL_PLUS, q)

    def emit_iterate(self, node: Iterate) -> None:
        if not node.optional:
            self.iteration_entry(node.qid, node.body)
            self.emit(node.body)
            return
        forks = []
        layer: Optional[Iterate] = node
        while layer is not None:
            forks.append((self.here, layer.greedy))
            self.add(Op.FORK)
            self.emit_loop_body(layer.qid, layer.body)
            layer = layer.then  # type: ignore[assignment]
        end = self.here
        # every skip branch leaves the whole chain
        for k, greedy in forks:
            fork = self.code[k]
            if greedy:
                fork.a, fork.b = k + 1, end
            else:
                fork.a, fork.b = end, k + 1


# --------------------------------------------------------------------------
# program builders


def _prepare(node: RegexNode, opts: CompileOptions) -> RegexNode:
    return desugar_counted(node, opts.repetition_limit, opts.expand_plus)


def compile_main(
    ast: RegexNode,
    mode: CompileMode = CompileMode.DEFAULT,
    *,
    bare: bool = False,
    options: Optional[CompileOptions] = None,
    layout: Optional[RegLayout] = None,
) -> Program:
    """Forward program for ``.*?(ast)`` with group 0 around the regex.

    ``bare`` drops both the unanchored prefix and the group 0 registers.
    """
    opts = options or CompileOptions(mode=mode)
    mode = opts.mode
    if not opts.expand_plus:
        check_lazy_nullable_plus(ast)
    clocked = clocked_quantifiers(ast, mode)
    em = _Emitter(legacy=mode is CompileMode.LEGACY_CLEARREG, clocked=clocked)
    if not bare:
        em.prefix()
        em.add(Op.SET_REG, 0)
    em.emit(_prepare(ast, opts))
    if not bare:
        em.add(Op.SET_REG, 1)
    em.add(Op.ACCEPT)
    prog = Program(
        em.code,
        Direction.FORWARD,
        [0],
        layout or layout_of(ast),
        kind="main",
        null_bodies=em.null_bodies,
        clocked_quants=clocked,
        source=ast,
    )
    prog.validate()
    return prog


def compile_oracle_pass(
    look: Lookaround,
    layout: Optional[RegLayout] = None,
    options: Optional[CompileOptions] = None,
) -> Program:
    """Unanchored, capture-free program writing the row of ``look``.

    Lookbehinds run forward over the body; lookaheads run backward over the
    reversed body.  Rows are indexed by absolute string position in both cases.
    """
    opts = options or CompileOptions()
    behind = look.kind.behind
    body = look.body if behind else reverse(look.body)
    em = _Emitter(strip_groups=True, strip_clocks=True)
    em.prefix()
    em.emit(_prepare(body, opts))
    em.add(Op.WRITE_ORACLE, look.lid)
    prog = Program(
        em.code,
        Direction.FORWARD if behind else Direction.BACKWARD,
        [0],
        layout or layout_of(look),
        kind="oracle",
        null_bodies=em.null_bodies,
        source=look,
    )
    prog.validate()
    return prog


def compile_reconstruction(
    node: RegexNode,
    kind: str = "lookaround",
    layout: Optional[RegLayout] = None,
    mode: CompileMode = CompileMode.DEFAULT,
    clocked: Optional[frozenset] = None,
    options: Optional[CompileOptions] = None,
) -> Program:
    """Anchored program re-running a body to recover its capture groups.

    ``kind="lookaround"``: ``node`` is a positive Lookaround; forward for
    lookaheads, backward over the reversed body for lookbehinds.
    ``kind="nulled-plus"``: ``node`` is a greedy nullable plus; the program is
    meant to be executed in empty-only mode at the recorded position.
    """
    opts = options or CompileOptions(mode=mode)
    legacy = opts.mode is CompileMode.LEGACY_CLEARREG
    if kind == "lookaround":
        assert isinstance(node, Lookaround)
        behind = node.kind.behind
        body = reverse(node.body) if behind else node.body
        em = _Emitter(legacy=legacy, clocked=clocked)
        direction = Direction.BACKWARD if behind else Direction.FORWARD
    elif kind == "nulled-plus":
        assert isinstance(node, Quantified) and node.kind.is_plus
        body = node.body
        em = _Emitter(legacy=legacy, clocked=clocked, null_only_plus=True)
        direction = Direction.FORWARD
    else:
        raise ValueError(f"unknown reconstruction kind {kind!r}")
    em.emit(_prepare(body, opts))
    em.add(Op.ACCEPT)
    prog = Program(
        em.code,
        direction,
        [0],
        layout or layout_of(node),
        kind="recon" if kind == "lookaround" else "nulled",
        null_bodies=em.null_bodies,
        clocked_quants=clocked,
        source=node,
    )
    prog.validate()
    return prog


def streaming_eligible(ast: RegexNode) -> bool:
    looks = lookarounds(ast)
    for lk in looks:
        if not lk.kind.behind or has_capture(lk.body):
            return False
    if looks:
        memo: dict = {}
        for n in walk(ast):
            if (
                isinstance(n, Quantified)
                and n.kind is QuantKind.PLUS
                and nullability(n.body, memo) is not Nullability.NN
                and has_capture(n.body)
            ):
                return False
    return True


def compile_streaming(
    ast: RegexNode,
    mode: CompileMode = CompileMode.DEFAULT,
    options: Optional[CompileOptions] = None,
) -> Program:
    """One program: lookbehind automata (innermost first), then the main regex."""
    opts = options or CompileOptions(mode=mode)
    if not streaming_eligible(ast):
        raise IneligibleRegexError("streaming pipeline needs captureless lookbehinds only")
    looks = lookarounds(ast)
    if not looks:
        return compile_main(ast, options=opts)
    check_lazy_nullable_plus(ast)
    clocked = clocked_quantifiers(ast, opts.mode)
    em = _Emitter(strip_groups=True, strip_clocks=True, look_mode="lb")
    entries = []
    for lk in sorted(looks, key=lambda x: -x.lid):
        entries.append(em.here)
        em.prefix()
        em.emit(_prepare(lk.body, opts))
        em.add(Op.WRITE_LB, lk.lid)
    main_start = em.here
    entries.append(main_start)
    lb_nulls = dict(em.null_bodies)
    em.strip_groups = em.strip_clocks = False
    em.legacy = opts.mode is CompileMode.LEGACY_CLEARREG
    em.clocked = clocked
    em.prefix()
    em.add(Op.SET_REG, 0)
    em.emit(_prepare(ast, opts))
    em.add(Op.SET_REG, 1)
    em.add(Op.ACCEPT)
    em.null_bodies.update(lb_nulls)
    prog = Program(
        em.code,
        Direction.FORWARD,
        entries,
        layout_of(ast),
        kind="streaming",
        main_start=main_start,
        null_bodies=em.null_bodies,
        clocked_quants=clocked,
        source=ast,
    )
    prog.validate()
    return prog
