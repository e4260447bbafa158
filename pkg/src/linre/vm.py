"""Pike VM front door: backend selection, program preparation, run()."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import _vmpy
from .bytecode import Op, Program
from .errors import EngineError, MissingOracleError
from .regstore import StoreKind
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
    Quantified,
    RegexNode,
    Union,
    anchor_holds,
)

_core = None
if os.environ.get("LINRE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _vmcore as _core  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        _core = None

CYTHON_AVAILABLE = _core is not None
_BACKENDS: dict[str, Callable] = {"python": _vmpy.execute}
if _core is not None:
    _BACKENDS["cython"] = _core.execute
DEFAULT_BACKEND = "cython" if CYTHON_AVAILABLE else "python"

_STORE_CODES = {StoreKind.ARRAY: 0, StoreKind.LIST: 1, StoreKind.TREE: 2}


def available_backends() -> list[str]:
    return list(_BACKENDS)


@dataclass
class RunStats:
    instructions: int = 0
    forks: int = 0
    slot_copies: int = 0
    aux_copies: int = 0
    threads_peak: int = 0
    steps: int = 0
    program_size: int = 0
    text_length: int = 0
    left_sensitive: int = 0

    @property
    def bound(self) -> int:
        return self.program_size * (self.text_length + 1)

    @property
    def flag_bound(self) -> int:
        """One execution per (label, left) state per position."""
        return (self.program_size + self.left_sensitive) * (self.text_length + 1)

    @property
    def within_bound(self) -> bool:
        return self.instructions <= self.bound


@dataclass
class RunResult:
    matched: bool
    regs: Optional[list[int]]
    end: int
    stats: RunStats
    profile: Optional[list[int]] = None


@dataclass
class _Prepared:
    ops: list
    aa: list
    bb: list
    objs: list
    sensitive: bytes
    needs_oracle: bool
    n_sensitive: int
    n_lb: int
    lb_kinds: dict = field(default_factory=dict)


def _left_sensitive(prog: Program) -> bytes:
    """Labels from which an EndLoop is reachable before any consume or BeginLoop.

    Only at those labels can the `left` flag change a thread's future; elsewhere
    (label, true) and (label, false) are the same state for deduplication.
    """
    n = len(prog.instrs)
    preds: list[list[int]] = [[] for _ in range(n)]
    for k, ins in enumerate(prog.instrs):
        op = ins.op
        if op is Op.JUMP:
            succ = (ins.a,)
        elif op is Op.FORK:
            succ = (ins.a, ins.b)
        elif op in (Op.CONSUME, Op.CONSUME_ANY, Op.CONSUME_ALL, Op.CONSUME_CLASS, Op.BEGIN_LOOP,
                    Op.ACCEPT, Op.WRITE_ORACLE, Op.WRITE_LB, Op.END_LOOP):
            succ = ()
        else:
            succ = (k + 1,) if k + 1 < n else ()
        for s in succ:
            preds[s].append(k)
    mark = bytearray(n)
    stack = [k for k, ins in enumerate(prog.instrs) if ins.op is Op.END_LOOP]
    for k in stack:
        mark[k] = 1
    while stack:
        k = stack.pop()
        for p in preds[k]:
            if not mark[p]:
                mark[p] = 1
                stack.append(p)
    return bytes(mark)


def prepare(prog: Program) -> _Prepared:
    cached = getattr(prog, "_prepared", None)
    if cached is not None:
        return cached
    ops, aa, bb, objs = prog.flat()
    size = prog.layout.size
    for k, op in enumerate(ops):
        if op in (Op.SET_REG, Op.SET_QUANT, Op.SET_NULL_PLUS) and not (0 <= aa[k] < size and bb[k] < size):
            raise EngineError(f"register index out of range at {k}")
        if op == Op.CLEAR_REG and not 0 <= aa[k] + 1 < size:
            raise EngineError(f"register index out of range at {k}")
    needs_oracle = any(op in (Op.CHECK_ORACLE, Op.NEG_CHECK_ORACLE, Op.WRITE_ORACLE) for op in ops)
    n_lb = prog.layout.n_looks if any(op in (Op.WRITE_LB, Op.CHECK_LB, Op.NEG_CHECK_LB) for op in ops) else 0
    sens = _left_sensitive(prog)
    p = _Prepared(ops, aa, bb, objs, sens, needs_oracle, sum(sens), n_lb)
    prog._prepared = p  # type: ignore[attr-defined]
    return p


# --------------------------------------------------------------------------
# nullable(q, i)


def nullable_at_node(node: RegexNode, text: str, i: int, look: Callable[[int], bool]) -> bool:
    """Can ``node`` match the empty string at position ``i``?"""
    t = type(node)
    if t in (Char, AnyChar, CharClass):
        return False
    if t is Epsilon:
        return True
    if t is Concat:
        return nullable_at_node(node.left, text, i, look) and nullable_at_node(node.right, text, i, look)
    if t is Union:
        return nullable_at_node(node.left, text, i, look) or nullable_at_node(node.right, text, i, look)
    if t is Quantified:
        return True if not node.kind.is_plus else nullable_at_node(node.body, text, i, look)
    if t is CountedRep:
        return node.min == 0 or nullable_at_node(node.body, text, i, look)
    if t is Iterate:
        return node.optional or nullable_at_node(node.body, text, i, look)
    if t in (Group, NonCapGroup):
        return nullable_at_node(node.body, text, i, look)
    if t is Lookaround:
        return look(node.lid) == node.kind.positive
    if t is Anchor:
        return anchor_holds(node.kind, text, i)
    raise TypeError(f"not a regex node: {node!r}")


class NullChecker:
    """Memoized nullable(q, i) over one input string."""

    def __init__(self, bodies: dict[int, RegexNode], text: str, rows=None):
        self.bodies = bodies
        self.text = text
        self.rows = rows
        self.memo: dict[tuple[int, int], bool] = {}
        self.evaluations = 0

    def __call__(self, q: int, i: int, lb=None) -> bool:
        key = (q, i)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        self.evaluations += 1
        if lb is not None:
            look = lambda lid: bool(lb[lid])  # noqa: E731
        elif self.rows is not None:
            rows = self.rows
            look = lambda lid: bool(rows[lid][i])  # noqa: E731
        else:
            def look(lid):
                raise MissingOracleError(f"nullable check needs lookaround {lid}")
        res = nullable_at_node(self.bodies[q], self.text, i, look)
        self.memo[key] = res
        return res


def run(
    prog: Program,
    text: str,
    start: Optional[int] = None,
    *,
    oracle_rows=None,
    store: StoreKind | str = StoreKind.ARRAY,
    empty_only: bool = False,
    null_check: Optional[Callable] = None,
    profile: bool = False,
    backend: Optional[str] = None,
) -> RunResult:
    """Execute ``prog`` on ``text`` from ``start`` (default: the direction's origin)."""
    p = prepare(prog)
    if p.needs_oracle and oracle_rows is None:
        raise MissingOracleError("program reads or writes the oracle but none was given")
    if start is None:
        start = 0 if prog.direction > 0 else len(text)
    if null_check is None and prog.null_bodies:
        null_check = NullChecker(prog.null_bodies, text, oracle_rows)
    lay = prog.layout
    prof = [0] * len(p.ops) if profile else None
    fn = _BACKENDS[backend or DEFAULT_BACKEND]
    matched, regs, end, instr, forks, scopies, acopies, peak, steps = fn(
        p.ops, p.aa, p.bb, p.objs, p.sensitive, prog.entries, prog.main_start, int(prog.direction),
        text, start, oracle_rows, p.n_lb, _STORE_CODES[StoreKind(store)], lay.size, lay.n_slots,
        lay.n_looks + 1, empty_only, null_check, prof,
    )
    stats = RunStats(instr, forks, scopies, acopies, peak, steps, len(p.ops), len(text), p.n_sensitive)
    return RunResult(matched, regs, end, stats, prof)


def extract_groups(regs: list[int], n_groups: int, backward: bool = False) -> list[Optional[tuple[int, int]]]:
    """Capture ranges from a register vector; backward runs store (end, start)."""
    out: list[Optional[tuple[int, int]]] = []
    for g in range(n_groups + 1):
        a, b = regs[2 * g], regs[2 * g + 1]
        if a == -1 and b == -1:
            out.append(None)
            continue
        if a == -1 or b == -1:
            raise EngineError(f"group {g} is half-defined")
        out.append((b, a) if backward else (a, b))
    return out
