"""Instruction set, programs and listings."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Optional

from .syntax import AnchorKind, CharClass, RegexNode, print_class


class Op(enum.IntEnum):
    CONSUME = 0
    CONSUME_CLASS = 1
    CONSUME_ANY = 2  # `.`, line terminators excluded
    CONSUME_ALL = 3  # unanchored prefix / lookbehind self-loop
    JUMP = 4
    FORK = 5
    ACCEPT = 6
    SET_REG = 7
    CLEAR_REG = 8
    BEGIN_LOOP = 9
    END_LOOP = 10
    SET_QUANT = 11
    WRITE_ORACLE = 12
    CHECK_ORACLE = 13
    NEG_CHECK_ORACLE = 14
    WRITE_LB = 15
    CHECK_LB = 16
    NEG_CHECK_LB = 17
    SET_NULL_PLUS = 18
    CHECK_NULL = 19
    ASSERT = 20


CONSUMING_OPS = frozenset({Op.CONSUME, Op.CONSUME_CLASS, Op.CONSUME_ANY, Op.CONSUME_ALL})

ANCHOR_CODES = {
    AnchorKind.BEGIN: 0,
    AnchorKind.END: 1,
    AnchorKind.WORD_BOUNDARY: 2,
    AnchorKind.NOT_WORD_BOUNDARY: 3,
}

_NAMES = {
    Op.CONSUME: "Consume",
    Op.CONSUME_CLASS: "ConsumeClass",
    Op.CONSUME_ANY: "ConsumeAny",
    Op.CONSUME_ALL: "ConsumeAny",
    Op.JUMP: "Jump",
    Op.FORK: "Fork",
    Op.ACCEPT: "Accept",
    Op.SET_REG: "SetReg",
    Op.CLEAR_REG: "ClearReg",
    Op.BEGIN_LOOP: "BeginLoop",
    Op.END_LOOP: "EndLoop",
    Op.SET_QUANT: "SetQuant",
    Op.WRITE_ORACLE: "WriteOracle",
    Op.CHECK_ORACLE: "CheckOracle",
    Op.NEG_CHECK_ORACLE: "NegCheckOracle",
    Op.WRITE_LB: "WriteLB",
    Op.CHECK_LB: "CheckLB",
    Op.NEG_CHECK_LB: "NegCheckLB",
    Op.SET_NULL_PLUS: "SetNullPlus",
    Op.CHECK_NULL: "CheckNull",
    Op.ASSERT: "AssertAnchor",
}

_CHAR_NAMES = {"\n": "\\n", "\r": "\\r", "\t": "\\t", "\v": "\\v", "\f": "\\f", " ": "' '"}


def _char_text(ch: str) -> str:
    if ch in _CHAR_NAMES:
        return _CHAR_NAMES[ch]
    if not ch.isprintable():
        return "\\u{%x}" % ord(ch)
    return ch


@dataclass
class Instr:
    op: Op
    a: int = 0
    b: int = 0
    obj: Any = None  # char, CharClass or AnchorKind
    src: Optional[int] = None  # id() of the AST leaf a Consume came from

    def text(self) -> str:
        name = _NAMES[self.op]
        op = self.op
        if op is Op.CONSUME:
            return f"{name} {_char_text(self.obj)}"
        if op is Op.CONSUME_CLASS:
            return f"{name} {print_class(self.obj)}"
        if op is Op.JUMP:
            return f"{name} {self.a}"
        if op is Op.FORK:
            return f"{name} {self.a} {self.b}"
        if op is Op.SET_REG:
            return f"{name} #{self.a // 2}:{'exit' if self.a % 2 else 'entry'}"
        if op is Op.CLEAR_REG:
            return f"{name} #{self.a}"
        if op is Op.ASSERT:
            return f"{name} {self.obj.value}"
        if op in (Op.SET_QUANT, Op.WRITE_ORACLE, Op.CHECK_ORACLE, Op.NEG_CHECK_ORACLE, Op.WRITE_LB,
                  Op.CHECK_LB, Op.NEG_CHECK_LB, Op.SET_NULL_PLUS, Op.CHECK_NULL):
            return f"{name} {self.a}"
        return name


class Direction(enum.IntEnum):
    FORWARD = 1
    BACKWARD = -1


@dataclass(frozen=True)
class RegLayout:
    """Offsets of the per-thread register vector.

    Capture positions first (2 per group), then group clocks, quantifier
    clocks, nulled-plus positions, lookaround positions and lookaround clocks.
    """

    n_groups: int  # highest group id
    n_quants: int
    n_looks: int

    @property
    def n_slots(self) -> int:
        return 2 * (self.n_groups + 1)

    @property
    def gclock(self) -> int:
        return self.n_slots

    @property
    def qclock(self) -> int:
        return self.gclock + self.n_groups + 1

    @property
    def plusnulled(self) -> int:
        return self.qclock + self.n_quants + 1

    @property
    def lpos(self) -> int:
        return self.plusnulled + self.n_quants + 1

    @property
    def lclock(self) -> int:
        return self.lpos + self.n_looks + 1

    @property
    def size(self) -> int:
        return self.lclock + self.n_looks + 1


@dataclass
class Program:
    instrs: list[Instr]
    direction: Direction = Direction.FORWARD
    entries: list[int] = field(default_factory=lambda: [0])
    layout: RegLayout = field(default_factory=lambda: RegLayout(0, 0, 0))
    kind: str = "main"
    # first label of the main automaton; threads below it belong to lookbehind automata
    main_start: int = 0
    # bodies of CDN plusses guarded by CheckNull, by quantifier id
    null_bodies: dict[int, RegexNode] = field(default_factory=dict)
    clocked_quants: Optional[frozenset] = None  # None means every quantifier
    source: Optional[RegexNode] = None
    _flat: Any = field(default=None, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.instrs)

    def listing(self) -> str:
        return "\n".join(f"{k}: {ins.text()}" for k, ins in enumerate(self.instrs))

    def lines(self) -> list[str]:
        return self.listing().splitlines()

    @property
    def records_lookarounds(self) -> bool:
        return self.kind in ("main", "recon", "nulled")

    def flat(self):
        """Parallel arrays (ops, a, b, objs) for the VM backends.

        Operands are translated to register offsets: SetReg carries the slot
        and, for entry slots, the group clock register; SetQuant/SetNullPlus
        carry the quantifier clock and nulled-position registers; CheckOracle
        carries the lookaround position register (or -1 when not recorded).
        """
        if self._flat is None:
            lay = self.layout
            record = self.records_lookarounds
            ops, aa, bb, objs = [], [], [], []
            for ins in self.instrs:
                op, a, b = ins.op, ins.a, ins.b
                if op is Op.SET_REG:
                    b = lay.gclock + a // 2 if a % 2 == 0 else -1
                elif op is Op.CLEAR_REG:
                    a = 2 * a
                elif op in (Op.SET_QUANT, Op.SET_NULL_PLUS):
                    a, b = lay.qclock + ins.a, lay.plusnulled + ins.a
                elif op is Op.CHECK_ORACLE:
                    b = lay.lpos + a if record else -1
                ops.append(int(op))
                aa.append(a)
                bb.append(b)
                objs.append(ins.obj)
            self._flat = (ops, aa, bb, objs)
        return self._flat

    def validate(self) -> None:
        n = len(self.instrs)
        for k, ins in enumerate(self.instrs):
            if ins.op is Op.JUMP and not 0 <= ins.a < n:
                raise ValueError(f"bad jump target at {k}")
            if ins.op is Op.FORK and not (0 <= ins.a < n and 0 <= ins.b < n):
                raise ValueError(f"bad fork target at {k}")
        for e in self.entries:
            if not 0 <= e < n:
                raise ValueError("bad entry point")


def class_of(ins: Instr) -> Optional[CharClass]:
    return ins.obj if ins.op is Op.CONSUME_CLASS else None
