"""Regex AST, pattern printing, nullability analysis and reversal.

Nodes are immutable.  Identifiers are assigned by the parser in a preorder
walk: capture groups from 1 (0 is the whole match), lookarounds from 1,
quantifiers from 1.  Two nodes hidden from the pattern syntax, ``Iterate``
and the optional-layer form of it, only appear after counted repetitions are
desugared.
"""

from __future__ import annotations

import enum
import sys
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

# Binary Concat/Union chains nest one level per atom.
if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)

LINE_TERMINATORS = frozenset("\n\r\u2028\u2029")
MAX_CODE_POINT = 0x10FFFF


class Nullability(enum.IntEnum):
    """Ordered so that ``max``/``min`` follow NN > CDN > CIN."""

    CIN = 0
    CDN = 1
    NN = 2


class QuantKind(enum.Enum):
    STAR = "*"
    LAZY_STAR = "*?"
    PLUS = "+"
    LAZY_PLUS = "+?"

    @property
    def greedy(self) -> bool:
        return self in (QuantKind.STAR, QuantKind.PLUS)

    @property
    def is_plus(self) -> bool:
        return self in (QuantKind.PLUS, QuantKind.LAZY_PLUS)


class LookKind(enum.Enum):
    AHEAD = "?="
    NEG_AHEAD = "?!"
    BEHIND = "?<="
    NEG_BEHIND = "?<!"

    @property
    def positive(self) -> bool:
        return self in (LookKind.AHEAD, LookKind.BEHIND)

    @property
    def behind(self) -> bool:
        return self in (LookKind.BEHIND, LookKind.NEG_BEHIND)


class AnchorKind(enum.Enum):
    BEGIN = "^"
    END = "$"
    WORD_BOUNDARY = "\\b"
    NOT_WORD_BOUNDARY = "\\B"


def is_word_char(ch: Optional[str]) -> bool:
    return ch is not None and (ch.isascii() and (ch.isalnum() or ch == "_"))


def anchor_holds(kind: AnchorKind, text: str, pos: int) -> bool:
    if kind is AnchorKind.BEGIN:
        return pos == 0
    if kind is AnchorKind.END:
        return pos == len(text)
    before = text[pos - 1] if pos > 0 else None
    after = text[pos] if pos < len(text) else None
    boundary = is_word_char(before) != is_word_char(after)
    return boundary if kind is AnchorKind.WORD_BOUNDARY else not boundary


class RegexNode:
    """Base class of all AST nodes."""

    __slots__ = ()

    def children(self) -> tuple["RegexNode", ...]:
        return ()


@dataclass(frozen=True)
class Char(RegexNode):
    char: str


@dataclass(frozen=True)
class AnyChar(RegexNode):
    """``.``: any code point except a line terminator."""


@dataclass(frozen=True)
class CharClass(RegexNode):
    ranges: tuple[tuple[int, int], ...]
    negated: bool = False
    _lows: tuple[int, ...] = field(default=(), init=False, repr=False, compare=False)
    _ascii: frozenset = field(default=frozenset(), init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        ranges = normalize_ranges(self.ranges)
        object.__setattr__(self, "ranges", ranges)
        object.__setattr__(self, "_lows", tuple(lo for lo, _ in ranges))
        ascii_members = frozenset(chr(c) for c in range(128) if self._contains(c) != self.negated)
        object.__setattr__(self, "_ascii", ascii_members)

    def _contains(self, cp: int) -> bool:
        k = bisect_right(self._lows, cp) - 1
        return k >= 0 and cp <= self.ranges[k][1]

    def matches(self, ch: str) -> bool:
        if ch < "\x80":
            return ch in self._ascii
        return self._contains(ord(ch)) != self.negated


@dataclass(frozen=True)
class Epsilon(RegexNode):
    pass


@dataclass(frozen=True)
class Concat(RegexNode):
    left: RegexNode
    right: RegexNode

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Union(RegexNode):
    left: RegexNode
    right: RegexNode

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Quantified(RegexNode):
    body: RegexNode
    kind: QuantKind
    qid: int = 0

    def children(self):
        return (self.body,)


@dataclass(frozen=True)
class CountedRep(RegexNode):
    body: RegexNode
    min: int
    max: Optional[int]
    greedy: bool = True
    qid: int = 0

    def children(self):
        return (self.body,)


@dataclass(frozen=True)
class Group(RegexNode):
    body: RegexNode
    gid: int = 0

    def children(self):
        return (self.body,)


@dataclass(frozen=True)
class NonCapGroup(RegexNode):
    body: RegexNode

    def children(self):
        return (self.body,)


@dataclass(frozen=True)
class Lookaround(RegexNode):
    kind: LookKind
    body: RegexNode
    lid: int = 0

    def children(self):
        return (self.body,)


@dataclass(frozen=True)
class Anchor(RegexNode):
    kind: AnchorKind


@dataclass(frozen=True)
class Iterate(RegexNode):
    """One iteration of a desugared counted repetition.

    Mandatory iterations just reset the repetition's clock.  Optional ones may
    be skipped, may not match the empty string, and carry the remaining
    optional layers in ``then``.
    """

    body: RegexNode
    qid: int
    optional: bool = False
    greedy: bool = True
    then: Optional[RegexNode] = None

    def children(self):
        return (self.body,) if self.then is None else (self.body, self.then)


QUANTIFIERS = (Quantified, CountedRep, Iterate)


def normalize_ranges(ranges) -> tuple[tuple[int, int], ...]:
    out: list[list[int]] = []
    for lo, hi in sorted(ranges):
        if out and lo <= out[-1][1] + 1:
            out[-1][1] = max(out[-1][1], hi)
        else:
            out.append([lo, hi])
    return tuple((lo, hi) for lo, hi in out)


def complement_ranges(ranges) -> tuple[tuple[int, int], ...]:
    out = []
    nxt = 0
    for lo, hi in normalize_ranges(ranges):
        if lo > nxt:
            out.append((nxt, lo - 1))
        nxt = hi + 1
    if nxt <= MAX_CODE_POINT:
        out.append((nxt, MAX_CODE_POINT))
    return tuple(out)


DIGIT_RANGES = ((0x30, 0x39),)
WORD_RANGES = normalize_ranges([(0x30, 0x39), (0x41, 0x5A), (0x5F, 0x5F), (0x61, 0x7A)])
SPACE_RANGES = normalize_ranges(
    [(0x09, 0x0D), (0x20, 0x20), (0xA0, 0xA0), (0x1680, 0x1680), (0x2000, 0x200A),
     (0x2028, 0x2029), (0x202F, 0x202F), (0x205F, 0x205F), (0x3000, 0x3000), (0xFEFF, 0xFEFF)]
)


# --------------------------------------------------------------------------
# traversal helpers


def walk(node: RegexNode, *, into_lookarounds: bool = True) -> Iterator[RegexNode]:
    """Preorder traversal (iterative, so arbitrarily deep trees are fine)."""
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        if isinstance(n, Lookaround) and not into_lookarounds:
            continue
        stack.extend(reversed(n.children()))


def node_count(node: RegexNode) -> int:
    return sum(1 for _ in walk(node))


def has_capture(node: RegexNode) -> bool:
    """True if a successful match of ``node`` can bind a capture group."""
    stack = [node]
    while stack:
        n = stack.pop()
        if isinstance(n, Group):
            return True
        if isinstance(n, Lookaround) and not n.kind.positive:
            continue
        stack.extend(n.children())
    return False


def group_ids(node: RegexNode) -> list[int]:
    return [n.gid for n in walk(node) if isinstance(n, Group)]


def lookarounds(node: RegexNode) -> list[Lookaround]:
    seen: dict[int, Lookaround] = {}
    for n in walk(node):
        if isinstance(n, Lookaround) and n.lid not in seen:
            seen[n.lid] = n
    return [seen[k] for k in sorted(seen)]


# --------------------------------------------------------------------------
# nullability


def nullability(node: RegexNode, memo: Optional[dict] = None) -> Nullability:
    """Syntax-directed nullability classification (NN > CDN > CIN)."""
    if memo is None:
        memo = {}
    key = id(node)
    hit = memo.get(key)
    if hit is not None:
        return hit[1]
    if isinstance(node, (Char, AnyChar, CharClass)):
        res = Nullability.NN
    elif isinstance(node, Epsilon):
        res = Nullability.CIN
    elif isinstance(node, Concat):
        res = max(nullability(node.left, memo), nullability(node.right, memo))
    elif isinstance(node, Union):
        res = min(nullability(node.left, memo), nullability(node.right, memo))
    elif isinstance(node, Quantified):
        res = nullability(node.body, memo) if node.kind.is_plus else Nullability.CIN
    elif isinstance(node, CountedRep):
        res = Nullability.CIN if node.min == 0 else nullability(node.body, memo)
    elif isinstance(node, Iterate):
        if node.optional:
            res = Nullability.CIN
        else:
            res = nullability(node.body, memo)
    elif isinstance(node, (Group, NonCapGroup)):
        res = nullability(node.body, memo)
    elif isinstance(node, (Lookaround, Anchor)):
        res = Nullability.CDN
    else:
        raise TypeError(f"not a regex node: {node!r}")
    memo[key] = (node, res)
    return res


# --------------------------------------------------------------------------
# reversal


def reverse(node: RegexNode) -> RegexNode:
    """Swap the operands of every concatenation, recursively."""
    if isinstance(node, Concat):
        return Concat(reverse(node.right), reverse(node.left))
    if isinstance(node, Union):
        return Union(reverse(node.left), reverse(node.right))
    if isinstance(node, Quantified):
        return Quantified(reverse(node.body), node.kind, node.qid)
    if isinstance(node, CountedRep):
        return CountedRep(reverse(node.body), node.min, node.max, node.greedy, node.qid)
    if isinstance(node, Group):
        return Group(reverse(node.body), node.gid)
    if isinstance(node, NonCapGroup):
        return NonCapGroup(reverse(node.body))
    if isinstance(node, Lookaround):
        return Lookaround(node.kind, reverse(node.body), node.lid)
    if isinstance(node, Iterate):
        if node.then is not None:
            raise ValueError("reverse() of desugared optional layers is not supported")
        return Iterate(reverse(node.body), node.qid, node.optional, node.greedy)
    return node


# --------------------------------------------------------------------------
# printing

_SYNTAX_CHARS = set("^$\\.*+?()[]{}|/")
_CONTROL_ESCAPES = {"\t": "\\t", "\n": "\\n", "\r": "\\r", "\v": "\\v", "\f": "\\f"}


def _print_char(ch: str) -> str:
    if ch in _CONTROL_ESCAPES:
        return _CONTROL_ESCAPES[ch]
    if ch in _SYNTAX_CHARS:
        return "\\" + ch
    return ch


def _print_class_char(cp: int) -> str:
    ch = chr(cp)
    if ch in _CONTROL_ESCAPES:
        return _CONTROL_ESCAPES[ch]
    if ch in "]\\^-[":
        return "\\" + ch
    return ch


def print_class(node: CharClass) -> str:
    parts = []
    for lo, hi in node.ranges:
        if lo == hi:
            parts.append(_print_class_char(lo))
        else:
            parts.append(_print_class_char(lo) + "-" + _print_class_char(hi))
    return "[" + ("^" if node.negated else "") + "".join(parts) + "]"


def _is_atom(node: RegexNode) -> bool:
    return isinstance(node, (Char, AnyChar, CharClass, Group, NonCapGroup, Lookaround))


def to_pattern(node: RegexNode) -> str:
    """Render an AST back to pattern text that parses to the same tree."""
    if isinstance(node, Char):
        return _print_char(node.char)
    if isinstance(node, AnyChar):
        return "."
    if isinstance(node, CharClass):
        return print_class(node)
    if isinstance(node, Epsilon):
        return ""
    if isinstance(node, Concat):
        left = to_pattern(node.left)
        if isinstance(node.left, (Union, Concat, Epsilon)):
            left = "(?:" + left + ")"
        right = to_pattern(node.right)
        if isinstance(node.right, (Union, Epsilon)):
            right = "(?:" + right + ")"
        return left + right
    if isinstance(node, Union):
        left = to_pattern(node.left)
        if isinstance(node.left, Union):
            left = "(?:" + left + ")"
        return left + "|" + to_pattern(node.right)
    if isinstance(node, Quantified):
        return _quantified_body(node.body) + node.kind.value
    if isinstance(node, CountedRep):
        if (node.min, node.max) == (0, 1):
            suffix = "?"
        elif node.max == node.min:
            suffix = "{%d}" % node.min
        elif node.max is None:
            suffix = "{%d,}" % node.min
        else:
            suffix = "{%d,%d}" % (node.min, node.max)
        return _quantified_body(node.body) + suffix + ("" if node.greedy else "?")
    if isinstance(node, Group):
        return "(" + to_pattern(node.body) + ")"
    if isinstance(node, NonCapGroup):
        return "(?:" + to_pattern(node.body) + ")"
    if isinstance(node, Lookaround):
        return "(" + node.kind.value + to_pattern(node.body) + ")"
    if isinstance(node, Anchor):
        return node.kind.value
    raise TypeError(f"cannot print {type(node).__name__}")


def _quantified_body(body: RegexNode) -> str:
    text = to_pattern(body)
    if _is_atom(body) and not (isinstance(body, Lookaround) and body.kind.behind):
        return text
    return "(?:" + text + ")"


def map_children(node: RegexNode, fn: Callable[[RegexNode], RegexNode]) -> RegexNode:
    """Rebuild ``node`` with ``fn`` applied to each child."""
    if isinstance(node, Concat):
        return Concat(fn(node.left), fn(node.right))
    if isinstance(node, Union):
        return Union(fn(node.left), fn(node.right))
    if isinstance(node, Quantified):
        return Quantified(fn(node.body), node.kind, node.qid)
    if isinstance(node, CountedRep):
        return CountedRep(fn(node.body), node.min, node.max, node.greedy, node.qid)
    if isinstance(node, Group):
        return Group(fn(node.body), node.gid)
    if isinstance(node, NonCapGroup):
        return NonCapGroup(fn(node.body))
    if isinstance(node, Lookaround):
        return Lookaround(node.kind, fn(node.body), node.lid)
    if isinstance(node, Iterate):
        then = None if node.then is None else fn(node.then)
        return Iterate(fn(node.body), node.qid, node.optional, node.greedy, then)
    return node

