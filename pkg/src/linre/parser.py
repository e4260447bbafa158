"""Recursive-descent parser for the supported ECMAScript regex subset.

Follows the web-compatibility grammar where it is lenient: a ``{`` that does
not start a well-formed quantifier is a literal, ``]`` and ``}`` outside a
class are literals, and lookaheads may be quantified.
"""

from __future__ import annotations

from typing import Optional

from .errors import RegexSyntaxError, UnsupportedFeatureError
from .syntax import (
    DIGIT_RANGES,
    SPACE_RANGES,
    WORD_RANGES,
    Anchor,
    AnchorKind,
    AnyChar,
    Char,
    CharClass,
    Concat,
    CountedRep,
    Epsilon,
    Group,
    Iterate,
    Lookaround,
    LookKind,
    NonCapGroup,
    QuantKind,
    Quantified,
    RegexNode,
    Union,
    complement_ranges,
    map_children,
)

_CONTROL = {"t": "\t", "n": "\n", "r": "\r", "v": "\v", "f": "\f"}
_CLASS_ESCAPES = {
    "d": (DIGIT_RANGES, False),
    "D": (DIGIT_RANGES, True),
    "w": (WORD_RANGES, False),
    "W": (WORD_RANGES, True),
    "s": (SPACE_RANGES, False),
    "S": (SPACE_RANGES, True),
}
_UNSUPPORTED_ESCAPES = {
    "k": "named backreference \\k",
    "x": "hex escape \\x",
    "u": "unicode escape \\u",
    "p": "unicode property escape \\p",
    "P": "unicode property escape \\P",
    "c": "control escape \\c",
}


class _Parser:
    def __init__(self, pattern: str):
        self.src = pattern
        self.pos = 0
        self.next_gid = 1
        self.next_lid = 1

    def peek(self, k: int = 0) -> Optional[str]:
        j = self.pos + k
        return self.src[j] if j < len(self.src) else None

    def error(self, msg: str, pos: Optional[int] = None) -> RegexSyntaxError:
        return RegexSyntaxError(msg, self.pos if pos is None else pos)

    # disjunction := alternative ('|' alternative)*
    def disjunction(self) -> RegexNode:
        alts = [self.alternative()]
        while self.peek() == "|":
            self.pos += 1
            alts.append(self.alternative())
        node = alts[-1]
        for alt in reversed(alts[:-1]):
            node = Union(alt, node)
        return node

    def alternative(self) -> RegexNode:
        terms = []
        while self.peek() is not None and self.peek() not in "|)":
            terms.append(self.term())
        if not terms:
            return Epsilon()
        node = terms[-1]
        for t in reversed(terms[:-1]):
            node = Concat(t, node)
        return node

    def term(self) -> RegexNode:
        start = self.pos
        atom, quantifiable = self.atom()
        quant = self.quantifier()
        if quant is None:
            return atom
        if not quantifiable:
            raise self.error("nothing to repeat", start)
        kind, lo, hi, greedy = quant
        if kind is not None:
            return Quantified(atom, kind)
        return CountedRep(atom, lo, hi, greedy)

    def quantifier(self):
        ch = self.peek()
        if ch in ("*", "+", "?"):
            self.pos += 1
            lazy = self._lazy()
            if ch == "*":
                return (QuantKind.LAZY_STAR if lazy else QuantKind.STAR), 0, None, not lazy
            if ch == "+":
                return (QuantKind.LAZY_PLUS if lazy else QuantKind.PLUS), 1, None, not lazy
            return None, 0, 1, not lazy
        if ch == "{":
            bounds = self._braces()
            if bounds is None:
                return None
            lo, hi = bounds
            lazy = self._lazy()
            return None, lo, hi, not lazy
        return None

    def _lazy(self) -> bool:
        if self.peek() == "?":
            self.pos += 1
            return True
        return False

    def _digits(self) -> Optional[int]:
        start = self.pos
        while self.peek() is not None and self.peek().isdigit() and self.peek().isascii():
            self.pos += 1
        return int(self.src[start:self.pos]) if self.pos > start else None

    def _braces(self):
        """Parse ``{n}``, ``{n,}`` or ``{n,m}``; otherwise leave ``{`` as a literal."""
        start = self.pos
        self.pos += 1
        lo = self._digits()
        hi: Optional[int]
        if lo is None:
            self.pos = start
            return None
        if self.peek() == ",":
            self.pos += 1
            hi = self._digits()
        else:
            hi = lo
        if self.peek() != "}":
            self.pos = start
            return None
        self.pos += 1
        if hi is not None and hi < lo:
            raise self.error("numbers out of order in {} quantifier", start)
        return lo, hi

    def atom(self) -> tuple[RegexNode, bool]:
        start = self.pos
        ch = self.peek()
        if ch in ("*", "+", "?"):
            raise self.error("nothing to repeat")
        if ch == "{":
            if self._braces() is not None:
                raise self.error("nothing to repeat", start)
            self.pos = start + 1
            return Char("{"), True
        self.pos += 1
        if ch == ".":
            return AnyChar(), True
        if ch == "^":
            return Anchor(AnchorKind.BEGIN), False
        if ch == "$":
            return Anchor(AnchorKind.END), False
        if ch == "[":
            return self.char_class(), True
        if ch == "(":
            return self.group(start)
        if ch == "\\":
            return self.atom_escape(start)
        return Char(ch), True

    def group(self, start: int) -> tuple[RegexNode, bool]:
        if self.peek() == "?":
            nxt = self.peek(1)
            if nxt == ":":
                self.pos += 2
                body = self.disjunction()
                self._close(start)
                return NonCapGroup(body), True
            kind = None
            if nxt == "=":
                kind, width = LookKind.AHEAD, 2
            elif nxt == "!":
                kind, width = LookKind.NEG_AHEAD, 2
            elif nxt == "<" and self.peek(2) == "=":
                kind, width = LookKind.BEHIND, 3
            elif nxt == "<" and self.peek(2) == "!":
                kind, width = LookKind.NEG_BEHIND, 3
            elif nxt == "<":
                raise UnsupportedFeatureError("named group (?<name>...)", start)
            elif nxt is not None and nxt in "imsuyg-":
                raise UnsupportedFeatureError("inline flags", start)
            else:
                raise self.error("invalid group", start)
            self.pos += width
            lid = self.next_lid
            self.next_lid += 1
            body = self.disjunction()
            self._close(start)
            # lookaheads are quantifiable under the web-compat grammar
            return Lookaround(kind, body, lid), not kind.behind
        gid = self.next_gid
        self.next_gid += 1
        body = self.disjunction()
        self._close(start)
        return Group(body, gid), True

    def _close(self, start: int) -> None:
        if self.peek() != ")":
            raise self.error("unterminated group", start)
        self.pos += 1

    def atom_escape(self, start: int) -> tuple[RegexNode, bool]:
        ch = self.peek()
        if ch is None:
            raise self.error("\\ at end of pattern", start)
        self.pos += 1
        if ch == "b":
            return Anchor(AnchorKind.WORD_BOUNDARY), False
        if ch == "B":
            return Anchor(AnchorKind.NOT_WORD_BOUNDARY), False
        if ch in "123456789":
            raise UnsupportedFeatureError(f"backreference \\{ch}", start)
        if ch in _CLASS_ESCAPES:
            ranges, neg = _CLASS_ESCAPES[ch]
            return CharClass(ranges, neg), True
        return Char(self._char_escape(ch, start)), True

    def _char_escape(self, ch: str, start: int) -> str:
        if ch in _CONTROL:
            return _CONTROL[ch]
        if ch in _UNSUPPORTED_ESCAPES:
            raise UnsupportedFeatureError(_UNSUPPORTED_ESCAPES[ch], start)
        if ch == "0":
            if self.peek() is not None and self.peek().isdigit():
                raise UnsupportedFeatureError("octal escape", start)
            return "\0"
        # identity escape (web-compat grammar accepts any other character)
        return ch

    def char_class(self) -> CharClass:
        start = self.pos - 1
        negated = False
        if self.peek() == "^":
            negated = True
            self.pos += 1
        ranges: list[tuple[int, int]] = []
        while True:
            ch = self.peek()
            if ch is None:
                raise self.error("unterminated character class", start)
            if ch == "]":
                self.pos += 1
                return CharClass(tuple(ranges), negated)
            lo = self._class_atom()
            if self.peek() == "-" and self.peek(1) not in (None, "]"):
                self.pos += 1
                dash_at = self.pos
                hi = self._class_atom()
                if isinstance(lo, int) and isinstance(hi, int):
                    if hi < lo:
                        raise self.error("range out of order in character class", dash_at)
                    ranges.append((lo, hi))
                    continue
                # a class escape on either side makes the dash literal
                for part in (lo, ord("-"), hi):
                    _add_class_part(ranges, part)
                continue
            _add_class_part(ranges, lo)

    def _class_atom(self):
        """A code point, or a tuple of ranges for a class escape."""
        start = self.pos
        ch = self.peek()
        self.pos += 1
        if ch != "\\":
            return ord(ch)
        esc = self.peek()
        if esc is None:
            raise self.error("\\ at end of pattern", start)
        self.pos += 1
        if esc == "b":
            return 8
        if esc == "-":
            return ord("-")
        if esc in _CLASS_ESCAPES:
            ranges, neg = _CLASS_ESCAPES[esc]
            return complement_ranges(ranges) if neg else ranges
        if esc in "123456789":
            raise UnsupportedFeatureError(f"backreference \\{esc}", start)
        return ord(self._char_escape(esc, start))


def _add_class_part(ranges: list, part) -> None:
    if isinstance(part, int):
        ranges.append((part, part))
    else:
        ranges.extend(part)


def assign_quantifier_ids(node: RegexNode) -> RegexNode:
    """Number quantifiers 1.. in preorder (a quantifier before its body)."""
    counter = [0]

    def visit(n: RegexNode) -> RegexNode:
        if isinstance(n, (Quantified, CountedRep)):
            counter[0] += 1
            qid = counter[0]
            body = visit(n.body)
            if isinstance(n, Quantified):
                return Quantified(body, n.kind, qid)
            return CountedRep(body, n.min, n.max, n.greedy, qid)
        if isinstance(n, Iterate):
            raise TypeError("assign_quantifier_ids runs before desugaring")
        return map_children(n, visit)

    return visit(node)


def parse(pattern: str) -> RegexNode:
    """Parse ``pattern`` (bare, no delimiters or flags) into an annotated AST."""
    p = _Parser(pattern)
    node = p.disjunction()
    if p.pos != len(pattern):
        # only an unmatched ')' can stop the top-level disjunction early
        raise p.error("unmatched ')'")
    return assign_quantifier_ids(node)
