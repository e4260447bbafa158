"""Reference backtracking matcher following the ECMAScript matcher semantics.

Continuation-passing closures built directly from the AST (no bytecode), so
it shares as little as possible with the linear engine it checks.  Every
closure takes a direction: lookbehind bodies are matched right to left.
"""

from __future__ import annotations

import sys
import threading
from dataclasses import dataclass
from typing import Callable, Optional, Union as TUnion

from .errors import StepBudgetExceeded
from .parser import parse
from .pipeline import MatchResult
from .syntax import (
    LINE_TERMINATORS,
    Anchor,
    AnyChar,
    Char,
    CharClass,
    Concat,
    CountedRep,
    Epsilon,
    Group,
    Lookaround,
    NonCapGroup,
    Quantified,
    RegexNode,
    Union,
    anchor_holds,
    group_ids,
    walk,
)

DEFAULT_STEP_BUDGET = 10_000_000
INF = float("inf")

# a state is (position, captures) with captures a tuple of (start, end) or None
State = tuple
Cont = Callable[[State], Optional[State]]


@dataclass
class BtStats:
    steps: int = 0


class _Budget:
    __slots__ = ("left", "budget", "used")

    def __init__(self, budget: int):
        self.budget = budget
        self.left = budget
        self.used = 0

    def tick(self) -> None:
        self.left -= 1
        if self.left < 0:
            raise StepBudgetExceeded(self.budget)


def _set_cap(caps: tuple, g: int, span) -> tuple:
    return caps[:g] + (span,) + caps[g + 1:]


class _Builder:
    def __init__(self, text: str, budget: _Budget):
        self.text = text
        self.n = len(text)
        self.budget = budget

    def build(self, node: RegexNode, forward: bool):
        t = type(node)
        text, n, budget = self.text, self.n, self.budget
        if t in (Char, AnyChar, CharClass):
            if t is Char:
                want = node.char
                test = lambda ch: ch == want  # noqa: E731
            elif t is AnyChar:
                test = lambda ch: ch not in LINE_TERMINATORS  # noqa: E731
            else:
                test = node.matches

            if forward:
                def m(x, c):
                    budget.tick()
                    p = x[0]
                    if p < n and test(text[p]):
                        return c((p + 1, x[1]))
                    return None
            else:
                def m(x, c):
                    budget.tick()
                    p = x[0]
                    if p > 0 and test(text[p - 1]):
                        return c((p - 1, x[1]))
                    return None
            return m
        if t is Epsilon:
            return lambda x, c: c(x)
        if t is Concat:
            m1 = self.build(node.left, forward)
            m2 = self.build(node.right, forward)
            if not forward:
                m1, m2 = m2, m1

            def m(x, c):
                budget.tick()
                return m1(x, lambda y: m2(y, c))
            return m
        if t is Union:
            m1 = self.build(node.left, forward)
            m2 = self.build(node.right, forward)

            def m(x, c):
                budget.tick()
                r = m1(x, c)
                if r is not None:
                    return r
                return m2(x, c)
            return m
        if t is Group:
            inner = self.build(node.body, forward)
            g = node.gid

            def m(x, c):
                budget.tick()
                xp = x[0]

                def k(y):
                    span = (xp, y[0]) if forward else (y[0], xp)
                    return c((y[0], _set_cap(y[1], g, span)))
                return inner(x, k)
            return m
        if t is NonCapGroup:
            return self.build(node.body, forward)
        if t is Lookaround:
            inner = self.build(node.body, not node.kind.behind)
            positive = node.kind.positive

            def m(x, c):
                budget.tick()
                r = inner(x, lambda y: y)
                if positive:
                    if r is None:
                        return None
                    return c((x[0], r[1]))
                if r is not None:
                    return None
                return c(x)
            return m
        if t is Anchor:
            kind = node.kind

            def m(x, c):
                budget.tick()
                return c(x) if anchor_holds(kind, text, x[0]) else None
            return m
        if t is Quantified:
            lo = 1 if node.kind.is_plus else 0
            return self.repeat(node.body, lo, INF, node.kind.greedy, forward)
        if t is CountedRep:
            return self.repeat(node.body, node.min, INF if node.max is None else node.max, node.greedy, forward)
        raise TypeError(f"cannot match {t.__name__}")

    def repeat(self, body: RegexNode, lo, hi, greedy: bool, forward: bool):
        inner = self.build(body, forward)
        inside = group_ids(body)
        budget = self.budget

        def rep(mn, mx, x, c):
            budget.tick()
            if mx == 0:
                return c(x)
            xp = x[0]

            def d(y):
                if mn == 0 and y[0] == xp:
                    return None  # empty optional iteration
                return rep(0 if mn == 0 else mn - 1, mx - 1, y, c)

            caps = x[1]
            for g in inside:
                if caps[g] is not None:
                    caps = _set_cap(caps, g, None)
            xr = (xp, caps)
            if mn != 0:
                return inner(xr, d)
            if not greedy:
                z = c(x)
                if z is not None:
                    return z
                return inner(xr, d)
            z = inner(xr, d)
            if z is not None:
                return z
            return c(x)

        return lambda x, c: rep(lo, hi, x, c)


def _n_groups(ast: RegexNode) -> int:
    return max((n.gid for n in walk(ast) if isinstance(n, Group)), default=0)


def _run_deep(fn, depth_hint: int):
    """Run ``fn`` with enough recursion headroom for ``depth_hint`` nested calls."""
    if depth_hint < 2000:
        return fn()
    box: dict = {}

    def target():
        old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old, depth_hint * 4 + 10_000))
        try:
            box["v"] = fn()
        except BaseException as e:  # re-raised in the caller's thread
            box["e"] = e
        finally:
            sys.setrecursionlimit(old)

    old_size = threading.stack_size()
    threading.stack_size(min(1 << 30, max(64 << 20, depth_hint * 2048)))
    try:
        th = threading.Thread(target=target)
        th.start()
        th.join()
    finally:
        threading.stack_size(old_size)
    if "e" in box:
        raise box["e"]
    return box["v"]


def bt_match(
    regex: TUnion[str, RegexNode],
    text: str,
    budget: int = DEFAULT_STEP_BUDGET,
    stats: Optional[BtStats] = None,
) -> Optional[MatchResult]:
    """First match in ECMAScript priority order, or None."""
    ast = parse(regex) if isinstance(regex, str) else regex
    g = _n_groups(ast)
    bud = _Budget(budget)
    m = _Builder(text, bud).build(ast, True)
    init = (None,) * (g + 1)

    def search():
        for start in range(len(text) + 1):
            r = m((start, init), lambda y: y)
            if r is not None:
                caps = list(r[1])
                caps[0] = (start, r[0])
                return MatchResult(text, tuple(caps))
        return None

    try:
        return _run_deep(search, len(text) * 8 + sum(1 for _ in walk(ast)) * 4)
    finally:
        if stats is not None:
            stats.steps += budget - bud.left


def bt_match_at(
    node: RegexNode,
    text: str,
    pos: int,
    forward: bool = True,
    budget: int = DEFAULT_STEP_BUDGET,
) -> bool:
    """Does ``node`` match starting at ``pos`` (ending at ``pos`` when not forward)?"""
    g = _n_groups(node)
    m = _Builder(text, _Budget(budget)).build(node, forward)
    return _run_deep(lambda: m((pos, (None,) * (g + 1)), lambda y: y) is not None, len(text) * 8)


def bt_empty_at(node: RegexNode, text: str, pos: int, budget: int = DEFAULT_STEP_BUDGET) -> bool:
    """Can ``node`` match the empty string at ``pos``?"""
    g = _n_groups(node)
    m = _Builder(text, _Budget(budget)).build(node, True)
    return m((pos, (None,) * (g + 1)), lambda y: y if y[0] == pos else None) is not None
