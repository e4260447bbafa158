"""Counted repetition desugaring.

``e{n,m}`` becomes n mandatory iterations followed by a chain of m-n nested
optional iterations (or a star when unbounded).  Every copy shares the body
subtree, so group ids, lookaround ids and inner quantifier ids stay those of
the source pattern; the copies only differ in the bytecode they produce.
"""

from __future__ import annotations

from .errors import RepetitionLimitError
from .syntax import (
    Concat,
    CountedRep,
    Epsilon,
    Iterate,
    Nullability,
    QuantKind,
    Quantified,
    RegexNode,
    map_children,
    node_count,
    nullability,
)

DEFAULT_REPETITION_LIMIT = 1000
DEFAULT_MAX_EXPANDED_NODES = 200_000


def _seq(parts: list[RegexNode]) -> RegexNode:
    if not parts:
        return Epsilon()
    node = parts[-1]
    for p in reversed(parts[:-1]):
        node = Concat(p, node)
    return node


def expand_counted(rep: CountedRep, body: RegexNode) -> RegexNode:
    """Desugar one counted repetition whose body is already desugared."""
    n, m, q = rep.min, rep.max, rep.qid
    if m == 0:
        return Epsilon()
    parts: list[RegexNode] = []
    if m is None:
        if n > 0 and nullability(body) is Nullability.NN:
            # n-1 copies then a plus saves one body copy
            parts = [Iterate(body, q) for _ in range(n - 1)]
            kind = QuantKind.PLUS if rep.greedy else QuantKind.LAZY_PLUS
        else:
            parts = [Iterate(body, q) for _ in range(n)]
            kind = QuantKind.STAR if rep.greedy else QuantKind.LAZY_STAR
        parts.append(Quantified(body, kind, q))
        return _seq(parts)
    parts = [Iterate(body, q) for _ in range(n)]
    layer = None
    for _ in range(m - n):
        layer = Iterate(body, q, optional=True, greedy=rep.greedy, then=layer)
    if layer is not None:
        parts.append(layer)
    return _seq(parts)


def desugar_counted(
    node: RegexNode,
    limit: int = DEFAULT_REPETITION_LIMIT,
    expand_plus: bool = False,
    max_nodes: int = DEFAULT_MAX_EXPANDED_NODES,
) -> RegexNode:
    """Replace every CountedRep by Iterate chains.

    ``expand_plus`` rewrites ``e+`` as ``e e*`` (two body copies); it exists to
    demonstrate the exponential blow-up of that classic construction and is
    not used for matching.
    """
    memo: dict[int, tuple[RegexNode, RegexNode]] = {}
    sizes: dict[int, int] = {}

    def size(n: RegexNode) -> int:
        # expanded size, shared subtrees counted once per occurrence
        hit = sizes.get(id(n))
        if hit is None:
            hit = 1 + sum(size(c) for c in n.children())
            sizes[id(n)] = hit
        return hit

    def visit(n: RegexNode) -> RegexNode:
        hit = memo.get(id(n))
        if hit is not None:
            return hit[1]
        if isinstance(n, CountedRep):
            bound = n.min if n.max is None else n.max
            if bound > limit:
                raise RepetitionLimitError(bound, limit)
            body = visit(n.body)
            if size(body) * max(n.min, 1 if n.max is None else n.max, 1) > max_nodes:
                raise RepetitionLimitError(size(body) * max(n.min, n.max or 1), max_nodes)
            out = expand_counted(n, body)
        elif expand_plus and isinstance(n, Quantified) and n.kind.is_plus:
            body = visit(n.body)
            star = QuantKind.STAR if n.kind.greedy else QuantKind.LAZY_STAR
            out = Concat(Iterate(body, n.qid), Quantified(body, star, n.qid))
        else:
            out = map_children(n, visit)
        memo[id(n)] = (n, out)
        if size(out) > max_nodes:
            raise RepetitionLimitError(size(out), max_nodes)
        return out

    return visit(node)


def expanded_size(node: RegexNode) -> int:
    return node_count(node)
