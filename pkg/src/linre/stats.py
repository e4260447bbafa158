"""Feature census over a corpus of patterns, one per line."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .errors import RegexError
from .parser import parse
from .syntax import (
    CountedRep,
    Group,
    Lookaround,
    Nullability,
    Quantified,
    RegexNode,
    has_capture,
    nullability,
    walk,
)

# display order follows the usual feature chart
CATEGORIES = (
    ("nullable_quantifiers", "Nullable quantifiers"),
    ("capture_in_quantifiers", "Capture groups in quantifiers"),
    ("nonnullable_plus", "Non-nullable +"),
    ("nullable_greedy_plus", "CIN/CDN greedy +"),
    ("nullable_lazy_plus", "CIN/CDN lazy +"),
    ("lookarounds", "Lookarounds"),
    ("captureless_lookbehinds", "Captureless lookbehinds only"),
)


def _plus_like(n: RegexNode):
    """(is a plus, greedy) for `+`, `+?` and unbounded counted reps with min >= 1."""
    if isinstance(n, Quantified):
        return n.kind.is_plus, n.kind.greedy
    if isinstance(n, CountedRep) and n.max is None and n.min >= 1:
        return True, n.greedy
    return False, False


def features(ast: RegexNode) -> dict[str, bool]:
    memo: dict = {}
    nodes = list(walk(ast))
    quants = [n for n in nodes if isinstance(n, (Quantified, CountedRep))]
    looks = [n for n in nodes if isinstance(n, Lookaround)]
    out = dict.fromkeys((k for k, _ in CATEGORIES), False)
    for q in quants:
        nul = nullability(q.body, memo) is not Nullability.NN
        if nul:
            out["nullable_quantifiers"] = True
        if any(isinstance(x, Group) for x in walk(q.body)):
            out["capture_in_quantifiers"] = True
        plus, greedy = _plus_like(q)
        if plus:
            if not nul:
                out["nonnullable_plus"] = True
            elif greedy:
                out["nullable_greedy_plus"] = True
            else:
                out["nullable_lazy_plus"] = True
    out["lookarounds"] = bool(looks)
    out["captureless_lookbehinds"] = bool(looks) and all(
        lk.kind.behind and not has_capture(lk.body) for lk in looks
    )
    return out


@dataclass
class CorpusStats:
    parsed: int = 0
    failed: int = 0
    counts: dict[str, int] = field(default_factory=lambda: dict.fromkeys((k for k, _ in CATEGORIES), 0))
    failures: list[tuple[int, str]] = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.parsed + self.failed

    def percent(self, key: str) -> float:
        return 100.0 * self.counts[key] / self.parsed if self.parsed else 0.0

    def to_text(self) -> str:
        lines = [f"patterns: {self.total}", f"parsed: {self.parsed}", f"failed: {self.failed}"]
        width = max(len(label) for _, label in CATEGORIES)
        for key, label in CATEGORIES:
            lines.append(f"{label:<{width}}  {self.counts[key]:>8}  {self.percent(key):6.2f}%")
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps({"parsed": self.parsed, "failed": self.failed, "counts": self.counts})


def corpus_stats_lines(lines: Iterable[str]) -> CorpusStats:
    st = CorpusStats()
    for k, line in enumerate(lines, 1):
        pattern = line.rstrip("\r\n")
        if not pattern:
            continue
        try:
            ast = parse(pattern)
        except (RegexError, RecursionError) as e:
            st.failed += 1
            st.failures.append((k, str(e)))
            continue
        st.parsed += 1
        for key, v in features(ast).items():
            st.counts[key] += v
    return st


def corpus_stats(path: str | Path) -> CorpusStats:
    """Raises OSError if the file cannot be read."""
    with open(path, encoding="utf-8") as f:
        return corpus_stats_lines(f)
