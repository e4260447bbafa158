"""Exception hierarchy shared by the frontend, compiler and engines."""

from __future__ import annotations


class RegexError(Exception):
    """Base class for every error raised while handling a pattern."""


class RegexSyntaxError(RegexError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.message = message
        self.position = position


class UnsupportedFeatureError(RegexError):
    def __init__(self, feature: str, position: int):
        super().__init__(f"unsupported feature: {feature} at offset {position}")
        self.feature = feature
        self.position = position


class CompileError(RegexError):
    pass


class LazyNullablePlusError(CompileError):
    """A `+?` over a nullable body: no linear-time algorithm is known."""

    def __init__(self, qid: int):
        super().__init__(f"lazy-nullable-plus-unsupported: quantifier {qid} is a lazy plus over a nullable body")
        self.qid = qid


class RepetitionLimitError(CompileError):
    def __init__(self, bound: int, limit: int):
        super().__init__(f"repetition bound {bound} exceeds limit {limit}")
        self.bound = bound
        self.limit = limit


class IneligibleRegexError(CompileError):
    """The streaming pipeline was asked to handle a regex it cannot."""


class EngineError(RegexError):
    """Internal inconsistency (oracle disagreement, bad register index...)."""


class MissingOracleError(EngineError):
    pass


class StepBudgetExceeded(RegexError):
    def __init__(self, budget: int):
        super().__init__(f"backtracking step budget of {budget} exceeded")
        self.budget = budget
