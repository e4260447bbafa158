"""Linear-time matching for JavaScript regexes with lookarounds and captures.

    >>> import linre
    >>> linre.full_match("(a*)b", "caabd").group(1)
    'aa'
"""

from .backtrack import bt_match
from .compiler import CompileMode, CompileOptions
from .errors import (
    CompileError,
    EngineError,
    IneligibleRegexError,
    LazyNullablePlusError,
    RegexError,
    RegexSyntaxError,
    RepetitionLimitError,
    StepBudgetExceeded,
    UnsupportedFeatureError,
)
from .parser import parse
from .pipeline import (
    MatchConfig,
    MatchResult,
    MatchStats,
    PipelineKind,
    Regex,
    build_oracle,
    compile_regex,
    full_match,
)
from .regstore import StoreKind
from .vm import CYTHON_AVAILABLE, DEFAULT_BACKEND, available_backends

__version__ = "0.1.0"

__all__ = [
    "CYTHON_AVAILABLE",
    "DEFAULT_BACKEND",
    "CompileError",
    "CompileMode",
    "CompileOptions",
    "EngineError",
    "IneligibleRegexError",
    "LazyNullablePlusError",
    "MatchConfig",
    "MatchResult",
    "MatchStats",
    "PipelineKind",
    "Regex",
    "RegexError",
    "RegexSyntaxError",
    "RepetitionLimitError",
    "StepBudgetExceeded",
    "StoreKind",
    "UnsupportedFeatureError",
    "available_backends",
    "bt_match",
    "build_oracle",
    "compile_regex",
    "full_match",
    "parse",
]
