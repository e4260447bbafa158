import os
import shutil

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from linre.fuzz import FuzzProfile, RegexGenerator
from linre.syntax import to_pattern

settings.register_profile(
    "default", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=2000, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def regex_asts(draw, profile=None):
    """ASTs from the fuzz grammar, seeded by hypothesis so failures shrink to a seed."""
    import random

    seed = draw(st.integers(0, 2**32 - 1))
    gen = RegexGenerator(random.Random(seed), profile or FuzzProfile())
    return gen.regex()


@st.composite
def regex_patterns(draw, profile=None):
    return to_pattern(draw(regex_asts(profile)))


small_strings = st.text(alphabet="abcd", max_size=8)

node_available = shutil.which("node") is not None
requires_node = pytest.mark.skipif(not node_available, reason="node not installed")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.SUMMARY:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.SUMMARY, key=lambda l: int(l.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
