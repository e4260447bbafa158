"""Command-line entry point.

Patterns are taken verbatim, without delimiters or flags, so quote them for
the shell:  linre match '(a*)b' caabd
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .backtrack import bt_match
from .bench import FAMILIES, bench_family, to_csv
from .compiler import CompileMode
from .errors import RegexError, StepBudgetExceeded
from .fuzz import FuzzProfile, fuzz_campaign
from .pipeline import MatchConfig, MatchStats, PipelineKind, compile_regex, full_match
from .regstore import StoreKind
from .stats import corpus_stats
from .vm import available_backends

EXIT_MATCH, EXIT_NO_MATCH, EXIT_ERROR = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _mode(name: str) -> CompileMode:
    return CompileMode.LEGACY_CLEARREG if name == "legacy" else CompileMode.DEFAULT


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="linre", description="Linear-time JavaScript regex matching.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    m = sub.add_parser("match", help="match a pattern against a string and print the groups")
    m.add_argument("pattern")
    m.add_argument("string")
    m.add_argument("--engine", choices=("linear", "backtrack"), default="linear")
    m.add_argument("--store", choices=[s.value for s in StoreKind], default="array")
    m.add_argument("--pipeline", choices=[k.value for k in PipelineKind], default="auto")
    m.add_argument("--mode", choices=("default", "legacy"), default="default")
    m.add_argument("--backend", choices=available_backends(), default=None)
    m.add_argument("--json", action="store_true", help="one JSON object per line")
    m.add_argument("--stats", action="store_true", help="print counters to stderr")

    c = sub.add_parser("compile", help="dump the numbered bytecode listing")
    c.add_argument("pattern")
    c.add_argument("--mode", choices=("default", "legacy"), default="default")
    c.add_argument("--program", choices=("main", "streaming", "all"), default="main")

    f = sub.add_parser("fuzz", help="differential campaign against the backtracker")
    f.add_argument("--n", type=int, default=10_000)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--profile", type=Path, default=None, help="JSON file of profile fields")
    f.add_argument("--out", type=Path, default=None, help="directory for reproducer files")

    b = sub.add_parser("bench", help="run a complexity family")
    b.add_argument("--family", choices=list(FAMILIES), required=True)
    b.add_argument("--sizes", required=True, help="comma separated, e.g. 5,10,20")
    b.add_argument("--metric", choices=("instructions", "wall-time"), default="instructions")
    b.add_argument("--engine", choices=("linear", "backtrack"), default="linear")
    b.add_argument("--store", choices=[s.value for s in StoreKind], default="array")
    b.add_argument("--mode", choices=("default", "legacy"), default="default")
    b.add_argument("--csv", type=Path, default=None, help="write CSV here instead of stdout")

    s = sub.add_parser("stats", help="feature census of a pattern corpus")
    s.add_argument("corpus", type=Path)
    s.add_argument("--json", action="store_true")
    return p


def _err(msg: str) -> int:
    print(f"linre: {msg}", file=sys.stderr)
    return EXIT_ERROR


def cmd_match(a) -> int:
    if a.engine == "backtrack":
        res = bt_match(a.pattern, a.string)
    else:
        cfg = MatchConfig(PipelineKind(a.pipeline), StoreKind(a.store), _mode(a.mode), a.backend)
        st = MatchStats()
        res = full_match(compile_regex(a.pattern, cfg.mode), a.string, cfg, st)
        if a.stats:
            print(f"pipeline={st.pipeline} instructions={st.instructions} forks={st.forks} "
                  f"slot_copies={st.slot_copies} string_passes={st.string_passes} "
                  f"reconstructions={st.runs_phase3}", file=sys.stderr)
    if res is None:
        print("null" if a.json else "no match")
        return EXIT_NO_MATCH
    print(res.to_json() if a.json else res.to_text())
    return EXIT_MATCH


def cmd_compile(a) -> int:
    regex = compile_regex(a.pattern, _mode(a.mode))
    if a.program == "main":
        print(regex.main.listing())
    elif a.program == "streaming":
        if not regex.streaming_ok:
            return _err("regex is not eligible for the streaming pipeline")
        print(regex.streaming.listing())
    else:
        print("; main")
        print(regex.main.listing())
        for lid in sorted(regex.looks):
            print(f"; oracle pass for lookaround {lid}")
            print(regex.oracle_program(lid).listing())
    return EXIT_MATCH


def cmd_fuzz(a) -> int:
    if a.n < 1:
        return _err("--n must be at least 1")
    profile = FuzzProfile.load(a.profile) if a.profile else FuzzProfile()
    report = fuzz_campaign(a.n, a.seed, profile, out_dir=a.out,
                           progress=lambda r: print(r.summary(), file=sys.stderr))
    print(report.summary())
    for pat, text in report.reproducers:
        print(f"reproducer: {pat!r} {text!r}")
    return EXIT_MATCH if report.mismatches == 0 else EXIT_NO_MATCH


def cmd_bench(a) -> int:
    try:
        sizes = [int(x) for x in a.sizes.split(",") if x.strip()]
    except ValueError:
        return _err(f"bad --sizes {a.sizes!r}")
    cfg = MatchConfig(store=StoreKind(a.store), mode=_mode(a.mode))
    rows = bench_family(a.family, sizes, a.metric, cfg, engine=a.engine)
    out = to_csv(rows)
    if a.csv:
        a.csv.write_text(out)
    else:
        sys.stdout.write(out)
    return EXIT_MATCH


def cmd_stats(a) -> int:
    try:
        st = corpus_stats(a.corpus)
    except OSError as e:
        return _err(f"cannot read corpus: {e}")
    print(st.to_json() if a.json else st.to_text())
    return EXIT_MATCH


_COMMANDS = {"match": cmd_match, "compile": cmd_compile, "fuzz": cmd_fuzz, "bench": cmd_bench, "stats": cmd_stats}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except StepBudgetExceeded as e:
        return _err(str(e))
    except (RegexError, ValueError) as e:
        return _err(str(e))


if __name__ == "__main__":
    sys.exit(main())
