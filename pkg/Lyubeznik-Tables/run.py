#!/usr/bin/env python3
"""
lyutab: Lyubeznik tables and Cohen-Macaulay classification of Stanley-Reisner rings.

Usage:
  python run.py table FILE     [--char N] [--format text|json] [--cache DIR] [--jobs N]
  python run.py classify FILE  [--char N] [--format text|json] [--cache DIR] [--jobs N]
  python run.py duals FILE     [--format text|json]
  python run.py verify --family random|nonpure-shellable|forest --n N --count K --seed S
                       [--q Q] [--char N] [--jobs N] [--quiet]

FILE is a JSON document {"n": ..., "generators" | "facets" | "primary_components": [[...], ...]}
or the same JSON given inline. Defaults come from the environment (or .env), see config.py.

Exit codes: 0 ok, 2 bad input, 3 resource bound, 4 internal invariant failure,
5 a verified implication failed.
"""

import argparse
import json
import os
import sys
import traceback

# --- Make sure this script's folder is on the import path ---
_THIS_DIR = os.path.dirname(os.path.abspath(__file__))
if _THIS_DIR not in sys.path:
    sys.path.insert(0, _THIS_DIR)

from cache import open_cache  # noqa: E402
from complexes import (  # noqa: E402
    alexander_dual,
    load_document,
    parse_and_canonicalize,
    primary_decomposition,
    subsets_to_lists,
)
from config import RunConfig, build_run_config, load_environment, setup_logging  # noqa: E402
from corpus import FAMILIES  # noqa: E402
from errors import ImplicationFailure, LyutabError  # noqa: E402
from lyub import LyubeznikEngine, classify_and_verify, depth_text  # noqa: E402


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lyutab", description="Lyubeznik tables of squarefree monomial ideals")
    sub = parser.add_subparsers(dest="command", required=True)

    # Flags shared by every command (None = fall back to the environment).
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--char", type=int, default=None, help="field characteristic: 0 or a prime (default 0)")
    common.add_argument("--format", choices=("text", "json"), default=None, help="output format (default text)")
    common.add_argument("--jobs", type=int, default=None, help="worker processes (default: all cores)")
    common.add_argument("--cache", default=None, metavar="DIR", help="resolution cache directory")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug logging")
    common.add_argument("--quiet", action="store_true", help="no progress bar")

    for name, text in (
        ("table", "print the Lyubeznik table"),
        ("classify", "classification report with every checked implication"),
        ("duals", "Stanley-Reisner complex, Alexander dual and primary decomposition"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("file", metavar="FILE", help="input document (path or inline JSON)")

    p = sub.add_parser("verify", parents=[common], help="verify every implication on a generated corpus")
    p.add_argument("--family", choices=FAMILIES, default=None)
    p.add_argument("--n", type=int, default=None, help="number of vertices (at most 8)")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--q", type=float, default=0.3, help="subset probability for the random family")
    p.add_argument("--seed", type=int, default=None)
    return parser


def read_input(path: str):
    """Path to a JSON file, or the JSON document itself."""
    if path.lstrip().startswith("{"):
        return parse_and_canonicalize(path)
    return load_document(path)


def _banner(title: str) -> str:
    return f"--- {title} ---"


def _make_engine(config: RunConfig, ideal) -> LyubeznikEngine:
    return LyubeznikEngine(
        ideal,
        config.field,
        cache=open_cache(config.cache_dir),
        jobs=config.jobs,
        check=config.check_invariants,
        max_vars=config.max_vars,
    )


def cmd_table(config: RunConfig) -> int:
    ideal, _ = read_input(config.input_path)
    engine = _make_engine(config, ideal)
    table = engine.table
    engine.flush()
    if config.output_format == "json":
        doc = {
            "ideal": ideal.to_document(),
            "characteristic": config.field.characteristic,
            "d": table.d,
            "table": table.to_json(),
            "trivial": table.is_trivial,
        }
        print(json.dumps(doc, indent=2))
    else:
        print(_banner(f"Lyubeznik table over {config.field.label} (d = {table.d})"))
        print(table.render_text())
    return 0


def _print_classification(report) -> None:
    cls = report.classification
    print(_banner(f"Classification over {report.field.label}"))
    print(f"d = {cls.d}, depth = {depth_text(cls.depth)}")
    for label, value in (
        ("Cohen-Macaulay", cls.is_cm),
        ("sequentially CM (homological)", cls.is_seq_cm_hom),
        ("sequentially CM (Duval)", cls.is_seq_cm_duval),
        ("canonically CM", cls.is_ccm),
        ("unmixed", cls.is_unmixed),
        ("S2", cls.is_s2),
    ):
        print(f"  {label}: {'yes' if value else 'no'}")
    print(f"  H^r_I(R) != 0 for r in {sorted(cls.lc_nonvanishing)}")
    print(f"  Hochster-Huneke components: {cls.hh_components}")
    print()
    print(_banner("Deficiency modules K^i"))
    for i, prof in enumerate(cls.deficiency_profiles):
        if prof.is_zero:
            print(f"  K^{i}: 0")
        else:
            cm = "CM" if prof.is_cm else "not CM"
            print(f"  K^{i}: dim {prof.dim}, depth {depth_text(prof.depth)}, {cm}")
    print()
    print(_banner(f"Lyubeznik table (trivial: {'yes' if report.table.is_trivial else 'no'})"))
    print(report.table.render_text())
    print()
    print(_banner("Checks"))
    for name, outcome in report.checks.items():
        print(f"  {name}: {outcome}")
    if report.converse_witness:
        print("  trivial table on a ring that is not sequentially CM")
    print()
    print(_banner("Assumptions"))
    for line in report.assumptions:
        print(f"  - {line}")


def cmd_classify(config: RunConfig) -> int:
    ideal, _ = read_input(config.input_path)
    engine = _make_engine(config, ideal)
    try:
        report = classify_and_verify(ideal, config.field, engine)
    finally:
        engine.flush()
    if config.output_format == "json":
        print(json.dumps(report.to_json(), indent=2))
    else:
        _print_classification(report)
    return 0


def cmd_duals(config: RunConfig) -> int:
    ideal, complex_ = read_input(config.input_path)
    dual = subsets_to_lists(alexander_dual(ideal).generators) if not ideal.is_zero else None
    doc = {
        "ideal": ideal.to_document(),
        "complex": complex_.to_document(),
        "alexander_dual": dual,
        "primary_decomposition": subsets_to_lists(primary_decomposition(ideal)),
    }
    if config.output_format == "json":
        print(json.dumps(doc, indent=2))
        return 0
    print(_banner("Ideal"))
    print(f"  n = {ideal.n}, generators {doc['ideal']['generators']}")
    print(_banner("Stanley-Reisner complex"))
    print(f"  facets {doc['complex']['facets']}")
    print(_banner("Alexander dual"))
    print(f"  generators {dual}" if dual is not None else "  undefined for the zero ideal")
    print(_banner("Primary decomposition"))
    print(f"  primes {doc['primary_decomposition']}")
    return 0


def cmd_verify(config: RunConfig) -> int:
    from verify import verify_corpus   # Import here so pool workers stay light.
    report, code = verify_corpus(config)
    if config.output_format == "json":
        print(json.dumps(report, indent=2))
    else:
        print(_banner(f"verify {report['family']} n={report['n']} count={report['count']} seed={report['seed']}"))
        print(f"  verified: {report['verified']} / {report['count']}")
        print(f"  trivial tables: {report['trivial']}, CM: {report['is_cm']}, "
              f"sequentially CM: {report['is_seq_cm']}, CCM: {report['is_ccm']}")
        print(f"  converse witnesses: {len(report['converse_witnesses'])}, non-CCM: {len(report['non_ccm_witnesses'])}")
        for name, counts in report["checks"].items():
            print(f"  {name}: " + ", ".join(f"{k} {v}" for k, v in counts.items()))
    for failure in report["failures"]:
        # Echo the offending ideal so the failure can be reproduced with `classify`.
        print(f"Error: element #{failure['index']} {failure['error']['type']}: {failure['error']['message']}", file=sys.stderr)
        print(f"  reproduce with: {failure['ideal']}", file=sys.stderr)
    return code


COMMANDS = {
    "table": cmd_table,
    "classify": cmd_classify,
    "duals": cmd_duals,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    """Entry point. Returns the process exit code."""
    load_environment()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:   # argparse: 0 for --help, 2 for usage errors.
        return int(e.code or 0)
    setup_logging(args.verbose)
    try:
        config = build_run_config(args)
        return COMMANDS[config.command](config)
    except ImplicationFailure as e:
        print(f"Error: implication failed: {e}", file=sys.stderr)
        print(json.dumps(e.state, indent=2, default=str), file=sys.stderr)
        return e.exit_code
    except LyutabError as e:
        print(f"Error: {e}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        print(f"Error: {e}\n\n{traceback.format_exc()}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
