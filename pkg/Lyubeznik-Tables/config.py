"""
Run configuration for the lyutab CLI.

Priority for every setting: (1) command-line flag, (2) environment variable (or .env),
(3) built-in default.

  LYUTAB_CACHE_DIR         cache directory (unset: no cache)
  LYUTAB_CHAR              characteristic of the coefficient field (0)
  LYUTAB_FORMAT            text | json (text)
  LYUTAB_JOBS              worker processes (all cores)
  LYUTAB_MAX_VARS          largest n accepted for Ext work (12)
  LYUTAB_CHECK_INVARIANTS  1 = assert d^2 = 0 and commuting squares everywhere (1)
  LYUTAB_LOG_LEVEL         logging level when no -v is given (WARNING)
"""
import logging
import os
import sys
from dataclasses import dataclass

from corpus import CorpusSpec
from errors import ParseError
from linalg import FieldSpec
from lyub import DEFAULT_MAX_VARS

_THIS_DIR = os.path.dirname(os.path.abspath(__file__))

FORMATS = ("text", "json")
COMMANDS = ("table", "classify", "verify", "duals")


def load_environment() -> None:
    """Read Lyubeznik-Tables/.env if python-dotenv is installed; shell values win."""
    try:
        from dotenv import load_dotenv
        load_dotenv(os.path.join(_THIS_DIR, ".env"), override=False)
    except ImportError:
        pass


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"{name} must be an integer, got {raw!r}") from None


def _pick(flag, env_name: str, default):
    if flag is not None:
        return flag
    raw = os.environ.get(env_name)
    return raw if raw not in (None, "") else default


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: str | None
    field: FieldSpec
    output_format: str
    seed: int | None
    jobs: int
    cache_dir: str | None
    check_invariants: bool
    max_vars: int
    quiet: bool = False
    corpus: CorpusSpec | None = None


def build_run_config(args) -> RunConfig:
    """Merge parsed arguments with the environment and validate the result."""
    command = args.command
    if command not in COMMANDS:
        raise ParseError(f"unknown command '{command}'")

    char_flag = getattr(args, "char", None)
    characteristic = char_flag if char_flag is not None else _env_int("LYUTAB_CHAR", 0)
    fld = FieldSpec(characteristic)

    output_format = _pick(getattr(args, "format", None), "LYUTAB_FORMAT", "text")
    if output_format not in FORMATS:
        raise ParseError(f"output format must be one of {', '.join(FORMATS)}, got {output_format!r}")

    jobs_flag = getattr(args, "jobs", None)
    jobs = jobs_flag if jobs_flag is not None else _env_int("LYUTAB_JOBS", os.cpu_count() or 1)
    if jobs < 1:
        raise ParseError(f"--jobs must be at least 1, got {jobs}")

    cache_dir = _pick(getattr(args, "cache", None), "LYUTAB_CACHE_DIR", None)
    check = _env_int("LYUTAB_CHECK_INVARIANTS", 1) != 0
    max_vars = _env_int("LYUTAB_MAX_VARS", DEFAULT_MAX_VARS)

    input_path = getattr(args, "file", None)
    seed = getattr(args, "seed", None)
    corpus = None
    if command == "verify":
        if seed is None:
            raise ParseError("verify needs --seed so the corpus is reproducible")
        if args.family is None or args.n is None:
            raise ParseError("verify needs --family and --n")
        corpus = CorpusSpec(args.family, args.n, args.count, args.q)
    elif input_path is None:
        raise ParseError(f"{command} needs an input FILE")

    return RunConfig(
        command=command,
        input_path=input_path,
        field=fld,
        output_format=output_format,
        seed=seed,
        jobs=jobs,
        cache_dir=cache_dir,
        check_invariants=check,
        max_vars=max_vars,
        quiet=bool(getattr(args, "quiet", False)),
        corpus=corpus,
    )


def setup_logging(verbosity: int = 0) -> None:
    """One stderr handler for the whole process; -v = INFO, -vv = DEBUG."""
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        name = os.environ.get("LYUTAB_LOG_LEVEL", "WARNING").upper()
        level = getattr(logging, name, logging.WARNING)
        if not isinstance(level, int):
            level = logging.WARNING
    root = logging.getLogger()
    # main() may run several times in one process; the old stderr may already be closed,
    # so the previous handler is dropped without flushing it.
    for old in [h for h in root.handlers if getattr(h, "_lyutab", False)]:
        root.removeHandler(old)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    handler._lyutab = True
    root.addHandler(handler)
    root.setLevel(level)
