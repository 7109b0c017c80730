import io
import logging
from types import SimpleNamespace

import pytest

from config import build_run_config, setup_logging
from errors import ParseError


def lyutab_handlers():
    return [h for h in logging.getLogger().handlers if getattr(h, "_lyutab", False)]


@pytest.fixture
def restore_root_logger():
    root = logging.getLogger()
    level = root.level
    yield
    for h in lyutab_handlers():
        root.removeHandler(h)
    root.setLevel(level)


def test_setup_logging_survives_a_closed_stderr(monkeypatch, restore_root_logger):
    first = io.StringIO()
    monkeypatch.setattr("sys.stderr", first)
    setup_logging(0)
    first.close()

    second = io.StringIO()
    monkeypatch.setattr("sys.stderr", second)
    setup_logging(0)
    assert len(lyutab_handlers()) == 1
    logging.getLogger("lyutab.test").warning("still logging")
    assert "still logging" in second.getvalue()


def test_verbosity_levels(restore_root_logger, monkeypatch):
    setup_logging(2)
    assert logging.getLogger().level == logging.DEBUG
    setup_logging(1)
    assert logging.getLogger().level == logging.INFO
    monkeypatch.setenv("LYUTAB_LOG_LEVEL", "error")
    setup_logging(0)
    assert logging.getLogger().level == logging.ERROR


def args(**kwargs):
    base = dict(command="table", file="x.json", char=None, format=None, jobs=None, cache=None, quiet=False, seed=None)
    base.update(kwargs)
    return SimpleNamespace(**base)


def test_flags_beat_environment(monkeypatch):
    monkeypatch.setenv("LYUTAB_CHAR", "3")
    monkeypatch.setenv("LYUTAB_JOBS", "2")
    config = build_run_config(args())
    assert (config.field.characteristic, config.jobs) == (3, 2)
    config = build_run_config(args(char=5, jobs=1))
    assert (config.field.characteristic, config.jobs) == (5, 1)


def test_bad_settings_are_parse_errors(monkeypatch):
    with pytest.raises(ParseError):
        build_run_config(args(format="xml"))
    with pytest.raises(ParseError):
        build_run_config(args(jobs=0))
    with pytest.raises(ParseError):
        build_run_config(args(file=None))
    monkeypatch.setenv("LYUTAB_MAX_VARS", "many")
    with pytest.raises(ParseError):
        build_run_config(args())
