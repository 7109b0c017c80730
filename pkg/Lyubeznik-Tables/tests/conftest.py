import os
import sys

import pytest

_COMPONENT_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if _COMPONENT_DIR not in sys.path:
    sys.path.insert(0, _COMPONENT_DIR)

from complexes import load_document  # noqa: E402
from linalg import FieldSpec  # noqa: E402

INPUTS_DIR = os.path.join(_COMPONENT_DIR, "inputs")


def input_path(name: str) -> str:
    return os.path.join(INPUTS_DIR, name)


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    """Shell settings must not leak into the suite."""
    for key in list(os.environ):
        if key.startswith("LYUTAB_"):
            monkeypatch.delenv(key)


@pytest.fixture
def qq():
    return FieldSpec(0)


@pytest.fixture
def gf2():
    return FieldSpec(2)


@pytest.fixture
def two_planes():
    return load_document(input_path("two_planes.json"))[0]


@pytest.fixture
def tree():
    return load_document(input_path("tree.json"))[0]


@pytest.fixture
def nine_vars():
    return load_document(input_path("nine_vars.json"))[0]


@pytest.fixture
def irrelevant():
    return load_document(input_path("irrelevant.json"))[0]


@pytest.fixture
def rp2():
    return load_document(input_path("rp2.json"))[0]
