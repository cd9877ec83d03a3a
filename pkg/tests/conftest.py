import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for the oracle module

from dagsched import load_dag, load_resources, validate  # noqa: E402

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def diamond_dag():
    dag = load_dag(DATA / "diamond.json")
    assert validate(dag) == []
    return dag


@pytest.fixture
def single_dag():
    dag = load_dag(DATA / "single.json")
    assert validate(dag) == []
    return dag


@pytest.fixture
def pair_specs():
    return load_resources(DATA / "resources_pair.json")


@pytest.fixture
def single400_specs():
    return load_resources(DATA / "resources_single400.json")
