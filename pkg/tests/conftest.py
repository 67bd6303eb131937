import pathlib

import pytest

from mcforge.config import EngineConfig
from mcforge.fetch import fetch_ontology

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> pathlib.Path:
    return FIXTURES


@pytest.fixture
def ontology_path() -> pathlib.Path:
    return FIXTURES / "mini-mcro.ttl"


@pytest.fixture
def manifest_path() -> pathlib.Path:
    return FIXTURES / "sample-card.json"


@pytest.fixture
def engine_config(tmp_path) -> EngineConfig:
    return EngineConfig(cache_dir=str(tmp_path / "cache"))


@pytest.fixture
def fixture_handle(ontology_path, tmp_path):
    return fetch_ontology(str(ontology_path), cache_dir=str(tmp_path / "cache"))
