from pathlib import Path

import pytest

from obsolens.corpus import parse_vertical
from obsolens.index import build_index

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def corpus_bytes() -> bytes:
    return (FIXTURES / "corpus.vert").read_bytes()


@pytest.fixture(scope="session")
def documents(corpus_bytes):
    return parse_vertical(corpus_bytes)


@pytest.fixture(scope="session")
def corpus_index(documents):
    return build_index(documents)
