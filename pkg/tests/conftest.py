import os

import pytest

from debatelink.corpus import load_corpus, load_portfolio_map
from debatelink.kb import load_dictionary_file, load_kb
from debatelink.role_linker import load_pattern_config

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


def data_path(name: str) -> str:
    return os.path.join(DATA_DIR, name)


@pytest.fixture(scope="session")
def corpus():
    return load_corpus(data_path("corpus.jsonl"))


@pytest.fixture(scope="session")
def kb():
    return load_kb(data_path("kb.jsonl"))


@pytest.fixture(scope="session")
def dictionary():
    return load_dictionary_file(data_path("parties.tsv"))


@pytest.fixture(scope="session")
def patterns():
    return load_pattern_config(data_path("patterns.json"))


@pytest.fixture(scope="session")
def portfolio_map():
    return load_portfolio_map(data_path("portfolio_map.tsv"))
