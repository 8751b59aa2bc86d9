import os

import pytest

CORPUS = os.path.join(os.path.dirname(__file__), "corpus")


@pytest.fixture
def corpus_dir() -> str:
    return CORPUS


def corpus_path(name: str) -> str:
    return os.path.join(CORPUS, name)


def read_corpus(name: str) -> str:
    with open(corpus_path(name), "r", encoding="utf-8") as fh:
        return fh.read()


@pytest.fixture
def square_pgm(tmp_path):
    """A writable 4x4 probe image."""
    path = tmp_path / "probe.pgm"
    rows = ["0 85 170 255", "255 170 85 0", "0 0 0 0", "255 255 255 255"]
    path.write_text("P2\n4 4\n255\n" + "\n".join(rows) + "\n")
    return str(path)
