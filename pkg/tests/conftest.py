import pathlib
import shutil

import pytest

CORPUS = pathlib.Path(__file__).parent / "corpus"


@pytest.fixture
def corpus_dir():
    return CORPUS


@pytest.fixture
def workdir(tmp_path):
    """Temp directory pre-loaded with the corpus files."""
    for entry in CORPUS.iterdir():
        shutil.copy(entry, tmp_path / entry.name)
    return tmp_path
