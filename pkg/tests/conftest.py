from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # oracles.py

from microkg import corpus_io, pipeline

GOLDEN = Path(__file__).parent / "fixtures" / "golden"
EXPECTED = GOLDEN / "expected"


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN


@pytest.fixture(scope="session")
def golden_posts():
    return corpus_io.load_posts(GOLDEN / "posts.jsonl")


@pytest.fixture(scope="session")
def golden_first_pass():
    return corpus_io.load_conllu(GOLDEN / "first_pass.conllu")


@pytest.fixture(scope="session")
def golden_second_pass():
    return corpus_io.load_conllu(GOLDEN / "second_pass.conllu")


@pytest.fixture(scope="session")
def golden_coref():
    return corpus_io.load_coref(GOLDEN / "coref.jsonl")


@pytest.fixture(scope="session")
def golden_vectors():
    return corpus_io.load_word_vectors(GOLDEN / "vectors.txt")


@pytest.fixture(scope="session")
def golden_run(tmp_path_factory) -> Path:
    """One full pipeline run over the golden corpus, shared by the suite."""
    out = tmp_path_factory.mktemp("golden_run")
    cfg = pipeline.load_config(GOLDEN / "golden.cfg")
    cfg.out_dir = out
    pipeline.stage_normalize(cfg)
    pipeline.stage_extract(cfg)
    pipeline.stage_refine_emit(cfg)
    return out
