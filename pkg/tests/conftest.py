import random
from pathlib import Path

import pytest

from qnsigma.poset import build_poset
from qnsigma.qn import join, meet

DATA = Path(__file__).parent / "data"
TREES = Path(__file__).parent.parent / "src" / "qnsigma" / "trees"


def edges(text):
    return [tuple(tok) for tok in text.split()]


S1_LABELS = "abcdefmi"
S1_EDGES = "ad am be bm cf cm di ei fi mi"
S1_W = [join("a", "b", "m"), join("a", "c", "m"), join("b", "c", "m"),
        meet("d", "m", "a"), meet("e", "m", "b"), meet("f", "m", "c"),
        join("d", "m", "i"), join("e", "m", "i"), join("f", "m", "i")]


@pytest.fixture
def s1():
    return build_poset(S1_LABELS, edges(S1_EDGES)), list(S1_W)


@pytest.fixture
def rng():
    return random.Random(20190817)


@pytest.fixture
def sample_text():
    return (DATA / "LmQ4_sample.txt").read_text()


def corpus_doc(stem):
    from qnsigma.corpus import corpus_dir
    from qnsigma.textio import parse_document
    return parse_document((corpus_dir() / f"{stem}.txt").read_bytes())


def corpus_job(stem, name):
    return next(j for j in corpus_doc(stem).jobs if j.name == name)


def closed(job):
    from qnsigma.qn import close
    from qnsigma.textio import build_job
    return close(*build_job(job))
