import pytest

from qnsigma import errors
from qnsigma.counter import count_subuniverses
from qnsigma.oracle import (
    RandomInstanceSpec, naive_close, naive_count, random_instance,
)
from qnsigma.poset import least_upper_bound
from qnsigma.qn import Kind, close, validate_constraints
from qnsigma.textio import build_job

from conftest import corpus_doc


def test_deterministic():
    spec = RandomInstanceSpec(n=7, constraint_count=4, seed=11)
    a, b = random_instance(spec), random_instance(spec)
    assert a[0] == b[0] and a[1] == b[1] and a[2] == b[2]


def test_no_constraints():
    P, W, _ = random_instance(RandomInstanceSpec(constraint_count=0, seed=3))
    assert W == ()
    assert naive_count(close(P, W)) == 2 ** P.n


def test_exhaustion():
    with pytest.raises(errors.GenerationExhausted):
        random_instance(RandomInstanceSpec(n=2, constraint_count=1, max_tries=5))


def test_draws_are_true_bounds():
    for seed in range(500):
        spec = RandomInstanceSpec(n=3 + seed % 6, constraint_count=seed % 5, seed=seed)
        try:
            P, W, _ = random_instance(spec)
        except errors.GenerationExhausted:
            continue
        assert validate_constraints(P, W) == W
        for c in W:
            if c.kind is Kind.JOIN:
                assert least_upper_bound(P, P.index(c.left), P.index(c.right)) == P.index(c.result)


def test_naive_count_limit():
    P, W, _ = random_instance(RandomInstanceSpec(n=3, constraint_count=0))
    with pytest.raises(errors.TooLarge):
        naive_count(close(P, W), limit=2)


@pytest.mark.parametrize("stem", ["LmSi", "LmQ4", "LmT2"])
def test_agrees_on_corpus_files(stem):
    for job in corpus_doc(stem).jobs:
        P, W = build_job(job)
        fast, slow = close(P, W), naive_close(P, W)
        assert (fast.joins, fast.meets) == (slow.joins, slow.meets)
        assert count_subuniverses(fast) == naive_count(slow)
