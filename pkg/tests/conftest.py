import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from knotgate.fpgroup import Word

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def words(n_gens=2, max_size=12):
    letter = st.tuples(st.integers(0, n_gens - 1), st.sampled_from((1, -1)))
    return st.lists(letter, max_size=max_size).map(lambda ls: Word(tuple(ls)))


def unit_quaternions():
    vec = st.lists(st.floats(-1, 1, allow_nan=False), min_size=4, max_size=4)
    return vec.filter(lambda v: np.linalg.norm(v) > 1e-3).map(lambda v: np.array(v) / np.linalg.norm(v))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
