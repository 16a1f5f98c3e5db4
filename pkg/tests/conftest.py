import numpy as np
import pytest
from hypothesis import strategies as st

from dtwlb.data import znorm


def random_series(rng, length, kind="walk"):
    if kind == "walk":
        return np.cumsum(rng.normal(size=length))
    if kind == "znorm":
        return znorm(np.cumsum(rng.normal(size=length)))
    if kind == "ints":
        return rng.integers(-3, 4, size=length).astype(float)
    return rng.normal(size=length)


def random_pairs(seed, count, lengths, kinds=("walk", "gauss", "ints", "znorm")):
    """Yield ``(a, b, w_eff)`` with mixed value distributions and windows."""
    rng = np.random.default_rng(seed)
    lo, hi = lengths
    for k in range(count):
        n = int(rng.integers(lo, hi + 1))
        kind = kinds[k % len(kinds)]
        a = random_series(rng, n, kind)
        b = random_series(rng, n, kind)
        yield a, b, int(rng.integers(0, n))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


finite = st.floats(min_value=-100, max_value=100, allow_nan=False, allow_infinity=False, width=64)


@st.composite
def series_pair(draw, min_len=1, max_len=12):
    n = draw(st.integers(min_len, max_len))
    a = draw(st.lists(finite, min_size=n, max_size=n))
    b = draw(st.lists(finite, min_size=n, max_size=n))
    w = draw(st.integers(0, n - 1))
    return np.array(a), np.array(b), w
