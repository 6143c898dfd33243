import random

import hypothesis
import pytest
from hypothesis import strategies as st

from amity import Digraph

hypothesis.settings.register_profile(
    "suite", deadline=None, max_examples=60, derandomize=True
)
hypothesis.settings.load_profile("suite")


@st.composite
def digraphs(draw, min_n=0, max_n=8):
    """Arbitrary small digraphs, any out-degrees."""
    n = draw(st.integers(min_n, max_n))
    rows = []
    for v in range(n):
        others = [w for w in range(n) if w != v]
        if others:
            row = draw(
                st.lists(st.sampled_from(others), unique=True, max_size=len(others))
            )
        else:
            row = []
        rows.append(row)
    return Digraph(n, rows)


@st.composite
def regular_out_digraphs(draw, min_n=4, max_n=8, d=2):
    """Digraphs where every vertex has exactly d out-neighbors."""
    n = draw(st.integers(max(min_n, d + 1), max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = random.Random(seed)
    rows = [sorted(rng.sample([w for w in range(n) if w != v], d))
            for v in range(n)]
    return Digraph(n, rows)


@pytest.fixture
def rng():
    return random.Random(0xA717)
