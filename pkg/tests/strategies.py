"""Hypothesis strategies shared by the test modules."""

from fractions import Fraction

from hypothesis import strategies as st

from kronred.linalg import RatMatrix
from kronred.zmod import IntMatrix

small_fractions = st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3))


@st.composite
def rat_matrices(draw, max_dim=5, rows=None, cols=None, entries=small_fractions):
    m = draw(st.integers(0, max_dim)) if rows is None else rows
    n = draw(st.integers(0, max_dim)) if cols is None else cols
    # sparse entries make rank deficiency common
    cell = st.one_of(st.just(Fraction(0)), entries)
    data = draw(st.lists(cell, min_size=m * n, max_size=m * n))
    return RatMatrix(m, n, data)


@st.composite
def pencils(draw, max_dim=5, square=False):
    m = draw(st.integers(0, max_dim))
    n = m if square else draw(st.integers(0, max_dim))
    return draw(rat_matrices(rows=m, cols=n)), draw(rat_matrices(rows=m, cols=n))


@st.composite
def int_matrices(draw, max_dim=4, rows=None, cols=None, bound=6):
    m = draw(st.integers(0, max_dim)) if rows is None else rows
    n = draw(st.integers(0, max_dim)) if cols is None else cols
    data = draw(st.lists(st.integers(-bound, bound), min_size=m * n, max_size=m * n))
    return IntMatrix(m, n, data)
