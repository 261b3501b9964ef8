from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from kronred.errors import NonSquare, ShapeMismatch, Singular
from kronred.linalg import (RatMatrix, Subspace, det, det_poly, image, intersect,
                            inverse, kernel, poly_eval, preimage, quotient, rank,
                            rational_roots, restrict, solve, sum as span_sum)

from strategies import rat_matrices

M = RatMatrix.from_rows
N2 = M([[0, 1], [0, 0]])
I2 = RatMatrix.identity(2)
e1 = Subspace.span([[1, 0]], 2)
e2 = Subspace.span([[0, 1]], 2)


def sym(m):
    return sympy.Matrix(m.rows, m.cols, [sympy.Rational(x.numerator, x.denominator)
                                         for x in m.entries])


# -- worked examples ----------------------------------------------------------

def test_rank_examples():
    assert rank(I2) == 2
    assert rank(M([[0]])) == 0
    assert rank(N2) == 1


def test_kernel_examples():
    assert kernel(N2) == e1
    assert kernel(I2) == Subspace.zero(2)
    k = kernel(RatMatrix.zeros(1, 0))
    assert k.ambient_dim == 0 and k.dim == 0


def test_image_examples():
    assert image(M([[1], [0]])) == e1
    assert image(RatMatrix.zeros(2, 3)) == Subspace.zero(2)
    assert image(I2) == Subspace.full(2)


def test_quotient_examples():
    q = quotient(2, e1)
    assert q.matrix == M([[0, 1]])
    assert quotient(3, Subspace.zero(3)).matrix == RatMatrix.identity(3)
    assert quotient(3, Subspace.full(3)).matrix.shape == (0, 3)


def test_restrict_examples():
    assert restrict(I2, e1) == M([[1], [0]])
    assert restrict(N2, kernel(N2)) == M([[0], [0]])
    assert restrict(N2, Subspace.zero(2)).shape == (2, 0)


def test_lattice_examples():
    assert intersect(e1, e2) == Subspace.zero(2)
    assert span_sum(e1, e2) == Subspace.full(2)
    assert preimage(N2, e1) == Subspace.full(2)


def test_det_poly_examples():
    assert det_poly(N2, I2) == [1]
    assert det_poly(M([[0]]), M([[0]])) == []
    assert det_poly(I2, RatMatrix.zeros(2, 2)) == [0, 0, 1]


def test_empty_matrices_compose():
    a = RatMatrix.zeros(3, 0)
    b = RatMatrix.zeros(0, 2)
    assert (a @ b) == RatMatrix.zeros(3, 2)
    assert (b @ RatMatrix.zeros(2, 0)).shape == (0, 0)
    assert rank(a) == 0 and kernel(a).dim == 0 and kernel(b).dim == 2


def test_entries_are_canonical_fractions():
    m = M([["2/4", 3], [Fraction(-6, 4), "0"]])
    assert m[0, 0] == Fraction(1, 2) and m[1, 0].denominator == 2
    assert str(m[1, 0]) == "-3/2"


def test_errors():
    with pytest.raises(ShapeMismatch):
        M([[1, 2], [3]])
    with pytest.raises(ShapeMismatch):
        I2 @ RatMatrix.identity(3)
    with pytest.raises(NonSquare):
        det(RatMatrix.zeros(2, 3))
    with pytest.raises(Singular):
        inverse(N2)
    with pytest.raises(ShapeMismatch):
        intersect(e1, Subspace.full(3))


def test_rational_roots():
    # (2x - 1)(x + 3) x = 2x^3 + 5x^2 - 3x
    assert rational_roots([0, -3, 5, 2]) == [Fraction(-3), Fraction(0), Fraction(1, 2)]
    assert rational_roots([1, 0, 1]) == []
    with pytest.raises(ValueError):
        rational_roots([0, 0])


# -- properties against sympy ---------------------------------------------------

@given(rat_matrices())
def test_rank_matches_sympy(m):
    assert rank(m) == sym(m).rank()


@given(rat_matrices())
def test_rank_nullity(m):
    k = kernel(m)
    assert k.dim + rank(m) == m.cols
    assert (m @ k.inclusion()).is_zero()
    assert image(m).dim == rank(m)


@given(rat_matrices(max_dim=4).filter(lambda m: m.is_square()))
def test_det_matches_sympy(m):
    assert det(m) == (sym(m).det() if m.rows else 1)


@given(st.integers(0, 4).flatmap(
    lambda n: st.tuples(rat_matrices(rows=n, cols=n), rat_matrices(rows=n, cols=n))))
def test_det_poly_matches_sympy(pair):
    e, a = pair
    lam = sympy.Symbol("lam")
    expected = sympy.Poly((lam * sym(e) + sym(a)).det(), lam).all_coeffs()[::-1] \
        if e.rows else [1]
    expected = [Fraction(int(sympy.numer(c)), int(sympy.denom(c))) for c in expected]
    while expected and expected[-1] == 0:
        expected.pop()
    got = det_poly(e, a)
    assert got == expected
    for x in (-2, Fraction(1, 3), 5):
        assert poly_eval(got, x) == det(e.scale(x) + a)


@given(rat_matrices())
def test_quotient_map_contract(m):
    s = image(m)
    q = quotient(m.rows, s)
    assert rank(q.matrix) == q.matrix.rows == m.rows - s.dim
    assert (q.matrix @ s.inclusion()).is_zero()
    assert kernel(q.matrix) == s


@given(rat_matrices(rows=4), rat_matrices(rows=4))
def test_modular_lattice_laws(a, b):
    A, B = image(a), image(b)
    assert (A + B).dim + (A & B).dim == A.dim + B.dim
    assert A & B <= A <= A + B
    assert A + B == B + A and A & B == B & A
    # canonical bases: equal subspaces, equal representations
    assert Subspace.span(A.basis.to_rows()[::-1], 4) == A


@given(rat_matrices(rows=3, cols=4), rat_matrices(rows=3))
def test_preimage_and_mapped(m, t):
    S = image(t)
    P = preimage(m, S)
    assert P.mapped(m) <= S
    assert kernel(m) <= P
    assert P.dim == kernel(m).dim + (S & image(m)).dim


@given(rat_matrices(rows=3, cols=3), st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_solve(m, b):
    x = solve(m, b)
    consistent = rank(m.hstack(M([[v] for v in b]))) == rank(m)
    assert (x is not None) == consistent
    if x is not None:
        assert list((m @ RatMatrix.from_columns([x], 3)).col(0)) == b


@given(rat_matrices(rows=4), rat_matrices(rows=4))
def test_complement(a, b):
    inner = image(a)
    outer = inner + image(b)
    c = inner.complement_in(outer)
    assert c <= outer
    assert (c & inner).dim == 0 and (c + inner) == outer
