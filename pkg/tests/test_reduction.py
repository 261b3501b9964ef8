import pytest
from hypothesis import given

from kronred.blocks import make_block
from kronred.errors import UnsupportedBackend
from kronred.linalg import RatMatrix, Subspace, rank
from kronred.reduction import (PencilSystem, control, control_reduce, coupling_split,
                               identified, observe, observe_reduce, pline, prline,
                               reduce_grid, rline)
from kronred.zmod import AbInvariants, IntMatrix, Lattice

from strategies import pencils

M = RatMatrix.from_rows
N2 = PencilSystem.rational([[0, 1], [0, 0]], [[1, 0], [0, 1]])
L1 = PencilSystem.rational(*make_block("L", 1))
LT1 = PencilSystem.rational(*make_block("LT", 1))
ZERO = PencilSystem.rational([[0]], [[0]])
TIMES2 = PencilSystem.integer([[2]], [[1]])


def regular(n=2):
    return PencilSystem.rational(RatMatrix.identity(n), M([[1, 2], [3, 4]]) if n == 2
                                 else RatMatrix.zeros(n, n))


# -- defect maps --------------------------------------------------------------

def test_pline_examples():
    assert pline(N2) == M([[0, 1]])
    assert pline(regular()).shape == (0, 2)
    assert pline(ZERO) == M([[0]])


def test_rline_examples():
    assert rline(N2) == M([[1], [0]])
    assert rline(L1).shape == (2, 0)
    assert rline(ZERO) == M([[0]])


def test_prline_examples():
    assert prline(N2) == M([[0]])
    assert prline(PencilSystem.rational(RatMatrix.zeros(2, 2), RatMatrix.identity(2))) \
        == RatMatrix.identity(2)
    assert prline(regular()).shape == (0, 0)


# -- single reductions --------------------------------------------------------

def test_observe_nilpotent():
    out = observe_reduce(N2)
    r = out.reduced
    assert (r.E, r.A) == (M([[0]]), M([[1]]))
    assert r.U.top == Subspace.span([[1, 0]], 2)
    assert out.pline_coker == 0 and out.prline_image == 0 and out.changed


def test_observe_l_block():
    out = observe_reduce(L1)
    r = out.reduced
    assert r.domain_invariant == 0 and r.W.top == Subspace.span([[1, 0]], 2)
    assert r.E.shape == (1, 0)
    assert out.pline_coker == 0


def test_observe_regular_is_stable():
    sys = regular()
    out = observe_reduce(sys)
    assert not out.changed and out.reduced.same_spaces(sys)
    assert (out.reduced.E, out.reduced.A) == (sys.E, sys.A)


def test_control_zero():
    out = control_reduce(ZERO)
    assert out.reduced.domain_invariant == 0 and out.reduced.codomain_invariant == 1
    assert out.rline_ker == 1


def test_control_injective_is_stable():
    assert not control_reduce(L1).changed


def test_integer_times_two():
    out = control_reduce(TIMES2)
    assert out.reduced.domain_invariant == AbInvariants(1, ())
    assert out.reduced.codomain_invariant == AbInvariants(1, ())
    assert not out.changed
    # observation keeps shrinking: U^o = 2Z, then 4Z, ...
    r = observe(TIMES2, 3)
    assert r.U.top == Lattice.span([[8]], 1) and r.W.top == Lattice.span([[8]], 1)
    assert r.domain_invariant == AbInvariants(1, ())


def test_integer_relations_must_be_respected():
    from kronred.errors import NotAMorphism
    with pytest.raises(NotAMorphism):
        PencilSystem.integer([[1]], [[1]], IntMatrix.from_rows([[2]]), None)
    sys = PencilSystem.integer([[1]], [[1]], IntMatrix.from_rows([[2]]),
                               IntMatrix.from_rows([[2]]))
    assert sys.domain_invariant == AbInvariants(0, (2,))


# -- grids --------------------------------------------------------------------

def test_grid_nilpotent():
    g = reduce_grid(N2, 2, 2)
    assert g[1][0].shape == g[0][1].shape == (1, 1)
    assert g[1][1].shape == (0, 0)
    assert g[1][1].identified_with(control(observe(N2)))
    assert g[1][1].identified_with(observe(control(N2)))


def test_grid_regular():
    sys = regular()
    for row in reduce_grid(sys, 3, 3):
        for cell in row:
            assert cell.same_spaces(sys)


def test_grid_direct_sum():
    E = RatMatrix.block_diag([make_block("L", 1)[0], make_block("LT", 1)[0]])
    A = RatMatrix.block_diag([make_block("L", 1)[1], make_block("LT", 1)[1]])
    total = reduce_grid(PencilSystem.rational(E, A), 2, 2)
    a, b = reduce_grid(L1, 2, 2), reduce_grid(LT1, 2, 2)
    for i in range(3):
        for j in range(3):
            assert total[i][j].shape == (a[i][j].shape[0] + b[i][j].shape[0],
                                         a[i][j].shape[1] + b[i][j].shape[1])


# -- splittings ---------------------------------------------------------------

def test_coupling_split_examples():
    s = coupling_split(N2)
    assert s.coker_Eo.dim == s.coim_pE.dim == 1
    s = coupling_split(regular())
    assert all(x.dim == 0 for x in (s.coker_Eo, s.coim_pE, s.coim_prline,
                                    s.im_pline, s.coker_pline))
    s = coupling_split(ZERO)
    assert s.coker_pline == Subspace.full(1) and s.coim_prline.dim == 0
    assert ZERO.inv(ZERO.ker_rline) == 1
    with pytest.raises(UnsupportedBackend):
        coupling_split(TIMES2)


# -- properties ---------------------------------------------------------------

@given(pencils())
def test_defects_match_rank_formulas(pair):
    E, A = pair
    sys = PencilSystem.rational(E, A)
    m, n = E.shape
    out = observe_reduce(sys)
    rEA = rank(E.hstack(A))
    assert out.pline_coker == m - rEA
    assert control_reduce(sys).rline_ker == n - rank(E.vstack(A))
    K = sys.ker_E.top.inclusion()
    assert out.prline_image == rank(E.hstack(A @ K)) - rank(E)
    assert out.reduced.domain_invariant == n - (rEA - rank(E))
    assert out.reduced.codomain_invariant == rank(E)


@given(pencils())
def test_reduced_maps_are_restrictions(pair):
    sys = PencilSystem.rational(*pair)
    r = observe(sys)
    U = r.U.top.inclusion()
    # E^o and A^o in the chosen bases agree with E and A on U^o
    W = r.W.top.inclusion()
    assert W @ r.E == sys.E_ambient @ U
    assert W @ r.A == sys.A_ambient @ U


@given(pencils(max_dim=4))
def test_grid_commutes(pair):
    reduce_grid(PencilSystem.rational(*pair), 3, 3)


@given(pencils(max_dim=4))
def test_identified_is_reflexive(pair):
    sys = PencilSystem.rational(*pair)
    for sq in (sys.ker_E, sys.coker_E, sys.coim_prline, sys.im_prline):
        assert identified(sq, sq)


@given(pencils())
def test_coupling_split_fills_spaces(pair):
    sys = PencilSystem.rational(*pair)
    s = coupling_split(sys)
    m, n = pair[0].shape
    assert s.U_o.dim + s.coim_pE.dim + s.coim_prline.dim == n
    assert s.W_o.dim + s.im_pline.dim + s.coker_pline.dim == m
