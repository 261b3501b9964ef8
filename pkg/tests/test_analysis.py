from fractions import Fraction

import pytest
from hypothesis import given, settings

from kronred.analysis import (analyze, defect_dimension_identities, defect_sequences,
                              delta_chain, index_zero_equivalences, indices,
                              kronecker_structure, observation_chain, resolvent)
from kronred.blocks import StructureSpec, assemble, make_block
from kronred.errors import UnsupportedBackend
from kronred.linalg import RatMatrix, det
from kronred.reduction import PencilSystem, observe
from kronred.samples import single_block_systems
from kronred.zmod import AbInvariants

from oracles import toeplitz_kronecker
from strategies import pencils

ZERO = PencilSystem.rational([[0]], [[0]])
N2 = PencilSystem.rational(*make_block("N", 2))
N3 = PencilSystem.rational(*make_block("N", 3))
L1 = PencilSystem.rational(*make_block("L", 1))
TIMES2 = PencilSystem.integer([[2]], [[1]])


def eye(n, A=None):
    return PencilSystem.rational(RatMatrix.identity(n), A or RatMatrix.zeros(n, n))


# -- defect sequences ---------------------------------------------------------

def test_defect_sequence_examples():
    d = defect_sequences(ZERO)
    assert (d.alpha, d.beta_obs, d.beta_ctl) == ((), (1,), (1,))
    d = defect_sequences(N2)
    assert (d.alpha, d.beta_obs, d.beta_ctl) == ((0, 1), (0, 0), (0, 0))
    d = defect_sequences(eye(3))
    assert (d.alpha, d.beta_obs, d.beta_ctl) == ((), (), ())


@pytest.mark.parametrize("k", range(1, 6))
def test_nilpotent_block_defect(k):
    d = defect_sequences(PencilSystem.rational(*make_block("N", k)))
    assert d.alpha == (0,) * (k - 1) + (1,)
    assert not any(d.beta_obs) and not any(d.beta_ctl)


@pytest.mark.parametrize("k", range(0, 6))
def test_l_block_defects(k):
    d = defect_sequences(PencilSystem.rational(*make_block("L", k)))
    assert d.beta_obs == (0,) * k + (1,) and not any(d.beta_ctl) and d.alpha == ()
    d = defect_sequences(PencilSystem.rational(*make_block("LT", k)))
    assert d.beta_ctl == (0,) * k + (1,) and not any(d.beta_obs) and d.alpha == ()


# -- indices ------------------------------------------------------------------

def test_index_examples():
    r = indices(eye(2))
    assert (r.obs_index, r.ctl_index) == (0, 0)
    r = indices(L1)
    assert (r.obs_index, r.ctl_index) == (2, 0)


def test_index_cap_over_integers():
    r = indices(TIMES2)
    assert r.obs_index == "≥32" and r.ctl_index == 0
    assert indices(TIMES2, cap=5).obs_index == "≥5"
    d = defect_sequences(TIMES2)
    assert d.truncated_at == 32
    assert all(x == AbInvariants() for x in d.beta_obs)


def test_index_zero_examples():
    assert all(index_zero_equivalences(PencilSystem.rational([[1, 0]], [[0, 1]]))["observation"])
    assert not any(index_zero_equivalences(ZERO)["observation"])
    assert all(index_zero_equivalences(L1)["control"])


@given(pencils())
def test_index_laws(pair):
    sys = PencilSystem.rational(*pair)
    r = indices(sys)
    if r.obs_index >= 1:
        assert indices(observe(sys)).obs_index == r.obs_index - 1
    index_zero_equivalences(sys)


# -- Kronecker structure ------------------------------------------------------

def test_kronecker_examples():
    spec = StructureSpec({2: 1}, {1: 1}, {1: 1}, core_dim=3, seed=11)
    k = kronecker_structure(assemble(spec).system)
    assert k.counts() == ({2: 1}, {1: 1}, {1: 1}, 3)
    A = RatMatrix.from_rows([[1, 2, 0], [0, 1, 5], [7, 0, 0]])
    k = kronecker_structure(eye(3, A))
    assert k.counts() == ({}, {}, {}, 3)
    assert k.core_A == A
    assert kronecker_structure(ZERO).counts() == ({}, {0: 1}, {0: 1}, 0)


def test_core_is_equivalent():
    spec = StructureSpec({1: 1}, {}, {2: 1}, core_dim=2, seed=4)
    built = assemble(spec)
    k = kronecker_structure(built.system)
    # the core pencil has the chosen spectrum: det(lam E + A) vanishes at -root
    for r in built.core_roots:
        assert det(k.core_E.scale(-r) + k.core_A) == 0


def test_kronecker_rejects_integers():
    with pytest.raises(UnsupportedBackend):
        kronecker_structure(TIMES2)


@settings(max_examples=40)
@given(pencils(max_dim=5))
def test_kronecker_matches_toeplitz_oracle(pair):
    sys = PencilSystem.rational(*pair)
    assert kronecker_structure(sys).counts() == toeplitz_kronecker(*pair)


# -- delta chain --------------------------------------------------------------

def test_delta_chain_examples():
    assert delta_chain(L1) == [(1, 1), (0, 1)]
    assert delta_chain(eye(3)) == []
    assert delta_chain(N3) == [(1, 1)] * 3


@given(pencils())
def test_delta_chain_sums(pair):
    sys = PencilSystem.rational(*pair)
    chain = observation_chain(sys)
    delta = delta_chain(sys)
    end = chain.at(chain.index)
    assert sum(du for du, _ in delta) == sys.domain_invariant - end.domain_invariant
    assert sum(dw for _, dw in delta) == sys.codomain_invariant - end.codomain_invariant


# -- resolvent ----------------------------------------------------------------

def test_resolvent_examples():
    r = resolvent(N2)
    assert r.kind == "all" and r.contains(Fraction(7, 3))
    r = resolvent(ZERO)
    assert r.kind == "empty"
    assert r.blocking_defect == {"defect": "beta_obs", "depth": 0}
    r = resolvent(TIMES2)
    assert r.kind == "finite_set" and r.certificate == (-1, 0)
    assert r.contains(0) and r.contains(-1) and not r.contains(1)


def test_cofinite_resolvent():
    sys = eye(2, RatMatrix.from_rows([[1, 0], [0, -2]]))
    r = resolvent(sys)
    assert r.kind == "cofinite"
    assert r.excluded == (Fraction(-1), Fraction(2))
    assert not r.contains(2) and r.contains(0)


def test_integer_resolvent_needs_free_groups():
    from kronred.zmod import IntMatrix
    rel = IntMatrix.from_rows([[4]])
    with pytest.raises(UnsupportedBackend):
        resolvent(PencilSystem.integer([[1]], [[1]], rel, rel))


@given(pencils(max_dim=4, square=True))
def test_resolvent_alternative(pair):
    sys = PencilSystem.rational(*pair)
    r = resolvent(sys)
    d = defect_sequences(sys)
    blocked = any(d.beta_obs) or any(d.beta_ctl)
    assert (r.kind == "empty") == blocked
    for lam in range(-3, 4):
        invertible = det(pair[0].scale(lam) + pair[1]) != 0
        assert r.contains(lam) == invertible


# -- dimension identities -----------------------------------------------------

def test_identity_examples():
    rec = defect_dimension_identities(ZERO)
    assert (rec["alpha1"], rec["beta_obs"]) == (0, 1)
    rec = defect_dimension_identities(eye(2))
    assert (rec["alpha1"], rec["beta_obs"], rec["beta_ctl"]) == (0, 0, 0)
    assert defect_dimension_identities(N2)["alpha1"] == 0


@given(pencils(max_dim=6))
def test_identities_hold(pair):
    defect_dimension_identities(PencilSystem.rational(*pair))


# -- analyze ------------------------------------------------------------------

def test_analyze_warns_on_truncation():
    rep = analyze(TIMES2, analyses=["indices", "defects"])
    assert rep.warnings == ["observation chain truncated at depth 32"]
    with pytest.raises(UnsupportedBackend):
        analyze(TIMES2, analyses=["strangeness"])
    with pytest.raises(ValueError):
        analyze(N2, analyses=["eigenvalues"])


@pytest.mark.parametrize("name", sorted(single_block_systems()))
def test_single_blocks_full_analysis(name):
    sys = single_block_systems()[name]
    rep = analyze(sys)
    kind, k = name.rstrip("0123456789"), int(name.lstrip("LTN"))
    nil, lb, ltb, core = rep.kronecker.counts()
    expected = {"N": ({k: 1}, {}, {}, 0), "L": ({}, {k: 1}, {}, 0),
                "LT": ({}, {}, {k: 1}, 0)}[kind]
    assert (nil, lb, ltb, core) == expected
    assert rep.warnings == []
