"""Observation and control reductions of a pair of morphisms.

A :class:`PencilSystem` keeps the original ambient matrices ``E`` and
``A`` and records its domain and codomain as *subquotients* of the
original spaces: a pair ``(top, bottom)`` of subobjects with
``bottom <= top``.  Observation reduction shrinks tops (subobjects),
control reduction grows bottoms (quotients), and the reduced operators
are always the maps induced by the original ``E`` and ``A``.  Because
every reduced space sits inside the original ones, chain stabilization
and the commutation of the two reductions are exact lattice
comparisons.

The same code runs over Q (subspaces in reduced echelon form) and over Z
(lattices in Hermite form); the backend only supplies the lattice type,
the matrix type and the invariant of a quotient.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Sequence, Union

from .errors import (CommutationViolation, IllFormed, ShapeMismatch,
                     UnsupportedBackend)
from .linalg import RatMatrix, Subspace, lift_through, quotient
from .zmod import AbInvariants, AbMorphism, IntMatrix, Lattice, PresentedAb

__all__ = [
    "Backend",
    "RATIONAL",
    "INTEGER",
    "Subquotient",
    "PencilSystem",
    "ReductionOutcome",
    "CouplingSplit",
    "pline",
    "rline",
    "prline",
    "observe_reduce",
    "control_reduce",
    "reduce_grid",
    "coupling_split",
    "identified",
]

Space = Union[Subspace, Lattice]
Invariant = Union[int, AbInvariants]


@dataclass(frozen=True)
class Backend:
    name: str
    space: type
    matrix: type

    def invariant(self, top: Space, bottom: Space) -> Invariant:
        """Isomorphism invariant of ``top / bottom``."""
        if self.space is Subspace:
            return top.dim - bottom.dim
        return bottom.index_in(top)

    def zero_invariant(self) -> Invariant:
        return 0 if self.space is Subspace else AbInvariants()


RATIONAL = Backend("rational", Subspace, RatMatrix)
INTEGER = Backend("integer", Lattice, IntMatrix)
_BACKENDS = {"rational": RATIONAL, "integer": INTEGER}


@dataclass(frozen=True)
class Subquotient:
    """``top / bottom`` inside an ambient space; ``bottom <= top``."""

    top: Space
    bottom: Space

    @property
    def ambient_dim(self) -> int:
        return self.top.ambient_dim

    def is_trivial(self) -> bool:
        return self.top == self.bottom


def identified(a: Subquotient, b: Subquotient) -> bool:
    """True if the ambient identity induces an isomorphism ``a -> b``.

    The common part ``C = a.top & b.top`` must surject onto both
    quotients with the same kernel.
    """
    if a.ambient_dim != b.ambient_dim:
        return False
    if a == b:
        return True
    c = a.top & b.top
    return (c + a.bottom == a.top and c + b.bottom == b.top
            and (c & a.bottom) == (c & b.bottom))


# ---------------------------------------------------------------------------
# coordinate models of subquotients

def _rational_model(sq: Subquotient) -> tuple[RatMatrix, RatMatrix]:
    """(lift, coords): lift columns span a complement of bottom in top and
    ``coords @ lift == I``; ``coords`` kills ``bottom``."""
    q = quotient(sq.ambient_dim, sq.bottom).matrix
    image = sq.top.mapped(q)
    return lift_through(q, sq.top), q.select_rows(image.pivots)


def _integer_model(sq: Subquotient) -> PresentedAb:
    rels = [sq.top.coordinates(sq.bottom.basis.row(i)) for i in range(sq.bottom.dim)]
    k = sq.top.dim
    return PresentedAb(k, IntMatrix.from_columns(rels, k) if rels else IntMatrix.zeros(k, 0))


# ---------------------------------------------------------------------------
# systems

@dataclass(frozen=True)
class PencilSystem:
    """A pair (E, A) of parallel morphisms U -> W.

    ``E_ambient``/``A_ambient`` are the matrices of the original system;
    ``domain_embed``/``codomain_embed`` locate U and W as subquotients of
    the original domain and codomain.  ``E`` and ``A`` give the operators
    in a coordinate model of U and W (matrices over Q, morphisms of
    presented groups over Z).
    """

    backend: str
    E_ambient: Any
    A_ambient: Any
    domain_embed: Subquotient
    codomain_embed: Subquotient
    history: tuple[str, ...] = field(default=())

    # -- construction ------------------------------------------------------

    @classmethod
    def rational(cls, E, A) -> "PencilSystem":
        E = E if isinstance(E, RatMatrix) else _rat(E)
        A = A if isinstance(A, RatMatrix) else _rat(A)
        if E.shape != A.shape:
            raise ShapeMismatch(f"E is {E.shape} but A is {A.shape}")
        m, n = E.shape
        return cls("rational", E, A,
                   Subquotient(Subspace.full(n), Subspace.zero(n)),
                   Subquotient(Subspace.full(m), Subspace.zero(m)))

    @classmethod
    def integer(cls, E, A, domain_relations: IntMatrix | None = None,
                codomain_relations: IntMatrix | None = None) -> "PencilSystem":
        E = E if isinstance(E, IntMatrix) else _int(E)
        A = A if isinstance(A, IntMatrix) else _int(A)
        if E.shape != A.shape:
            raise ShapeMismatch(f"E is {E.shape} but A is {A.shape}")
        m, n = E.shape
        U = PresentedAb(n, domain_relations)
        W = PresentedAb(m, codomain_relations)
        return cls.from_morphisms(AbMorphism(U, W, E), AbMorphism(U, W, A))

    @classmethod
    def from_morphisms(cls, E: AbMorphism, A: AbMorphism) -> "PencilSystem":
        if E.domain != A.domain or E.codomain != A.codomain:
            raise ShapeMismatch("E and A must share domain and codomain")
        n, m = E.domain.generators, E.codomain.generators
        return cls("integer", E.matrix, A.matrix,
                   Subquotient(Lattice.full(n), E.domain.relation_lattice),
                   Subquotient(Lattice.full(m), E.codomain.relation_lattice))

    def _derived(self, domain: Subquotient, codomain: Subquotient,
                 tag: str) -> "PencilSystem":
        return PencilSystem(self.backend, self.E_ambient, self.A_ambient,
                            domain, codomain, self.history + (tag,))

    # -- basic data --------------------------------------------------------

    @property
    def kind(self) -> Backend:
        return _BACKENDS[self.backend]

    def inv(self, sq: Subquotient) -> Invariant:
        return self.kind.invariant(sq.top, sq.bottom)

    @property
    def domain_invariant(self) -> Invariant:
        return self.inv(self.domain_embed)

    @property
    def codomain_invariant(self) -> Invariant:
        return self.inv(self.codomain_embed)

    @property
    def shape(self) -> tuple:
        """(codomain invariant, domain invariant); dimensions over Q."""
        return (self.codomain_invariant, self.domain_invariant)

    def same_spaces(self, other: "PencilSystem") -> bool:
        return (self.domain_embed == other.domain_embed
                and self.codomain_embed == other.codomain_embed)

    def identified_with(self, other: "PencilSystem") -> bool:
        return (identified(self.domain_embed, other.domain_embed)
                and identified(self.codomain_embed, other.codomain_embed))

    # -- lattice quantities in the ambient spaces --------------------------

    @property
    def _Us(self):
        return self.domain_embed.top

    @property
    def _Ut(self):
        return self.domain_embed.bottom

    @property
    def _Ws(self):
        return self.codomain_embed.top

    @property
    def _Wt(self):
        return self.codomain_embed.bottom

    @cached_property
    def im_E_top(self) -> Space:
        """E(U) + W_bottom."""
        return self._Us.mapped(self.E_ambient) + self._Wt

    @cached_property
    def im_A_top(self) -> Space:
        return self._Us.mapped(self.A_ambient) + self._Wt

    @cached_property
    def ker_E_top(self) -> Space:
        """Elements of U_top that E sends into W_bottom."""
        return self._Us & self._Wt.preimage(self.E_ambient)

    @cached_property
    def ker_A_top(self) -> Space:
        return self._Us & self._Wt.preimage(self.A_ambient)

    @cached_property
    def ker_pline_top(self) -> Space:
        return self._Us & self.im_E_top.preimage(self.A_ambient)

    @cached_property
    def im_rline_top(self) -> Space:
        return self.ker_E_top.mapped(self.A_ambient) + self._Wt

    # -- named subquotients ------------------------------------------------

    @property
    def U(self) -> Subquotient:
        return self.domain_embed

    @property
    def W(self) -> Subquotient:
        return self.codomain_embed

    @property
    def ker_E(self) -> Subquotient:
        return Subquotient(self.ker_E_top, self._Ut)

    @property
    def coker_E(self) -> Subquotient:
        return Subquotient(self._Ws, self.im_E_top)

    @property
    def im_E(self) -> Subquotient:
        return Subquotient(self.im_E_top, self._Wt)

    @property
    def coim_E(self) -> Subquotient:
        return Subquotient(self._Us, self.ker_E_top)

    @property
    def ker_A(self) -> Subquotient:
        return Subquotient(self.ker_A_top, self._Ut)

    @property
    def coker_A(self) -> Subquotient:
        return Subquotient(self._Ws, self.im_A_top)

    @property
    def ker_pline(self) -> Subquotient:
        return Subquotient(self.ker_pline_top, self._Ut)

    @property
    def coim_pline(self) -> Subquotient:
        return Subquotient(self._Us, self.ker_pline_top)

    @property
    def im_pline(self) -> Subquotient:
        return Subquotient(self.im_E_top + self.im_A_top, self.im_E_top)

    @property
    def coker_pline(self) -> Subquotient:
        """Observation defect object."""
        return Subquotient(self._Ws, self.im_E_top + self.im_A_top)

    @property
    def ker_rline(self) -> Subquotient:
        """Control defect object."""
        return Subquotient(self.ker_E_top & self.ker_A_top, self._Ut)

    @property
    def im_rline(self) -> Subquotient:
        return Subquotient(self.im_rline_top, self._Wt)

    @property
    def im_prline(self) -> Subquotient:
        """Nilpotency defect object (image side)."""
        return Subquotient(self.im_E_top + self.im_rline_top, self.im_E_top)

    @property
    def coim_prline(self) -> Subquotient:
        k = self.ker_E_top
        return Subquotient(k, k & self.ker_pline_top)

    @property
    def ker_prline(self) -> Subquotient:
        return Subquotient(self.ker_E_top & self.ker_pline_top, self._Ut)

    # -- operators in coordinates ------------------------------------------

    @cached_property
    def _models(self):
        return {}

    def _model(self, sq: Subquotient):
        cache = self._models
        if sq not in cache:
            cache[sq] = (_rational_model(sq) if self.backend == "rational"
                         else _integer_model(sq))
        return cache[sq]

    def induced(self, matrix, source: Subquotient, target: Subquotient):
        """The map ``source -> target`` induced by an ambient matrix."""
        if self.backend == "rational":
            lift, _ = self._model(source)
            _, coords = self._model(target)
            return coords @ matrix @ lift
        dom = self._model(source)
        cod = self._model(target)
        cols = []
        for j in range(source.top.dim):
            image = (matrix @ IntMatrix.from_columns([source.top.basis.row(j)],
                                                     source.ambient_dim)).col(0)
            c = target.top.coordinates(image)
            if c is None:
                raise IllFormed("induced map leaves the target subobject")
            cols.append(c)
        mat = (IntMatrix.from_columns(cols, target.top.dim) if cols
               else IntMatrix.zeros(target.top.dim, 0))
        return AbMorphism(dom, cod, mat)

    def presented(self, sq: Subquotient) -> PresentedAb:
        if self.backend != "integer":
            raise UnsupportedBackend("presentations exist for the integer backend")
        return self._model(sq)

    @cached_property
    def E(self):
        return self.induced(self.E_ambient, self.U, self.W)

    @cached_property
    def A(self):
        return self.induced(self.A_ambient, self.U, self.W)

    def __repr__(self):
        path = "".join(self.history) or "-"
        return (f"PencilSystem({self.backend}, U={self.domain_invariant}, "
                f"W={self.codomain_invariant}, path={path})")


def _rat(rows) -> RatMatrix:
    rows = [list(r) for r in rows]
    return RatMatrix.from_rows(rows, cols=len(rows[0]) if rows else 0)


def _int(rows) -> IntMatrix:
    rows = [list(r) for r in rows]
    return IntMatrix.from_rows(rows, cols=len(rows[0]) if rows else 0)


# ---------------------------------------------------------------------------
# the three defect maps

def pline(sys: PencilSystem):
    """A followed by the projection onto coker E."""
    return sys.induced(sys.A_ambient, sys.U, sys.coker_E)


def rline(sys: PencilSystem):
    """A restricted to ker E."""
    return sys.induced(sys.A_ambient, sys.ker_E, sys.W)


def prline(sys: PencilSystem):
    """A restricted to ker E and projected onto coker E."""
    return sys.induced(sys.A_ambient, sys.ker_E, sys.coker_E)


# ---------------------------------------------------------------------------
# reductions

@dataclass(frozen=True)
class ReductionOutcome:
    reduced: PencilSystem
    pline_coker: Invariant
    rline_ker: Invariant
    prline_image: Invariant
    changed: bool


def _maps_into(mat, source: Space, target: Space) -> bool:
    image = mat @ source.inclusion()
    if isinstance(target, Subspace):
        return target.contains_columns(image)
    return all(image.col(j) in target for j in range(image.cols))


def _check_tops(sys: PencilSystem) -> None:
    for mat in (sys.E_ambient, sys.A_ambient):
        if not _maps_into(mat, sys._Us, sys._Ws):
            raise IllFormed("operator leaves the reduced codomain")


def _check_bottoms(sys: PencilSystem) -> None:
    for mat in (sys.E_ambient, sys.A_ambient):
        if not _maps_into(mat, sys._Ut, sys._Wt):
            raise IllFormed("operator does not descend to the reduced quotients")


def _observed(sys: PencilSystem) -> PencilSystem:
    # bottoms are unchanged, so only the new tops need checking
    reduced = sys._derived(sys.ker_pline, sys.im_E, "o")
    _check_tops(reduced)
    return reduced


def _controlled(sys: PencilSystem) -> PencilSystem:
    reduced = sys._derived(sys.coim_E, Subquotient(sys._Ws, sys.im_rline_top), "c")
    _check_bottoms(reduced)
    return reduced


def _outcome(sys: PencilSystem, reduced: PencilSystem) -> ReductionOutcome:
    return ReductionOutcome(
        reduced=reduced,
        pline_coker=sys.inv(sys.coker_pline),
        rline_ker=sys.inv(sys.ker_rline),
        prline_image=sys.inv(sys.im_prline),
        changed=not reduced.same_spaces(sys),
    )


def observe_reduce(sys: PencilSystem) -> ReductionOutcome:
    """U -> ker pline, W -> im E."""
    return _outcome(sys, _observed(sys))


def control_reduce(sys: PencilSystem) -> ReductionOutcome:
    """U -> coim E, W -> coker rline."""
    return _outcome(sys, _controlled(sys))


def observe(sys: PencilSystem, times: int = 1) -> PencilSystem:
    """``times`` observation reductions, without recording defects."""
    for _ in range(times):
        sys = _observed(sys)
    return sys


def control(sys: PencilSystem, times: int = 1) -> PencilSystem:
    for _ in range(times):
        sys = _controlled(sys)
    return sys


def _cells_agree(a: PencilSystem, b: PencilSystem) -> bool:
    return (a.domain_invariant == b.domain_invariant
            and a.codomain_invariant == b.codomain_invariant
            and a.identified_with(b))


def reduce_grid(sys: PencilSystem, max_obs: int, max_ctl: int,
                verify: bool = True) -> list[list[PencilSystem]]:
    """``grid[m][n]``: m observation then n control reductions.

    With ``verify`` every cell is recomputed control-first and compared
    (invariants and subquotients of the original spaces).
    """
    if max_obs < 0 or max_ctl < 0:
        raise ValueError("grid bounds must be non-negative")
    grid = []
    row_start = sys
    for m in range(max_obs + 1):
        row = [row_start]
        for _ in range(max_ctl):
            row.append(control(row[-1]))
        grid.append(row)
        if m < max_obs:
            row_start = observe(row_start)
    if verify:
        col_start = sys
        for n in range(max_ctl + 1):
            cell = col_start
            for m in range(max_obs + 1):
                if not _cells_agree(grid[m][n], cell):
                    raise CommutationViolation(
                        f"cell ({m}, {n}) differs between reduction orders: "
                        f"{grid[m][n]!r} vs {cell!r}")
                if m < max_obs:
                    cell = observe(cell)
            col_start = control(col_start)
    return grid


# ---------------------------------------------------------------------------
# splittings over Q

@dataclass(frozen=True)
class CouplingSplit:
    """Complements realizing the splittings of one observation step.

    All subspaces are in the coordinates of ``sys.E``/``sys.A``:
    ``U = U_o + coim_pE + coim_prline`` and
    ``W = W_o + im_pline + coker_pline`` with
    ``W_o = W_o2 + coker_Eo``.
    """

    U_o: Subspace
    W_o: Subspace
    W_o2: Subspace
    ker_E: Subspace
    coker_Eo: Subspace
    coim_pE: Subspace
    coim_prline: Subspace
    im_pline: Subspace
    coker_pline: Subspace


def coupling_split(sys: PencilSystem) -> CouplingSplit:
    from .linalg import image, kernel
    if sys.backend != "rational":
        raise UnsupportedBackend("splittings need not exist over Z")
    E, A = sys.E, sys.A
    m, n = E.shape
    W_o = image(E)
    U_o = kernel(quotient(m, W_o).matrix @ A)
    ker_E = kernel(E)
    W_o2 = U_o.mapped(E)
    coim_prline = (ker_E & U_o).complement_in(ker_E)
    coim_pE = (U_o + ker_E).complement_in(Subspace.full(n))
    coker_Eo = coim_pE.mapped(E)
    im_pl = (coim_pE + coim_prline).mapped(A)
    coker_pl = (W_o + im_pl).complement_in(Subspace.full(m))

    if coker_Eo.dim != coim_pE.dim or (W_o2 + coker_Eo).dim != W_o.dim \
            or W_o2.dim + coker_Eo.dim != W_o.dim:
        raise IllFormed("E is not a bijection onto a complement of W_o2")
    if im_pl.dim != coim_pE.dim + coim_prline.dim \
            or (W_o + im_pl).dim != W_o.dim + im_pl.dim:
        raise IllFormed("A is not a bijection onto a complement of W_o")
    if U_o.dim + coim_pE.dim + coim_prline.dim != n \
            or W_o.dim + im_pl.dim + coker_pl.dim != m:
        raise IllFormed("sections do not fill the spaces")
    return CouplingSplit(U_o, W_o, W_o2, ker_E, coker_Eo, coim_pE,
                         coim_prline, im_pl, coker_pl)
