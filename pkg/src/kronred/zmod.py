"""Finitely generated abelian groups.

Subgroups of Z^n are held as :class:`Lattice` objects in canonical Hermite
normal form, so subgroup equality is a tuple comparison.  Presented
groups are ``Z^g / <relation columns>``; kernels, cokernels, images and
coimages come from lattice preimages and sums, and invariant factors from
the Smith normal form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import NotAMorphism, ShapeMismatch
from .linalg import _Matrix

__all__ = [
    "IntMatrix",
    "SNF",
    "smith",
    "hnf",
    "Lattice",
    "AbInvariants",
    "PresentedAb",
    "AbMorphism",
    "ab_kernel",
    "ab_cokernel",
    "ab_image",
    "ab_coimage",
    "ab_invariants",
    "subobject_equal",
    "coimage_to_image",
    "integer_kernel",
]


def _as_int(value) -> int:
    if isinstance(value, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        return int(value.strip())
    if getattr(value, "denominator", None) == 1:
        return int(value.numerator)
    raise TypeError(f"{value!r} is not an integer")


class IntMatrix(_Matrix):
    """Dense matrix of arbitrary-precision integers."""

    __slots__ = ()

    _coerce = staticmethod(_as_int)


# ---------------------------------------------------------------------------
# Smith normal form

@dataclass(frozen=True)
class SNF:
    u: IntMatrix
    d: IntMatrix
    v: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.d[i, i] for i in range(min(self.d.rows, self.d.cols))]


def smith(m: IntMatrix) -> SNF:
    """Smith normal form ``u @ m @ v == d`` with unimodular u, v.

    Pivot choice: the nonzero entry of smallest absolute value in the
    remaining block, first in row-major order on ties.
    """
    r, c = m.rows, m.cols
    d = m.to_rows()
    u = IntMatrix.identity(r).to_rows()
    v = IntMatrix.identity(c).to_rows()

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row dst += k * row src
        d[dst] = [x + k * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, k):
        for row in d:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    for t in range(min(r, c)):
        while True:
            best = None
            for i in range(t, r):
                for j in range(t, c):
                    x = d[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, i, j = best
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            p = d[t][t]
            dirty = False
            for i in range(t + 1, r):
                if d[i][t]:
                    add_row(i, t, -(d[i][t] // p))
                    dirty = dirty or d[i][t] != 0
            for j in range(t + 1, c):
                if d[t][j]:
                    add_col(j, t, -(d[t][j] // p))
                    dirty = dirty or d[t][j] != 0
            if dirty:
                continue
            bad = next((i for i in range(t + 1, r)
                        if any(d[i][j] % p for j in range(t + 1, c))), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        if best is None:
            break
    return SNF(IntMatrix.from_rows(u, cols=r), IntMatrix.from_rows(d, cols=c),
               IntMatrix.from_rows(v, cols=c))


# ---------------------------------------------------------------------------
# Hermite normal form and lattices

def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _hnf_rows(rows: list[list[int]], ncols: int, track: bool = False):
    """Row-style Hermite form.

    Returns (H, T, pivots) with ``T @ rows == H`` when ``track``; H keeps
    zero rows at the bottom so ``T`` stays square.
    """
    h = [list(r) for r in rows]
    n = len(h)
    t = [[1 if i == j else 0 for j in range(n)] for i in range(n)] if track else None
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == n:
            break
        for i in range(r + 1, n):
            if h[i][c] == 0:
                continue
            a, b = h[r][c], h[i][c]
            if a == 0:
                h[r], h[i] = h[i], h[r]
                if track:
                    t[r], t[i] = t[i], t[r]
                continue
            g, x, y = _xgcd(a, b)
            ag, bg = a // g, b // g
            hr, hi = h[r], h[i]
            h[r] = [x * p + y * q for p, q in zip(hr, hi)]
            h[i] = [ag * q - bg * p for p, q in zip(hr, hi)]
            if track:
                tr, ti = t[r], t[i]
                t[r] = [x * p + y * q for p, q in zip(tr, ti)]
                t[i] = [ag * q - bg * p for p, q in zip(tr, ti)]
        if h[r][c] == 0:
            continue
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            if track:
                t[r] = [-x for x in t[r]]
        p = h[r][c]
        for i in range(r):
            q = h[i][c] // p
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                if track:
                    t[i] = [x - q * y for x, y in zip(t[i], t[r])]
        pivots.append(c)
        r += 1
    return h, t, pivots


def hnf(m: IntMatrix) -> IntMatrix:
    """Canonical row Hermite form of the row lattice, zero rows dropped."""
    h, _, piv = _hnf_rows(m.to_rows(), m.cols)
    return IntMatrix.from_rows(h[:len(piv)], cols=m.cols)


def integer_kernel(m: IntMatrix) -> list[list[int]]:
    """A basis of ``{x in Z^cols : m x = 0}``."""
    rows = m.T.to_rows()
    h, t, piv = _hnf_rows(rows, m.rows, track=True)
    return [t[i] for i in range(len(piv), m.cols)]


@dataclass(frozen=True)
class Lattice:
    """Subgroup of Z^n with a canonical Hermite basis (rows)."""

    ambient_dim: int
    basis: IntMatrix

    @classmethod
    def span(cls, vectors: Sequence[Sequence[int]], ambient_dim: int) -> "Lattice":
        vectors = [list(v) for v in vectors if any(v)]
        if not vectors:
            return cls.zero(ambient_dim)
        h, _, piv = _hnf_rows(vectors, ambient_dim)
        return cls(ambient_dim,
                   IntMatrix._raw(len(piv), ambient_dim,
                                  [x for row in h[:len(piv)] for x in row]))

    @classmethod
    def span_columns(cls, m: IntMatrix) -> "Lattice":
        return cls.span(m.T.to_rows(), m.rows)

    @classmethod
    def full(cls, n: int) -> "Lattice":
        return cls(n, IntMatrix.identity(n))

    @classmethod
    def zero(cls, n: int) -> "Lattice":
        return cls(n, IntMatrix.zeros(0, n))

    @property
    def dim(self) -> int:
        """Rank of the lattice."""
        return self.basis.rows

    @property
    def pivots(self) -> list[int]:
        return [next(j for j, x in enumerate(self.basis.row(i)) if x)
                for i in range(self.dim)]

    def inclusion(self) -> IntMatrix:
        return self.basis.T

    def coordinates(self, v: Sequence[int]) -> list[int] | None:
        """Integer coefficients of ``v`` in the basis, or None."""
        rest = [_as_int(x) for x in v]
        coeffs = []
        for i, p in enumerate(self.pivots):
            q, rem = divmod(rest[p], self.basis[i, p])
            if rem:
                return None
            coeffs.append(q)
            if q:
                rest = [x - q * y for x, y in zip(rest, self.basis.row(i))]
        return coeffs if not any(rest) else None

    def __contains__(self, v) -> bool:
        return self.coordinates(v) is not None

    def contains(self, other: "Lattice") -> bool:
        return all(other.basis.row(i) in self for i in range(other.dim))

    def __le__(self, other: "Lattice") -> bool:
        return other.contains(self)

    def __add__(self, other: "Lattice") -> "Lattice":
        if self.ambient_dim != other.ambient_dim:
            raise ShapeMismatch("ambient dimensions differ")
        if not self.dim:
            return other
        if not other.dim:
            return self
        return Lattice.span(self.basis.to_rows() + other.basis.to_rows(),
                            self.ambient_dim)

    def preimage(self, m: _Matrix) -> "Lattice":
        """``{x in Z^cols : m x in self}``."""
        if m.rows != self.ambient_dim:
            raise ShapeMismatch("lattice is not in the codomain of the map")
        n = m.cols
        aug = IntMatrix(m.rows, n + self.dim,
                        [x for i in range(m.rows)
                         for x in list(m.row(i)) + [-y for y in self.basis.col(i)]]
                        if self.dim else m.entries)
        ker = integer_kernel(aug)
        return Lattice.span([v[:n] for v in ker], n)

    def __and__(self, other: "Lattice") -> "Lattice":
        if self.ambient_dim != other.ambient_dim:
            raise ShapeMismatch("ambient dimensions differ")
        if not self.dim or not other.dim:
            return Lattice.zero(self.ambient_dim)
        inc = self.inclusion()
        coeffs = other.preimage(inc)
        return coeffs.mapped(inc)

    def mapped(self, m: _Matrix) -> "Lattice":
        if m.cols != self.ambient_dim:
            raise ShapeMismatch("map domain differs from ambient dimension")
        return Lattice.span_columns(IntMatrix(m.rows, m.cols, m.entries)
                                    @ self.inclusion())

    def index_in(self, outer: "Lattice") -> "AbInvariants":
        """Invariants of ``outer / self`` (requires self <= outer)."""
        rel = []
        for i in range(self.dim):
            c = outer.coordinates(self.basis.row(i))
            if c is None:
                raise ShapeMismatch("sublattice is not contained in outer lattice")
            rel.append(c)
        rels = IntMatrix.from_columns(rel, outer.dim) if rel else IntMatrix.zeros(outer.dim, 0)
        return _invariants_of(rels)


# ---------------------------------------------------------------------------
# presented groups

@dataclass(frozen=True, order=True)
class AbInvariants:
    """Isomorphism class: Z^free_rank + Z/t1 + ... with t1 | t2 | ..."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(self.torsion))
        if any(t < 2 for t in self.torsion):
            raise ValueError("torsion coefficients must be >= 2")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise ValueError("torsion coefficients must form a divisibility chain")

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def torsion_order(self) -> int:
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def __bool__(self) -> bool:
        return not self.is_trivial

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def _invariants_of(relations: IntMatrix) -> AbInvariants:
    diag = smith(relations).diagonal if relations.cols else []
    nonzero = [x for x in diag if x]
    return AbInvariants(relations.rows - len(nonzero),
                        tuple(x for x in nonzero if x > 1))


@dataclass(frozen=True)
class PresentedAb:
    """``Z^generators`` modulo the span of the relation columns."""

    generators: int
    relations: IntMatrix = field(default=None)

    def __post_init__(self):
        if self.relations is None:
            object.__setattr__(self, "relations", IntMatrix.zeros(self.generators, 0))
        if self.relations.rows != self.generators:
            raise ShapeMismatch("relation matrix must have one row per generator")

    @classmethod
    def free(cls, n: int) -> "PresentedAb":
        return cls(n)

    @classmethod
    def cyclic(cls, order: int) -> "PresentedAb":
        return cls(1, IntMatrix(1, 1, [order]))

    @property
    def relation_lattice(self) -> Lattice:
        return Lattice.span_columns(self.relations)

    def invariants(self) -> AbInvariants:
        return _invariants_of(self.relations)

    def is_trivial(self) -> bool:
        return self.relation_lattice == Lattice.full(self.generators)


@dataclass(frozen=True)
class AbMorphism:
    """Group homomorphism given by an integer matrix on generators.

    Construction fails unless every domain relator maps into the codomain
    relation lattice.
    """

    domain: PresentedAb
    codomain: PresentedAb
    matrix: IntMatrix

    def __post_init__(self):
        if self.matrix.shape != (self.codomain.generators, self.domain.generators):
            raise ShapeMismatch(
                f"matrix {self.matrix.shape} does not fit "
                f"{self.domain.generators} -> {self.codomain.generators} generators")
        target = self.codomain.relation_lattice
        images = self.matrix @ self.domain.relations
        for j in range(images.cols):
            if images.col(j) not in target:
                raise NotAMorphism(f"relator {j} is not mapped to a relation")

    @classmethod
    def identity(cls, g: PresentedAb) -> "AbMorphism":
        return cls(g, g, IntMatrix.identity(g.generators))

    def __matmul__(self, other: "AbMorphism") -> "AbMorphism":
        """Composition ``self . other``."""
        return AbMorphism(other.domain, self.codomain, self.matrix @ other.matrix)

    def kernel_lattice(self) -> Lattice:
        return self.codomain.relation_lattice.preimage(self.matrix)

    def image_lattice(self) -> Lattice:
        return Lattice.span_columns(self.matrix) + self.codomain.relation_lattice

    def is_zero(self) -> bool:
        return self.kernel_lattice() == Lattice.full(self.domain.generators)

    def is_mono(self) -> bool:
        return self.kernel_lattice() == self.domain.relation_lattice

    def is_epi(self) -> bool:
        return self.image_lattice() == Lattice.full(self.codomain.generators)

    def is_iso(self) -> bool:
        return self.is_mono() and self.is_epi()


def _coords_matrix(lat: Lattice, columns: IntMatrix) -> IntMatrix:
    cols = []
    for j in range(columns.cols):
        c = lat.coordinates(columns.col(j))
        if c is None:
            raise ShapeMismatch("column outside lattice")
        cols.append(c)
    return IntMatrix.from_columns(cols, lat.dim) if cols else IntMatrix.zeros(lat.dim, 0)


def _subgroup(lat: Lattice, parent: PresentedAb) -> tuple[PresentedAb, AbMorphism]:
    """Present ``lat / relations`` (``lat`` contains the relation lattice)."""
    obj = PresentedAb(lat.dim, _coords_matrix(lat, parent.relations))
    return obj, AbMorphism(obj, parent, lat.inclusion())


def ab_kernel(f: AbMorphism) -> tuple[PresentedAb, AbMorphism]:
    return _subgroup(f.kernel_lattice(), f.domain)


def ab_cokernel(f: AbMorphism) -> tuple[PresentedAb, AbMorphism]:
    w = f.codomain
    obj = PresentedAb(w.generators, w.relations.hstack(f.matrix))
    return obj, AbMorphism(w, obj, IntMatrix.identity(w.generators))


def ab_image(f: AbMorphism) -> tuple[PresentedAb, AbMorphism]:
    return _subgroup(f.image_lattice(), f.codomain)


def ab_coimage(f: AbMorphism) -> tuple[PresentedAb, AbMorphism]:
    u = f.domain
    k = f.kernel_lattice()
    obj = PresentedAb(u.generators, k.inclusion())
    return obj, AbMorphism(u, obj, IntMatrix.identity(u.generators))


def coimage_to_image(f: AbMorphism) -> AbMorphism:
    """The induced isomorphism coim f -> im f."""
    coim, _ = ab_coimage(f)
    im, _ = ab_image(f)
    g = AbMorphism(coim, im, _coords_matrix(f.image_lattice(), f.matrix))
    if not g.is_iso():
        from .errors import InvariantViolation
        raise InvariantViolation("coimage and image are not isomorphic")
    return g


def ab_invariants(g: PresentedAb) -> AbInvariants:
    return g.invariants()


def subobject_equal(a: tuple[PresentedAb, AbMorphism],
                    b: tuple[PresentedAb, AbMorphism]) -> bool:
    """True iff each inclusion factors through the other."""
    (_, ia), (_, ib) = a, b
    if ia.codomain != ib.codomain:
        raise ShapeMismatch("subobjects of different objects")
    return ia.image_lattice() == ib.image_lattice()
