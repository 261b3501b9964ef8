"""Exact rational linear algebra.

Dense immutable matrices over Q, canonical subspaces (reduced row echelon
bases), quotient maps and the lattice operations used by the reduction
engine.  Empty matrices (zero rows or zero columns) are ordinary values.

Elimination runs on integer-scaled rows with content removal, which is
considerably faster than elimination on ``Fraction`` objects; results are
converted back to fractions only once.
"""

from __future__ import annotations

import builtins
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import NonSquare, ShapeMismatch

__all__ = [
    "RatMatrix",
    "Subspace",
    "QuotientMap",
    "as_rational",
    "rank",
    "kernel",
    "image",
    "quotient",
    "restrict",
    "intersect",
    "sum",
    "preimage",
    "solve",
    "inverse",
    "det",
    "det_poly",
    "poly_eval",
    "rational_roots",
]


def as_rational(value) -> Fraction:
    """Parse an entry: int, Fraction, or a string such as ``"-3/4"``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


_ZERO = Fraction(0)


class _Matrix:
    """Shared dense row-major storage; subclasses fix the entry type."""

    __slots__ = ("rows", "cols", "entries")

    @staticmethod
    def _coerce(value):
        raise NotImplementedError

    def __init__(self, rows: int, cols: int, entries: Iterable = ()):
        if rows < 0 or cols < 0:
            raise ShapeMismatch(f"negative shape {rows}x{cols}")
        data = tuple(self._coerce(x) for x in entries)
        if len(data) != rows * cols:
            raise ShapeMismatch(
                f"{len(data)} entries for a {rows}x{cols} matrix")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", data)

    def __setattr__(self, name, value):
        raise AttributeError("matrices are immutable")

    @classmethod
    def _raw(cls, rows, cols, data):
        obj = object.__new__(cls)
        object.__setattr__(obj, "rows", rows)
        object.__setattr__(obj, "cols", cols)
        object.__setattr__(obj, "entries", tuple(data))
        return obj

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None):
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise ShapeMismatch("column count required for 0-row matrix")
            cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise ShapeMismatch("ragged rows")
        return cls(len(rows), cols, [x for r in rows for x in r])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int):
        columns = [list(c) for c in columns]
        if any(len(c) != rows for c in columns):
            raise ShapeMismatch("ragged columns")
        return cls(rows, len(columns),
                   [columns[j][i] for i in range(rows)
                    for j in range(len(columns))])

    @classmethod
    def zeros(cls, rows: int, cols: int):
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int):
        return cls(n, n, [1 if i == j else 0
                          for i in range(n) for j in range(n)])

    @classmethod
    def block_diag(cls, blocks: Sequence):
        r = builtins.sum(b.rows for b in blocks)
        c = builtins.sum(b.cols for b in blocks)
        out = [[0] * c for _ in range(r)]
        i0 = j0 = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    out[i0 + i][j0 + j] = b[i, j]
            i0 += b.rows
            j0 += b.cols
        return cls(r, c, [x for row in out for x in row])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, key):
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(key)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple:
        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def T(self):
        return type(self)._raw(
            self.cols, self.rows,
            [self.entries[i * self.cols + j]
             for j in range(self.cols) for i in range(self.rows)])

    def __matmul__(self, other):
        if not isinstance(other, _Matrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ShapeMismatch(f"{self.shape} @ {other.shape}")
        cls = type(self) if type(self) is type(other) else RatMatrix
        n, m, p = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        bcols = [b[j::p] for j in range(p)] if p else []
        out = []
        for i in range(n):
            ai = a[i * m:(i + 1) * m]
            for j in range(p):
                out.append(builtins.sum((x * y for x, y in zip(ai, bcols[j]) if x and y), 0))
        return cls(n, p, out)

    def _elementwise(self, other, op):
        if not isinstance(other, _Matrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} vs {other.shape}")
        cls = type(self) if type(self) is type(other) else RatMatrix
        return cls(self.rows, self.cols,
                   [op(x, y) for x, y in zip(self.entries, other.entries)])

    def __add__(self, other):
        return self._elementwise(other, lambda x, y: x + y)

    def __sub__(self, other):
        return self._elementwise(other, lambda x, y: x - y)

    def __neg__(self):
        return type(self)._raw(self.rows, self.cols, [-x for x in self.entries])

    def scale(self, c):
        return type(self)(self.rows, self.cols, [c * x for x in self.entries])

    def hstack(self, *others):
        mats = (self,) + others
        if any(m.rows != self.rows for m in mats):
            raise ShapeMismatch("hstack needs equal row counts")
        return type(self)(self.rows, builtins.sum(m.cols for m in mats),
                          [x for i in range(self.rows)
                           for m in mats for x in m.row(i)])

    def vstack(self, *others):
        mats = (self,) + others
        if any(m.cols != self.cols for m in mats):
            raise ShapeMismatch("vstack needs equal column counts")
        return type(self)(builtins.sum(m.rows for m in mats), self.cols,
                          [x for m in mats for x in m.entries])

    def select_rows(self, idx: Sequence[int]):
        return type(self)._raw(len(idx), self.cols,
                               [x for i in idx for x in self.row(i)])

    def select_cols(self, idx: Sequence[int]):
        return type(self)._raw(self.rows, len(idx),
                               [self[i, j] for i in range(self.rows) for j in idx])

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __eq__(self, other):
        if not isinstance(other, _Matrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in self.row(i))
                         for i in range(self.rows))
        return f"{type(self).__name__}({self.rows}x{self.cols}: [{body}])"


class RatMatrix(_Matrix):
    """Dense matrix of exact rationals."""

    __slots__ = ("_scaled_cache",)

    _coerce = staticmethod(as_rational)

    def _scaled(self) -> tuple[list[int], int]:
        """Integer entries and a common denominator (cached)."""
        try:
            return self._scaled_cache
        except AttributeError:
            pass
        ents = self.entries
        den = lcm(*{x.denominator for x in ents}) if ents else 1
        if den == 1:
            out = [x.numerator for x in ents]
        else:
            out = [x.numerator * (den // x.denominator) if x else 0 for x in ents]
        object.__setattr__(self, "_scaled_cache", (out, den))
        return out, den

    def __matmul__(self, other):
        if type(other) is not RatMatrix:
            return super().__matmul__(other)
        if self.cols != other.rows:
            raise ShapeMismatch(f"{self.shape} @ {other.shape}")
        n, m, p = self.rows, self.cols, other.cols
        a, da = self._scaled()
        b, db = other._scaled()
        brows = [b[k * p:(k + 1) * p] for k in range(m)]
        den = da * db
        out = []
        for i in range(n):
            acc = [0] * p
            for k, x in enumerate(a[i * m:(i + 1) * m]):
                if x:
                    acc = [u + x * v for u, v in zip(acc, brows[k])]
            out.extend(Fraction(v, den) if v else _ZERO for v in acc)
        return RatMatrix._raw(n, p, out)

    def to_strings(self) -> list[list[str]]:
        return [[str(x) for x in self.row(i)] for i in range(self.rows)]


# ---------------------------------------------------------------------------
# elimination kernels

def _primitive(row: list[int]) -> list[int]:
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return row
    if g > 1:
        return [x // g for x in row]
    return row


def _integer_rows(rows: Iterable[Sequence]) -> list[list[int]]:
    out = []
    for r in rows:
        r = [as_rational(x) for x in r]
        den = lcm(*(x.denominator for x in r)) if r else 1
        out.append(_primitive([x.numerator * (den // x.denominator) for x in r]))
    return out


def _echelon(rows: list[list[int]], ncols: int, full: bool):
    """In-place integer Gauss(-Jordan) elimination.

    Returns (nonzero rows, pivot columns).  With ``full`` the result is
    reduced above the pivots as well (still integer, not yet normalized).
    """
    rows = [r for r in rows if any(r)]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        p = None
        best = None
        for i in range(r, len(rows)):
            v = rows[i][c]
            if v and (best is None or abs(v) < best):
                p, best = i, abs(v)
                if best == 1:
                    break
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        prow = rows[r]
        pv = prow[c]
        targets = range(len(rows)) if full else range(r + 1, len(rows))
        for i in targets:
            if i == r:
                continue
            v = rows[i][c]
            if v:
                g = gcd(pv, v)
                a, b = pv // g, v // g
                rows[i] = _primitive([a * x - b * y
                                      for x, y in zip(rows[i], prow)])
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def _rref(rows: Iterable[Sequence], ncols: int):
    """Reduced row echelon form as Fraction rows plus pivot list."""
    irows, pivots = _echelon(_integer_rows(rows), ncols, full=True)
    out = []
    for row, c in zip(irows, pivots):
        pv = row[c]
        out.append([Fraction(x, pv) if x else _ZERO for x in row])
    return out, pivots


# ---------------------------------------------------------------------------
# subspaces and quotients

@dataclass(frozen=True)
class Subspace:
    """Subspace of Q^n with a canonical reduced-row-echelon basis.

    Equality is equality of the canonical bases, hence of the subspaces.
    """

    ambient_dim: int
    basis: RatMatrix

    def __post_init__(self):
        if self.basis.cols != self.ambient_dim:
            raise ShapeMismatch("basis width differs from ambient dimension")

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        rows, _ = _rref(vectors, ambient_dim)
        return cls(ambient_dim, RatMatrix._raw(len(rows), ambient_dim,
                                               [x for r in rows for x in r]))

    @classmethod
    def span_columns(cls, m: RatMatrix) -> "Subspace":
        return cls.span(m.T.to_rows(), m.rows)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, RatMatrix.identity(n))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, RatMatrix.zeros(0, n))

    @property
    def dim(self) -> int:
        return self.basis.rows

    @property
    def pivots(self) -> list[int]:
        out = []
        for i in range(self.basis.rows):
            row = self.basis.row(i)
            out.append(next(j for j, x in enumerate(row) if x))
        return out

    def inclusion(self) -> RatMatrix:
        """n x dim matrix whose columns are the basis vectors."""
        return self.basis.T

    def coordinates(self, v: Sequence) -> list[Fraction] | None:
        """Coefficients of ``v`` in the basis, or None if ``v`` is outside."""
        v = [as_rational(x) for x in v]
        coeffs = [v[p] for p in self.pivots]
        rest = list(v)
        for c, i in zip(coeffs, range(self.dim)):
            if c:
                for j, b in enumerate(self.basis.row(i)):
                    if b:
                        rest[j] -= c * b
        return coeffs if not any(rest) else None

    def __contains__(self, v) -> bool:
        return self.coordinates(v) is not None

    def contains_columns(self, m: RatMatrix) -> bool:
        """True if every column of ``m`` lies in the subspace."""
        if m.rows != self.ambient_dim:
            raise ShapeMismatch("column length differs from ambient dimension")
        if not m.cols or self.dim == self.ambient_dim:
            return True
        coeffs = m.select_rows(self.pivots)
        return (self.inclusion() @ coeffs) == m

    def contains(self, other: "Subspace") -> bool:
        return self.contains_columns(other.inclusion())

    def __le__(self, other: "Subspace") -> bool:
        return other.contains(self)

    def __add__(self, other: "Subspace") -> "Subspace":
        return sum(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)

    def mapped(self, m: RatMatrix) -> "Subspace":
        """Image of this subspace under ``m``."""
        if m.cols != self.ambient_dim:
            raise ShapeMismatch("map domain differs from ambient dimension")
        if not self.dim:
            return Subspace.zero(m.rows)
        return Subspace.span_columns(m @ self.inclusion())

    def preimage(self, m: RatMatrix) -> "Subspace":
        """``{x : m x in self}``."""
        return preimage(m, self)

    def complement_in(self, outer: "Subspace") -> "Subspace":
        """Deterministic complement of ``self`` inside ``outer``.

        Lifts the canonical basis of ``outer`` modulo ``self`` (pivot
        complement coordinates) back into ``outer``.
        """
        q = quotient(self.ambient_dim, self).matrix
        lifted = lift_through(q, outer)
        return Subspace.span(lifted.T.to_rows(), self.ambient_dim)


@dataclass(frozen=True)
class QuotientMap:
    """Surjection Q^n -> Q^(n - dim kernel) whose kernel is ``kernel``."""

    ambient_dim: int
    kernel: Subspace
    matrix: RatMatrix

    @property
    def dim(self) -> int:
        return self.matrix.rows


def rank(m: RatMatrix) -> int:
    rows, _ = _echelon(_integer_rows(m.to_rows()), m.cols, full=False)
    return len(rows)


def kernel(m: RatMatrix) -> Subspace:
    rows, pivots = _rref(m.to_rows(), m.cols)
    free = [j for j in range(m.cols) if j not in set(pivots)]
    vecs = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for row, p in zip(rows, pivots):
            v[p] = -row[f]
        vecs.append(v)
    return Subspace.span(vecs, m.cols)


def image(m: RatMatrix) -> Subspace:
    return Subspace.span_columns(m)


def quotient(ambient_dim: int, s: Subspace) -> QuotientMap:
    """Quotient map modelled on the non-pivot coordinates of ``s``.

    Row f sends x to its non-pivot coordinate f after subtracting the
    combination of basis rows matching x on the pivot coordinates.
    """
    if s.ambient_dim != ambient_dim:
        raise ShapeMismatch("subspace lives in a different ambient space")
    pivots = s.pivots
    pset = set(pivots)
    rows = []
    for f in range(ambient_dim):
        if f in pset:
            continue
        r = [Fraction(0)] * ambient_dim
        r[f] = Fraction(1)
        for i, p in enumerate(pivots):
            r[p] -= s.basis[i, f]
        rows.append(r)
    return QuotientMap(ambient_dim, s,
                       RatMatrix.from_rows(rows, cols=ambient_dim))


def restrict(m: RatMatrix, s: Subspace) -> RatMatrix:
    if s.ambient_dim != m.cols:
        raise ShapeMismatch("subspace is not in the domain of the map")
    return m @ s.inclusion()


def sum(a: Subspace, b: Subspace) -> Subspace:  # noqa: A001 - lattice join
    if a.ambient_dim != b.ambient_dim:
        raise ShapeMismatch("ambient dimensions differ")
    if not a.dim:
        return b
    if not b.dim or a.dim == a.ambient_dim or a == b:
        return a
    if b.dim == b.ambient_dim:
        return b
    return Subspace.span(a.basis.to_rows() + b.basis.to_rows(), a.ambient_dim)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient_dim != b.ambient_dim:
        raise ShapeMismatch("ambient dimensions differ")
    if not a.dim or not b.dim:
        return Subspace.zero(a.ambient_dim)
    if a.dim == a.ambient_dim:
        return b
    if b.dim == b.ambient_dim or a == b:
        return a
    q = quotient(b.ambient_dim, b).matrix
    coeffs = kernel(q @ a.inclusion())
    return Subspace.span((coeffs.basis @ a.basis).to_rows(), a.ambient_dim)


def preimage(m: RatMatrix, s: Subspace) -> Subspace:
    if s.ambient_dim != m.rows:
        raise ShapeMismatch("subspace is not in the codomain of the map")
    if s.dim == s.ambient_dim:
        return Subspace.full(m.cols)
    q = quotient(s.ambient_dim, s).matrix
    return kernel(q @ m)


def solve(m: RatMatrix, b: Sequence) -> list[Fraction] | None:
    """A solution of ``m x = b`` with free variables zero, or None."""
    b = [as_rational(x) for x in b]
    if len(b) != m.rows:
        raise ShapeMismatch("right-hand side length")
    aug = [list(m.row(i)) + [b[i]] for i in range(m.rows)]
    rows, pivots = _rref(aug, m.cols + 1)
    if pivots and pivots[-1] == m.cols:
        return None
    x = [Fraction(0)] * m.cols
    for row, p in zip(rows, pivots):
        x[p] = row[m.cols]
    return x


def lift_through(q: RatMatrix, s: Subspace) -> RatMatrix:
    """Columns x_j in ``s`` with ``q x_j`` the canonical basis of q(s)."""
    target = s.mapped(q)
    src = q @ s.inclusion()
    cols = []
    for i in range(target.dim):
        c = solve(src, target.basis.row(i))
        cols.append((s.inclusion() @ RatMatrix.from_columns([c], len(c))).col(0))
    return RatMatrix.from_columns(cols, s.ambient_dim)


def inverse(m: RatMatrix) -> RatMatrix:
    if not m.is_square():
        raise NonSquare(f"{m.shape} is not square")
    n = m.rows
    aug = [list(m.row(i)) + [1 if i == j else 0 for j in range(n)]
           for i in range(n)]
    rows, pivots = _rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        from .errors import Singular
        raise Singular("matrix is not invertible")
    return RatMatrix._raw(n, n, [x for r in rows for x in r[n:]])


def det(m: RatMatrix) -> Fraction:
    """Determinant by fraction-free (Bareiss) elimination."""
    if not m.is_square():
        raise NonSquare(f"{m.shape} is not square")
    n = m.rows
    if n == 0:
        return Fraction(1)
    den = 1
    for x in m.entries:
        den = den * x.denominator // gcd(den, x.denominator)
    a = [[int(x * den) for x in m.row(i)] for i in range(n)]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return Fraction(sign * a[n - 1][n - 1], den ** n)


def det_poly(e: RatMatrix, a: RatMatrix) -> list[Fraction]:
    """Coefficients (constant term first) of det(lambda*E + A).

    Evaluates at lambda = 0..n and interpolates with Newton divided
    differences.  Trailing zeros are stripped; the zero polynomial is [].
    """
    if not (e.is_square() and a.is_square()) or e.shape != a.shape:
        raise NonSquare(f"det_poly needs equal square shapes, got "
                        f"{e.shape} and {a.shape}")
    n = e.rows
    xs = list(range(n + 1))
    ys = [det(e.scale(x) + a) for x in xs]
    # Newton coefficients
    coef = list(ys)
    for j in range(1, n + 1):
        for i in range(n, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    # expand to monomial basis
    poly = [Fraction(0)] * (n + 1)
    for i in range(n, -1, -1):
        # poly = poly * (x - xs[i]) + coef[i]
        shifted = [Fraction(0)] + poly[:-1]
        poly = [s - xs[i] * p for s, p in zip(shifted, poly)]
        poly[0] += coef[i]
    while poly and poly[-1] == 0:
        poly.pop()
    return poly


def poly_eval(coeffs: Sequence[Fraction], x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, int(n ** 0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def rational_roots(coeffs: Sequence[Fraction]) -> list[Fraction]:
    """Distinct rational roots of a nonzero polynomial, ascending."""
    coeffs = [as_rational(c) for c in coeffs]
    if not any(coeffs):
        raise ValueError("the zero polynomial has every number as a root")
    den = lcm(*(c.denominator for c in coeffs))
    ints = [c.numerator * (den // c.denominator) for c in coeffs]
    while ints and ints[-1] == 0:
        ints.pop()
    roots = set()
    while ints and ints[0] == 0:
        roots.add(Fraction(0))
        ints.pop(0)
    if len(ints) <= 1:
        return sorted(roots)
    for p in _divisors(ints[0]):
        for q in _divisors(ints[-1]):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if poly_eval(ints, cand) == 0:
                    roots.add(cand)
    return sorted(roots)
