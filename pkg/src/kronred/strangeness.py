"""Weak equivalence of pencils and its normal form.

A transform ``(P, Q, R)`` sends ``(E, A)`` to ``(P^-1 E Q, P^-1 (E R + A Q))``.
Transforms compose as the block matrices ``[[Q, R], [0, Q]]`` (with ``P``
alongside), which gives a right action::

    act(t1, act(t2, sys)) == act(t2 @ t1, sys)

The normal form has column blocks ``[d | s | a | c]`` and row blocks
``[d | s | s | a | rest]``::

    E = [[I_d, 0,   0, 0],      A = [[0, 0,   0,   0],
         [0,   I_s, 0, 0],           [0, 0,   0,   0],
         [0,   0,   0, 0],           [0, I_s, 0,   0],
         [0,   0,   0, 0],           [0, 0,   I_a, 0],
         [0,   0,   0, 0]]           [0, 0,   0,   0]]
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvariantViolation, ShapeMismatch, UnsupportedBackend
from .linalg import RatMatrix, Subspace, image, inverse, kernel, quotient, solve
from .reduction import PencilSystem, observe

__all__ = ["WeakTransform", "StrangenessInvariants", "act", "invariants",
           "normal_form", "canonical_pair"]


@dataclass(frozen=True)
class WeakTransform:
    P: RatMatrix
    Q: RatMatrix
    R: RatMatrix

    def __post_init__(self):
        n = self.Q.rows
        if not self.P.is_square() or not self.Q.is_square() or self.R.shape != (n, n):
            raise ShapeMismatch("need square P, Q and R of the same size as Q")
        # inverse() raises Singular for non-invertible matrices
        object.__setattr__(self, "_Pinv", inverse(self.P))
        object.__setattr__(self, "_Qinv", inverse(self.Q))

    @classmethod
    def identity(cls, m: int, n: int) -> "WeakTransform":
        return cls(RatMatrix.identity(m), RatMatrix.identity(n), RatMatrix.zeros(n, n))

    @property
    def shape(self) -> tuple[int, int]:
        return self.P.rows, self.Q.rows

    def __matmul__(self, other: "WeakTransform") -> "WeakTransform":
        """Block product ``self . other``."""
        if self.shape != other.shape:
            raise ShapeMismatch("transforms act on different shapes")
        return WeakTransform(self.P @ other.P, self.Q @ other.Q,
                             self.Q @ other.R + self.R @ other.Q)

    def inverse(self) -> "WeakTransform":
        qi = self._Qinv
        return WeakTransform(self._Pinv, qi, -(qi @ self.R @ qi))


def _pair(sys) -> tuple[RatMatrix, RatMatrix]:
    if isinstance(sys, PencilSystem):
        if sys.backend != "rational":
            raise UnsupportedBackend("weak equivalence is defined over Q")
        return sys.E, sys.A
    E, A = sys
    return E, A


def act(t: WeakTransform, sys: PencilSystem) -> PencilSystem:
    E, A = _pair(sys)
    if (E.rows, E.cols) != t.shape:
        raise ShapeMismatch(f"transform for {t.shape} applied to {E.shape}")
    pinv = t._Pinv
    return PencilSystem.rational(pinv @ E @ t.Q, pinv @ (E @ t.R + A @ t.Q))


@dataclass(frozen=True)
class StrangenessInvariants:
    d: int
    a: int
    s: int

    def to_json(self) -> dict:
        return {"d": self.d, "a": self.a, "s": self.s}


@dataclass(frozen=True)
class _Split:
    U_o: Subspace
    K0: Subspace
    u: Subspace
    v: Subspace
    k: Subspace


def _split(E: RatMatrix, A: RatMatrix) -> _Split:
    m, n = E.shape
    W_o = image(E)
    U_o = kernel(quotient(m, W_o).matrix @ A)
    ker_E = kernel(E)
    K0 = ker_E & U_o
    return _Split(U_o, K0,
                  u=K0.complement_in(U_o),
                  v=(U_o + ker_E).complement_in(Subspace.full(n)),
                  k=K0.complement_in(ker_E))


def invariants(sys: PencilSystem) -> StrangenessInvariants:
    """``d = dim W^{o2}``, ``a = dim coim prline``, ``s = dim W^{o1} - d``."""
    if not isinstance(sys, PencilSystem):
        sys = PencilSystem.rational(*sys)
    _pair(sys)
    w1 = observe(sys)
    d = observe(w1).codomain_invariant
    return StrangenessInvariants(d=d, a=sys.inv(sys.coim_prline),
                                 s=w1.codomain_invariant - d)


def canonical_pair(m: int, n: int, inv: StrangenessInvariants) -> tuple[RatMatrix, RatMatrix]:
    d, s, a = inv.d, inv.s, inv.a
    if d + s + a > n or d + 2 * s + a > m:
        raise ShapeMismatch(f"invariants {inv} do not fit a {m}x{n} pencil")
    E = [[0] * n for _ in range(m)]
    A = [[0] * n for _ in range(m)]
    for i in range(d + s):
        E[i][i] = 1
    for i in range(s):
        A[d + s + i][d + i] = 1
    for i in range(a):
        A[d + 2 * s + i][d + s + i] = 1
    return RatMatrix.from_rows(E, cols=n), RatMatrix.from_rows(A, cols=n)


def normal_form(sys: PencilSystem) -> tuple[PencilSystem, WeakTransform]:
    """Canonical representative and a witness ``t`` with ``act(t, sys)`` equal to it."""
    E, A = _pair(sys)
    m, n = E.shape
    sp = _split(E, A)
    u, v, k, K0 = (x.inclusion() for x in (sp.u, sp.v, sp.k, sp.K0))
    Q = u.hstack(v, k, K0)
    Av, Ak = A @ v, A @ k
    used = Subspace.span_columns((E @ u).hstack(E @ v, Av, Ak))
    rest = used.complement_in(Subspace.full(m)).inclusion()
    P = (E @ u).hstack(E @ v, Av, Ak, rest)
    # R kills A on U^o: columns -K A q for the u and K0 columns, zero elsewhere
    cols = []
    for j in range(n):
        if sp.u.dim <= j < sp.u.dim + sp.v.dim + sp.k.dim:
            cols.append([0] * n)
            continue
        x = solve(E, (A @ Q).col(j))
        if x is None:
            raise InvariantViolation("A does not map U^o into im E")
        cols.append([-c for c in x])
    R = RatMatrix.from_columns(cols, n)
    t = WeakTransform(P, Q, R)
    inv = StrangenessInvariants(d=sp.u.dim, a=sp.k.dim, s=sp.v.dim)
    if inv != invariants((E, A)):
        raise InvariantViolation(f"splitting dimensions {inv} disagree with the invariants")
    canon = PencilSystem.rational(*canonical_pair(m, n, inv))
    got = act(t, (E, A))
    if (got.E, got.A) != (canon.E, canon.A):
        raise InvariantViolation("witness transform does not produce the normal form")
    return canon, t
