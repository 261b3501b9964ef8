"""Canonical Kronecker blocks and scrambled pencils with known structure."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import BadSize
from .linalg import RatMatrix
from .reduction import PencilSystem

__all__ = ["make_block", "StructureSpec", "Assembled", "assemble",
           "unimodular", "companion"]


def make_block(kind: str, k: int) -> tuple[RatMatrix, RatMatrix]:
    """``(E, A)`` of a nilpotent (``"N"``), ``"L"`` or ``"LT"`` block.

    >>> E, A = make_block("L", 1)
    >>> E.to_strings(), A.to_strings()
    ([['1'], ['0']], [['0'], ['1']])
    >>> make_block("L", 0)[0].shape
    (1, 0)
    """
    if not isinstance(k, int) or k < 0 or (kind == "N" and k < 1):
        raise BadSize(f"no {kind} block of size {k}")
    if kind == "N":
        E = RatMatrix(k, k, [1 if j == i + 1 else 0 for i in range(k) for j in range(k)])
        return E, RatMatrix.identity(k)
    if kind in ("L", "LT"):
        E = RatMatrix(k + 1, k, [1 if i == j else 0 for i in range(k + 1) for j in range(k)])
        A = RatMatrix(k + 1, k, [1 if i == j + 1 else 0 for i in range(k + 1) for j in range(k)])
        return (E, A) if kind == "L" else (E.T, A.T)
    raise BadSize(f"unknown block kind {kind!r}")


def _counts(d) -> dict:
    out = {int(k): int(v) for k, v in dict(d or {}).items()}
    if any(v < 0 for v in out.values()):
        raise BadSize("block counts must be non-negative")
    return {k: v for k, v in sorted(out.items()) if v}


@dataclass(frozen=True)
class StructureSpec:
    nilpotent_blocks: dict = field(default_factory=dict)
    l_blocks: dict = field(default_factory=dict)
    lt_blocks: dict = field(default_factory=dict)
    core_dim: int = 0
    seed: int = 0

    def __post_init__(self):
        for name in ("nilpotent_blocks", "l_blocks", "lt_blocks"):
            object.__setattr__(self, name, _counts(getattr(self, name)))
        if self.core_dim < 0:
            raise BadSize("core dimension must be non-negative")
        if any(k < 1 for k in self.nilpotent_blocks):
            raise BadSize("nilpotent blocks have size at least 1")
        if any(k < 0 for k in list(self.l_blocks) + list(self.lt_blocks)):
            raise BadSize("L blocks have non-negative index")

    @property
    def shape(self) -> tuple[int, int]:
        rows = cols = self.core_dim
        for k, c in self.nilpotent_blocks.items():
            rows += k * c
            cols += k * c
        for k, c in self.l_blocks.items():
            rows += (k + 1) * c
            cols += k * c
        for k, c in self.lt_blocks.items():
            rows += k * c
            cols += (k + 1) * c
        return rows, cols

    def counts(self) -> tuple:
        return (self.nilpotent_blocks, self.l_blocks, self.lt_blocks, self.core_dim)

    def to_json(self) -> dict:
        return {
            "nilpotent_blocks": {str(k): v for k, v in self.nilpotent_blocks.items()},
            "l_blocks": {str(k): v for k, v in self.l_blocks.items()},
            "lt_blocks": {str(k): v for k, v in self.lt_blocks.items()},
            "core_dim": self.core_dim,
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, doc: dict, seed: int | None = None) -> "StructureSpec":
        # short keys N, L, LT are accepted as aliases
        return cls(
            nilpotent_blocks=doc.get("nilpotent_blocks", doc.get("N", {})),
            l_blocks=doc.get("l_blocks", doc.get("L", {})),
            lt_blocks=doc.get("lt_blocks", doc.get("LT", {})),
            core_dim=int(doc.get("core_dim", doc.get("core", 0))),
            seed=int(doc.get("seed", 0) if seed is None else seed),
        )


def unimodular(n: int, rng: random.Random, bound: int = 5, steps: int | None = None) -> RatMatrix:
    """Random integer matrix of determinant 1 with entries in [-bound, bound].

    Built from elementary row additions; a step that would leave the bound
    is skipped.
    """
    m = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(3 * n if steps is None else steps):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        c = rng.choice((-1, 1))
        row = [a + c * b for a, b in zip(m[i], m[j])]
        if max(map(abs, row)) <= bound:
            m[i] = row
    return RatMatrix.from_rows(m, cols=n)


def companion(roots) -> RatMatrix:
    """Companion matrix of the monic polynomial with the given roots."""
    coeffs = [1]
    for r in roots:
        # multiply by (x - r); coefficients constant-first
        coeffs = [-r * coeffs[0]] + [coeffs[i - 1] - r * coeffs[i]
                                     for i in range(1, len(coeffs))] + [coeffs[-1]]
    d = len(roots)
    rows = [[0] * d for _ in range(d)]
    for i in range(1, d):
        rows[i][i - 1] = 1
    for i in range(d):
        rows[i][d - 1] = -coeffs[i]
    return RatMatrix.from_rows(rows, cols=d)


@dataclass(frozen=True)
class Assembled:
    system: PencilSystem
    spec: StructureSpec
    E0: RatMatrix
    A0: RatMatrix
    P: RatMatrix
    Q: RatMatrix
    core_roots: tuple


def assemble(spec: StructureSpec) -> Assembled:
    """Block-diagonal pencil for ``spec``, scrambled as ``(P E0 Q, P A0 Q)``."""
    rng = random.Random(spec.seed)
    blocks = []
    for k, c in spec.nilpotent_blocks.items():
        blocks += [make_block("N", k)] * c
    for k, c in spec.l_blocks.items():
        blocks += [make_block("L", k)] * c
    for k, c in spec.lt_blocks.items():
        blocks += [make_block("LT", k)] * c
    width = max(6, spec.core_dim)
    roots = tuple(sorted(rng.sample(range(-width, width + 1), spec.core_dim)))
    if spec.core_dim:
        blocks.append((RatMatrix.identity(spec.core_dim), companion(roots)))
    rng.shuffle(blocks)
    E0 = RatMatrix.block_diag([b[0] for b in blocks])
    A0 = RatMatrix.block_diag([b[1] for b in blocks])
    m, n = spec.shape
    P, Q = unimodular(m, rng), unimodular(n, rng)
    sys = PencilSystem.rational(P @ E0 @ Q, P @ A0 @ Q)
    return Assembled(sys, spec, E0, A0, P, Q, roots)
