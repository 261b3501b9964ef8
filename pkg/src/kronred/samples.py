"""Seeded random systems, structure specs and transforms for testing."""

from __future__ import annotations

import random

from .blocks import StructureSpec, assemble, make_block, unimodular
from .linalg import RatMatrix
from .reduction import PencilSystem
from .strangeness import WeakTransform
from .zmod import IntMatrix, Lattice

__all__ = [
    "random_rational_system",
    "random_integer_system",
    "random_square_system",
    "random_spec",
    "random_weak_transform",
    "rational_corpus",
    "integer_corpus",
    "single_block_systems",
]


def _low_rank(rng: random.Random, m: int, n: int, r: int, lo: int = -2, hi: int = 2):
    left = [[rng.randint(lo, hi) for _ in range(r)] for _ in range(m)]
    right = [[rng.randint(lo, hi) for _ in range(n)] for _ in range(r)]
    return [[sum(left[i][k] * right[k][j] for k in range(r)) for j in range(n)]
            for i in range(m)]


def random_rational_system(rng: random.Random, max_dim: int = 12) -> PencilSystem:
    """Mostly singular pencils: E and A are low-rank products, shapes may be empty.

    A third of the samples are scrambled block sums, which reach the deeper
    reduction chains that plain random matrices rarely produce.
    """
    if rng.random() < 1 / 3:
        spec = random_spec(rng, max_total=max_dim, seed=rng.randrange(2**31))
        return assemble(spec).system
    m = rng.randint(0, max_dim)
    n = rng.randint(0, max_dim)
    if rng.random() < 0.1:
        m, n = rng.choice([(0, n), (m, 0), (1, 0), (0, 1)])
    top = min(m, n)
    E = _low_rank(rng, m, n, rng.randint(0, top))
    A = _low_rank(rng, m, n, rng.randint(0, top))
    return PencilSystem.rational(RatMatrix.from_rows(E, cols=n), RatMatrix.from_rows(A, cols=n))


def random_square_system(rng: random.Random, max_dim: int = 8) -> PencilSystem:
    """Square pencils: low-rank products, or block sums with as many L as LT
    blocks so that singular pencils also arise from deeper defects."""
    if rng.random() < 0.4:
        n_l = rng.randint(0, 2)
        while True:
            spec = random_spec(rng, max_total=max_dim, max_k=3, max_core=3,
                               seed=rng.randrange(2**31))
            lb = {k: 0 for k in range(4)}
            ltb = dict(lb)
            for _ in range(n_l):
                lb[rng.randint(0, 2)] += 1
                ltb[rng.randint(0, 2)] += 1
            spec = StructureSpec(spec.nilpotent_blocks, lb, ltb, spec.core_dim, spec.seed)
            if max(spec.shape) <= max_dim:
                return assemble(spec).system
    n = rng.randint(1, max_dim)
    E = _low_rank(rng, n, n, rng.randint(0, n))
    A = _low_rank(rng, n, n, rng.randint(0, n))
    return PencilSystem.rational(RatMatrix.from_rows(E, cols=n), RatMatrix.from_rows(A, cols=n))


def random_integer_system(rng: random.Random, max_gens: int = 4) -> PencilSystem:
    """E, A with entries in [-3, 3]; relations on U lie inside the preimage
    of the relations on W, so both matrices are morphisms."""
    m = rng.randint(1, max_gens)
    n = rng.randint(1, max_gens)
    E = IntMatrix.from_rows([[rng.randint(-3, 3) for _ in range(n)] for _ in range(m)], cols=n)
    A = IntMatrix.from_rows([[rng.randint(-3, 3) for _ in range(n)] for _ in range(m)], cols=n)
    w_rel = [[rng.randint(-3, 3) for _ in range(m)] for _ in range(rng.randint(0, m))]
    W = IntMatrix.from_columns(w_rel, m)
    allowed = Lattice.span_columns(W).preimage(E) & Lattice.span_columns(W).preimage(A)
    u_rel = []
    for _ in range(rng.randint(0, allowed.dim)):
        coeffs = [rng.randint(-2, 2) for _ in range(allowed.dim)]
        vec = [sum(c * allowed.basis[i, j] for i, c in enumerate(coeffs)) for j in range(n)]
        if any(vec):
            u_rel.append(vec)
    U = IntMatrix.from_columns(u_rel, n)
    return PencilSystem.integer(E, A, U, W)


def random_spec(rng: random.Random, max_total: int = 40, max_k: int = 4,
                max_core: int = 6, seed: int | None = None) -> StructureSpec:
    """Random block counts whose pencil has at most ``max_total`` rows and columns."""
    seed = rng.randrange(2**31) if seed is None else seed
    while True:
        spec = StructureSpec(
            nilpotent_blocks={k: rng.choice((0, 0, 1, 2)) for k in range(1, max_k + 1)},
            l_blocks={k: rng.choice((0, 0, 1)) for k in range(max_k + 1)},
            lt_blocks={k: rng.choice((0, 0, 1)) for k in range(max_k + 1)},
            core_dim=rng.randint(0, max_core),
            seed=seed,
        )
        if max(spec.shape) <= max_total:
            return spec


def random_weak_transform(rng: random.Random, m: int, n: int) -> WeakTransform:
    R = RatMatrix.from_rows([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)], cols=n)
    return WeakTransform(unimodular(m, rng), unimodular(n, rng), R)


def rational_corpus(count: int, seed: int = 0, max_dim: int = 12) -> list[PencilSystem]:
    rng = random.Random(seed)
    return [random_rational_system(rng, max_dim) for _ in range(count)]


def integer_corpus(count: int, seed: int = 0, max_gens: int = 4) -> list[PencilSystem]:
    rng = random.Random(seed)
    return [random_integer_system(rng, max_gens) for _ in range(count)]


def single_block_systems(kmax: int = 5) -> dict[str, PencilSystem]:
    out = {}
    for k in range(1, kmax + 1):
        out[f"N{k}"] = PencilSystem.rational(*make_block("N", k))
    for k in range(kmax + 1):
        out[f"L{k}"] = PencilSystem.rational(*make_block("L", k))
        out[f"LT{k}"] = PencilSystem.rational(*make_block("LT", k))
    return out
