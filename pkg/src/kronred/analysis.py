"""Structural invariants read off iterated reductions.

Index conventions: ``beta_obs[j]`` is the observation defect after ``j``
observation reductions (it counts ``L_j`` blocks), ``beta_ctl[j]`` the
control defect after ``j`` control reductions (``L_j^T`` blocks) and
``alpha[j - 1]`` the nilpotency defect after ``j - 1`` observation
reductions (nilpotent blocks of size ``j``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .errors import (EquivalenceViolation, IdentityViolation,
                     MonotonicityViolation, NonInvertibleCore, NotStalled,
                     UnsupportedBackend)
from .linalg import RatMatrix, det_poly, poly_eval, rank, rational_roots
from .reduction import PencilSystem, control, observe
from .zmod import AbInvariants

__all__ = [
    "DEFAULT_CAP",
    "Chain",
    "DefectSequences",
    "IndexReport",
    "KroneckerStructure",
    "ResolventReport",
    "StructureReport",
    "observation_chain",
    "control_chain",
    "defect_sequences",
    "indices",
    "index_zero_equivalences",
    "kronecker_structure",
    "delta_chain",
    "resolvent",
    "defect_dimension_identities",
    "analyze",
]

DEFAULT_CAP = 32
Count = Union[int, AbInvariants]
Index = Union[int, str]


@dataclass(frozen=True)
class Chain:
    """``systems[n]`` is the n-times reduced system.

    ``index`` is the first n with ``systems[n] == systems[n + 1]``, or None
    if no stall happened within ``cap`` steps.
    """

    systems: tuple
    index: Optional[int]
    cap: int

    @property
    def depth(self) -> int:
        return self.index if self.index is not None else self.cap

    def at(self, n: int) -> PencilSystem:
        """The n-times reduced system; constant after the stall."""
        if n < len(self.systems):
            return self.systems[n]
        if self.index is None:
            raise NotStalled(f"depth {n} lies beyond the cap {self.cap}")
        return self.systems[-1]


def _chain(sys: PencilSystem, step, cap: int) -> Chain:
    if cap < 1:
        raise ValueError("cap must be at least 1")
    systems = [sys]
    for n in range(cap):
        nxt = step(systems[-1])
        if nxt.same_spaces(systems[-1]):
            return Chain(tuple(systems), n, cap)
        systems.append(nxt)
    return Chain(tuple(systems), None, cap)


def observation_chain(sys: PencilSystem, cap: int = DEFAULT_CAP) -> Chain:
    return _chain(sys, observe, cap)


def control_chain(sys: PencilSystem, cap: int = DEFAULT_CAP) -> Chain:
    return _chain(sys, control, cap)


def _nonzero(x: Count) -> bool:
    return bool(x)


def _strip(values: list) -> list:
    while values and not _nonzero(values[-1]):
        values.pop()
    return values


# ---------------------------------------------------------------------------
# defect sequences

@dataclass(frozen=True)
class DefectSequences:
    alpha: tuple
    beta_obs: tuple
    beta_ctl: tuple
    truncated_at: Optional[int] = None

    def to_json(self) -> dict:
        def enc(x):
            return x.to_json() if isinstance(x, AbInvariants) else x
        return {
            "alpha": [enc(x) for x in self.alpha],
            "beta_obs": [enc(x) for x in self.beta_obs],
            "beta_ctl": [enc(x) for x in self.beta_ctl],
            "truncated_at": self.truncated_at,
        }


def _sequences(obs: Chain, ctl: Chain) -> DefectSequences:
    inv = obs.systems[0].inv
    beta_obs = [inv(obs.at(j).coker_pline) for j in range(obs.depth)]
    beta_ctl = [inv(ctl.at(j).ker_rline) for j in range(ctl.depth)]
    alpha = _strip([inv(obs.at(j).im_prline) for j in range(obs.depth)])
    # the same nilpotency defects must appear along the control chain
    from_ctl = _strip([inv(ctl.at(j).coim_prline) for j in range(ctl.depth)])
    if obs.index is not None and ctl.index is not None and alpha != from_ctl:
        raise EquivalenceViolation(f"nilpotency defects differ by path: {alpha} vs {from_ctl}")
    truncated = None if obs.index is not None and ctl.index is not None else obs.cap
    return DefectSequences(tuple(alpha), tuple(beta_obs), tuple(beta_ctl), truncated)


def defect_sequences(sys: PencilSystem, cap: int = DEFAULT_CAP) -> DefectSequences:
    return _sequences(observation_chain(sys, cap), control_chain(sys, cap))


# ---------------------------------------------------------------------------
# indices

@dataclass(frozen=True)
class IndexReport:
    obs_index: Index
    ctl_index: Index
    cap: int

    def to_json(self) -> dict:
        return {"obs_index": self.obs_index, "ctl_index": self.ctl_index, "cap": self.cap}


def _index_value(chain: Chain) -> Index:
    return chain.index if chain.index is not None else f"≥{chain.cap}"


def _indmax(chain: Chain, first, second) -> int:
    """1 + the last depth where one of the two defect objects is nonzero."""
    last = -1
    for n in range(chain.depth):
        s = chain.at(n)
        if _nonzero(s.inv(first(s))) or _nonzero(s.inv(second(s))):
            last = n
    return last + 1


def _indices(obs: Chain, ctl: Chain) -> IndexReport:
    if obs.index is not None:
        bound = _indmax(obs, lambda s: s.coim_prline, lambda s: s.coker_pline)
        if bound != obs.index:
            raise EquivalenceViolation(f"observation index {obs.index} but defects say {bound}")
    if ctl.index is not None:
        bound = _indmax(ctl, lambda s: s.im_prline, lambda s: s.ker_rline)
        if bound != ctl.index:
            raise EquivalenceViolation(f"control index {ctl.index} but defects say {bound}")
    if obs.index is not None and ctl.index is not None:
        seqs = _sequences(obs, ctl)
        regular = not any(map(_nonzero, seqs.beta_obs + seqs.beta_ctl))
        if regular and obs.index != ctl.index:
            raise EquivalenceViolation("regular pencil with different indices")
    return IndexReport(_index_value(obs), _index_value(ctl), obs.cap)


def indices(sys: PencilSystem, cap: int = DEFAULT_CAP) -> IndexReport:
    return _indices(observation_chain(sys, cap), control_chain(sys, cap))


def index_zero_equivalences(sys: PencilSystem, cap: int = DEFAULT_CAP) -> dict:
    """The four equivalent conditions for index zero, per side."""
    obs, ctl = observation_chain(sys, cap), control_chain(sys, cap)
    inv = sys.inv
    so, sc = observe(sys), control(sys)
    zero = lambda sq: not _nonzero(inv(sq))  # noqa: E731

    def all_along(chain, first, second):
        return chain.index is not None and all(
            zero(first(chain.at(n))) and zero(second(chain.at(n)))
            for n in range(chain.depth + 1))

    observation = [
        obs.index == 0,
        zero(sys.coker_E),
        zero(sys.coim_prline) and zero(sys.coker_pline) and zero(so.coker_E),
        all_along(obs, lambda s: s.coim_prline, lambda s: s.coker_pline),
    ]
    control_side = [
        ctl.index == 0,
        zero(sys.ker_E),
        zero(sys.im_prline) and zero(sys.ker_rline) and zero(sc.ker_E),
        all_along(ctl, lambda s: s.im_prline, lambda s: s.ker_rline),
    ]
    for name, values in (("observation", observation), ("control", control_side)):
        if len(set(values)) != 1:
            raise EquivalenceViolation(f"{name} index-zero conditions split: {values}")
    return {"observation": observation, "control": control_side}


# ---------------------------------------------------------------------------
# Kronecker structure

@dataclass(frozen=True)
class KroneckerStructure:
    nilpotent_blocks: dict
    l_blocks: dict
    lt_blocks: dict
    core_dim: int
    core_E: RatMatrix
    core_A: RatMatrix

    def counts(self) -> tuple:
        return (self.nilpotent_blocks, self.l_blocks, self.lt_blocks, self.core_dim)

    def to_json(self) -> dict:
        return {
            "nilpotent_blocks": {str(k): v for k, v in sorted(self.nilpotent_blocks.items())},
            "l_blocks": {str(k): v for k, v in sorted(self.l_blocks.items())},
            "lt_blocks": {str(k): v for k, v in sorted(self.lt_blocks.items())},
            "core_dim": self.core_dim,
            "core_E": self.core_E.to_strings(),
            "core_A": self.core_A.to_strings(),
        }


def _require_rational(sys: PencilSystem, what: str) -> None:
    if sys.backend != "rational":
        raise UnsupportedBackend(f"{what} needs the rational backend")


def _kronecker(sys: PencilSystem, obs: Chain, ctl: Chain) -> KroneckerStructure:
    if obs.index is None or ctl.index is None:
        raise NotStalled("reductions did not stall within the cap")
    seqs = _sequences(obs, ctl)
    nil = {j + 1: c for j, c in enumerate(seqs.alpha) if c}
    lb = {k: c for k, c in enumerate(seqs.beta_obs) if c}
    ltb = {k: c for k, c in enumerate(seqs.beta_ctl) if c}
    core = control(obs.at(obs.index), ctl.index)
    if not control(core).same_spaces(core) or not observe(core).same_spaces(core):
        raise NotStalled("fully reduced system is not stable")
    E, A = core.E, core.A
    if not E.is_square() or rank(E) != E.rows:
        raise NonInvertibleCore(f"core E of shape {E.shape} is not invertible")
    delta = E.rows
    m, n = sys.codomain_invariant, sys.domain_invariant
    rows = (sum(j * c for j, c in nil.items()) + sum((k + 1) * c for k, c in lb.items())
            + sum(k * c for k, c in ltb.items()) + delta)
    cols = (sum(j * c for j, c in nil.items()) + sum(k * c for k, c in lb.items())
            + sum((k + 1) * c for k, c in ltb.items()) + delta)
    if (rows, cols) != (m, n):
        raise IdentityViolation(f"blocks fill {rows}x{cols}, system is {m}x{n}")
    return KroneckerStructure(nil, lb, ltb, delta, E, A)


def kronecker_structure(sys: PencilSystem, cap: int = DEFAULT_CAP) -> KroneckerStructure:
    _require_rational(sys, "the Kronecker structure")
    return _kronecker(sys, observation_chain(sys, cap), control_chain(sys, cap))


# ---------------------------------------------------------------------------
# delta chain

def delta_chain(sys: PencilSystem, cap: int = DEFAULT_CAP) -> list[tuple[int, int]]:
    """``(dim U^{k-1}/U^k, dim W^{k-1}/W^k)`` for k = 1 .. observation index."""
    _require_rational(sys, "the delta chain")
    obs = observation_chain(sys, cap)
    if obs.index is None:
        raise NotStalled("observation chain did not stall")
    out = []
    for k in range(1, obs.index + 1):
        prev, cur = obs.at(k - 1), obs.at(k)
        out.append((prev.domain_invariant - cur.domain_invariant,
                    prev.codomain_invariant - cur.codomain_invariant))
    flat = [x for du, dw in out for x in (dw, du)] + [0]
    # flat runs dW_1, dU_1, dW_2, dU_2, ..., 0 and must never increase
    for k in range(len(flat) - 1):
        if flat[k + 1] > flat[k]:
            raise MonotonicityViolation(f"delta chain increases: {out}")
    return out


# ---------------------------------------------------------------------------
# resolvent

@dataclass(frozen=True)
class ResolventReport:
    kind: str
    certificate: tuple
    excluded: tuple = ()
    blocking_defect: Optional[dict] = None

    def contains(self, lam) -> bool:
        if self.kind == "empty":
            return False
        if self.kind == "all":
            return True
        if self.kind == "cofinite":
            return Fraction(lam) not in self.excluded
        return lam in self.certificate

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "certificate": [str(c) for c in self.certificate],
            "excluded": [str(c) for c in self.excluded],
            "blocking_defect": self.blocking_defect,
        }


def _first_blocking(obs: Chain, ctl: Chain) -> Optional[dict]:
    for j in range(obs.depth):
        if _nonzero(obs.at(j).inv(obs.at(j).coker_pline)):
            return {"defect": "beta_obs", "depth": j}
    for j in range(ctl.depth):
        if _nonzero(ctl.at(j).inv(ctl.at(j).ker_rline)):
            return {"defect": "beta_ctl", "depth": j}
    return None


def _integer_roots(coeffs: list[int]) -> list[int]:
    return sorted({int(r) for r in rational_roots([Fraction(c) for c in coeffs])
                   if r.denominator == 1})


def _resolvent(sys: PencilSystem, obs: Chain, ctl: Chain) -> ResolventReport:
    blocking = _first_blocking(obs, ctl)
    if sys.backend == "integer":
        return _integer_resolvent(sys, blocking)
    E, A = sys.E, sys.A
    if not E.is_square():
        if blocking is None and obs.index is not None and ctl.index is not None:
            raise EquivalenceViolation("non-square pencil without a blocking defect")
        return ResolventReport("empty", (), (), blocking)
    p = det_poly(E, A)
    if not p:
        if blocking is None and obs.index is not None and ctl.index is not None:
            raise EquivalenceViolation("singular pencil without a blocking defect")
        return ResolventReport("empty", tuple(p), (), blocking)
    if blocking is not None:
        raise EquivalenceViolation(f"regular pencil with blocking defect {blocking}")
    if len(p) == 1:
        return ResolventReport("all", tuple(p))
    return ResolventReport("cofinite", tuple(p), tuple(sorted(rational_roots(p))))


def _integer_resolvent(sys: PencilSystem, blocking) -> ResolventReport:
    E, A = sys.E, sys.A
    free = (E.domain.relations.cols == 0 and E.codomain.relations.cols == 0)
    if not free:
        if blocking is not None:
            return ResolventReport("empty", (), (), blocking)
        raise UnsupportedBackend("resolvent over Z needs free domain and codomain")
    Em, Am = E.matrix, A.matrix
    if not Em.is_square():
        return ResolventReport("empty", (), (), blocking)
    p = [int(c) for c in det_poly(RatMatrix(Em.rows, Em.cols, Em.entries),
                                  RatMatrix(Am.rows, Am.cols, Am.entries))]
    if not p:
        return ResolventReport("empty", (), (), blocking)
    if blocking is not None:
        raise EquivalenceViolation(f"integer pencil invertible somewhere with defect {blocking}")
    minus = list(p) + [0] * (1 - len(p))
    plus = list(minus)
    minus[0] -= 1
    plus[0] += 1
    if not any(minus) or not any(plus):
        return ResolventReport("all", tuple(p))
    found = sorted(set(_integer_roots(_strip_poly(minus))) | set(_integer_roots(_strip_poly(plus))))
    for lam in found:
        if abs(poly_eval(p, lam)) != 1:
            raise EquivalenceViolation(f"candidate {lam} is not a unit point")
    return ResolventReport("finite_set", tuple(found))


def _strip_poly(coeffs: list[int]) -> list[int]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return out


def resolvent(sys: PencilSystem, cap: int = DEFAULT_CAP) -> ResolventReport:
    return _resolvent(sys, observation_chain(sys, cap), control_chain(sys, cap))


# ---------------------------------------------------------------------------
# dimension identities

def defect_dimension_identities(sys: PencilSystem) -> dict:
    """Relations between defects and kernels/cokernels of the reduced systems."""
    _require_rational(sys, "the dimension identities")
    so, sc = observe(sys), control(sys)

    def ker(m):
        return m.cols - rank(m)

    def coker(m):
        return m.rows - rank(m)

    alpha1 = sys.inv(sys.im_prline)
    beta_o = sys.inv(sys.coker_pline)
    beta_c = sys.inv(sys.ker_rline)
    E, A, Eo, Ao, Ec, Ac = sys.E, sys.A, so.E, so.A, sc.E, sc.A
    record = {
        "alpha1": alpha1,
        "beta_obs": beta_o,
        "beta_ctl": beta_c,
        "alpha1 = ker E - ker E^o": (alpha1, ker(E) - ker(Eo)),
        "alpha1 = coker E - coker E^c": (alpha1, coker(E) - coker(Ec)),
        "beta_obs = coker A - coker A^o": (beta_o, coker(A) - coker(Ao)),
        "beta_ctl = ker A - ker A^c": (beta_c, ker(A) - ker(Ac)),
        "0 = ker A - ker A^o": (0, ker(A) - ker(Ao)),
        "0 = coker A - coker A^c": (0, coker(A) - coker(Ac)),
        "coker E - coker E^o = alpha1 + beta_obs": (coker(E) - coker(Eo), alpha1 + beta_o),
        "ker E - ker E^c = alpha1 + beta_ctl": (ker(E) - ker(Ec), alpha1 + beta_c),
    }
    for name, value in record.items():
        if isinstance(value, tuple) and value[0] != value[1]:
            raise IdentityViolation(f"{name}: {value[0]} != {value[1]}")
    return record


# ---------------------------------------------------------------------------
# everything at once

@dataclass
class StructureReport:
    backend: str
    shape: tuple
    defects: Optional[DefectSequences] = None
    indices: Optional[IndexReport] = None
    kronecker: Optional[KroneckerStructure] = None
    resolvent: Optional[ResolventReport] = None
    strangeness: Optional[object] = None
    normal_form: Optional[tuple] = None
    grid: Optional[list] = None
    warnings: list = field(default_factory=list)


ALL_ANALYSES = ("defects", "indices", "kronecker", "strangeness", "resolvent", "grid")


def analyze(sys: PencilSystem, cap: int = DEFAULT_CAP,
            analyses=ALL_ANALYSES) -> StructureReport:
    from . import strangeness
    from .reduction import reduce_grid

    analyses = set(analyses)
    unknown = analyses - set(ALL_ANALYSES)
    if unknown:
        raise ValueError(f"unknown analyses: {sorted(unknown)}")
    obs, ctl = observation_chain(sys, cap), control_chain(sys, cap)
    report = StructureReport(sys.backend, (sys.codomain_invariant, sys.domain_invariant))
    if obs.index is None:
        report.warnings.append(f"observation chain truncated at depth {cap}")
    if ctl.index is None:
        report.warnings.append(f"control chain truncated at depth {cap}")
    if "defects" in analyses:
        report.defects = _sequences(obs, ctl)
    if "indices" in analyses:
        report.indices = _indices(obs, ctl)
    if "kronecker" in analyses:
        _require_rational(sys, "the Kronecker structure")
        report.kronecker = _kronecker(sys, obs, ctl)
    if "resolvent" in analyses:
        report.resolvent = _resolvent(sys, obs, ctl)
    if "strangeness" in analyses:
        _require_rational(sys, "the strangeness normal form")
        report.strangeness = strangeness.invariants(sys)
        report.normal_form = strangeness.normal_form(sys)
    if "grid" in analyses:
        depth = min(3, cap)
        grid = reduce_grid(sys, depth, depth)
        report.grid = [[[str(c.codomain_invariant), str(c.domain_invariant)] for c in row]
                       for row in grid]
    return report
