"""Exactness audits for the diagrams attached to one reduction step.

Every object in these diagrams is a subquotient of the original domain or
codomain, and every arrow is induced by the identity, ``E`` or ``A`` of
the original system.  For a map ``f: S0/T0 -> S1/T1`` we check

* well-definedness: ``f(S0) <= S1`` and ``f(T0) <= T1``;
* exactness at ``S1/T1``: ``f(S0) + T1 == S1 & g^-1(T2)``;
* the zero ends: ``S0 & f^-1(T1) == T0`` on the left and
  ``f(S) + T_last == S_last`` on the right.

These are equalities of canonical echelon (Q) or Hermite (Z) bases, so
over Z they are the explicit factoring checks.  As an independent
control, alternating dimension sums (Q) or alternating free ranks (Z)
must vanish.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import ExactnessViolation
from .reduction import PencilSystem, Subquotient, control, identified, observe

__all__ = ["ExactSequence", "verify_exact", "sequences", "audit", "defcomm_checks"]


@dataclass(frozen=True)
class ExactSequence:
    """``0 -> objs[0] -> ... -> objs[-1] -> 0``; ``maps[i]`` goes from
    ``objs[i]`` to ``objs[i+1]`` (None is the identity)."""

    name: str
    objs: tuple
    maps: tuple


def _image(space, mat):
    return space if mat is None else space.mapped(mat)


def _preimage(space, mat):
    return space if mat is None else space.preimage(mat)


def verify_exact(seq: ExactSequence, kind=None) -> None:
    objs, maps = seq.objs, seq.maps
    if len(maps) != len(objs) - 1:
        raise ValueError("need one map between consecutive objects")
    for i, f in enumerate(maps):
        src, dst = objs[i], objs[i + 1]
        if not (_image(src.top, f) <= dst.top and _image(src.bottom, f) <= dst.bottom):
            raise ExactnessViolation(f"{seq.name}: arrow {i} is not well defined")
    first, last = objs[0], objs[-1]
    if maps:
        if first.top & _preimage(objs[1].bottom, maps[0]) != first.bottom:
            raise ExactnessViolation(f"{seq.name}: first arrow is not injective")
        if _image(objs[-2].top, maps[-1]) + last.bottom != last.top:
            raise ExactnessViolation(f"{seq.name}: last arrow is not surjective")
    elif first.top != first.bottom:
        raise ExactnessViolation(f"{seq.name}: lone object is not zero")
    for i in range(1, len(objs) - 1):
        f, g = maps[i - 1], maps[i]
        mid = objs[i]
        im_f = _image(objs[i - 1].top, f) + mid.bottom
        ker_g = mid.top & _preimage(objs[i + 1].bottom, g)
        if im_f != ker_g:
            raise ExactnessViolation(f"{seq.name}: not exact at position {i}")
    _alternating(seq, kind)


def _alternating(seq: ExactSequence, kind) -> None:
    total = 0
    for i, sq in enumerate(seq.objs):
        r = sq.top.dim - sq.bottom.dim  # rank of the quotient, both backends
        total += r if i % 2 == 0 else -r
    if total:
        raise ExactnessViolation(f"{seq.name}: alternating rank sum is {total}")
    if kind is None or kind.space.__name__ != "Lattice":
        return
    # finite groups: orders alternate multiplicatively
    invs = [kind.invariant(sq.top, sq.bottom) for sq in seq.objs]
    if all(x.free_rank == 0 for x in invs):
        num = den = 1
        for i, x in enumerate(invs):
            if i % 2 == 0:
                num *= x.torsion_order
            else:
                den *= x.torsion_order
        if num != den:
            raise ExactnessViolation(f"{seq.name}: orders do not alternate ({num} vs {den})")


def sequences(sys: PencilSystem) -> list[ExactSequence]:
    """All exact sequences attached to one observation and one control step."""
    so, sc = observe(sys), control(sys)
    soc = control(so)
    so2, sc2 = observe(so), control(sc)
    E, A = sys.E_ambient, sys.A_ambient
    S = ExactSequence
    return [
        # defining rows of the two reductions
        S("obs-domain", (so.U, sys.U, sys.coim_pline), (None, None)),
        S("obs-codomain", (so.W, sys.W, sys.coker_E), (None, None)),
        S("ctl-domain", (sys.ker_E, sys.U, sc.U), (None, None)),
        S("ctl-codomain", (sys.im_rline, sys.W, sc.W), (None, None)),
        # kernel/cokernel sequence of the nilpotency map
        S("ker-coker", (so.ker_E, sys.ker_E, sys.coker_E, sc.coker_E), (None, A, None)),
        # E across the two reductions
        S("E-across-steps", (soc.ker_E, sc.ker_E, so.coker_E, soc.coker_E), (None, E, None)),
        # observation side, defect beta
        S("beta-obs-row1", (so.ker_A, sys.ker_A), (None,)),
        S("beta-obs-row4", (so.coker_A, sys.coker_A, sys.coker_pline), (None, None)),
        S("beta-obs-col3", (sys.coim_pline, sys.coker_E, sys.coker_pline), (A, None)),
        # observation side, defect alpha
        S("alpha-obs-row1", (so.ker_E, sys.ker_E, sys.coim_prline), (None, None)),
        S("alpha-obs-row3", (so2.W, so.W, so.coker_E), (None, None)),
        S("alpha-obs-col3", (sys.coim_prline, sys.coim_pline, so.coker_E), (None, E)),
        # control side, defect beta
        S("beta-ctl-row1", (sys.ker_rline, sys.ker_A, sc.ker_A), (None, None)),
        S("beta-ctl-row4", (sys.coker_A, sc.coker_A), (None,)),
        S("beta-ctl-col1", (sys.ker_rline, sys.ker_E, sys.im_rline), (None, A)),
        # control side, defect alpha
        S("alpha-ctl-col1", (sc.ker_E, sys.im_rline, sys.im_prline), (E, None)),
        S("alpha-ctl-row3", (sys.im_prline, sys.coker_E, sc.coker_E), (None, None)),
        S("alpha-ctl-col3", (sc2.U, sc.W, sc.coker_E), (E, None)),
    ]


def audit(sys: PencilSystem) -> list[str]:
    """Verify every sequence; returns the names checked."""
    names = []
    for seq in sequences(sys):
        verify_exact(seq, sys.kind)
        names.append(seq.name)
    _dimension_columns(sys)
    return names


def _dimension_columns(sys: PencilSystem) -> None:
    """Invariant equalities implied by the exact columns and rows."""
    so, sc = observe(sys), control(sys)
    inv = sys.inv
    checks = [
        ("ker A", inv(so.ker_A), inv(sys.ker_A)),
        ("coker A", inv(sc.coker_A), inv(sys.coker_A)),
        ("ker E^o = ker prline", inv(so.ker_E), inv(sys.ker_prline)),
        ("coker E^c = coker prline",
         inv(sc.coker_E), inv(Subquotient(sys.W.top, sys.im_E_top + sys.im_rline_top))),
        ("coim prline = im prline", inv(sys.coim_prline), inv(sys.im_prline)),
        ("coim pline = im pline", inv(sys.coim_pline), inv(sys.im_pline)),
    ]
    for name, left, right in checks:
        if left != right:
            raise ExactnessViolation(f"{name}: {left} != {right}")


def defcomm_checks(sys: PencilSystem, depth: int = 4,
                   grid: Optional[Sequence[Sequence[PencilSystem]]] = None) -> int:
    """Defect objects along reduction paths with ``m + n <= depth``.

    ``grid[n][m]`` is ``n`` observation then ``m`` control reductions.
    Returns the number of comparisons made.
    """
    if grid is None:
        grid = []
        row = sys
        for n in range(depth + 1):
            cells = [row]
            for _ in range(depth - n):
                cells.append(control(cells[-1]))
            grid.append(cells)
            row = observe(row)
    inv = sys.inv
    count = 0

    def same(label, a, b):
        nonlocal count
        count += 1
        if a != b:
            raise ExactnessViolation(f"{label}: {a} != {b}")

    for n in range(depth + 1):
        for m in range(depth + 1 - n):
            cell = grid[n][m]
            # control defect unchanged by observation, observation defect by control
            same(f"ker rline o{n}c{m}", inv(cell.ker_rline), inv(grid[0][m].ker_rline))
            same(f"coker pline o{n}c{m}", inv(cell.coker_pline), inv(grid[n][0].coker_pline))
            if not (identified(cell.ker_rline, grid[0][m].ker_rline)
                    and identified(cell.coker_pline, grid[n][0].coker_pline)):
                raise ExactnessViolation(f"defect objects move at o{n}c{m}")
            k = n + m
            alpha = inv(cell.coim_prline)
            same(f"coim prline o{n}c{m} vs o{k}", alpha, inv(grid[k][0].coim_prline))
            same(f"coim vs im prline o{n}c{m}", alpha, inv(cell.im_prline))
            same(f"im prline o{n}c{m} vs c{k}", inv(cell.im_prline),
                 inv(grid[0][k].im_prline))
    return count
