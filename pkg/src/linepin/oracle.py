"""Independent checks: sampling search for escaping lines, transversal counts.

Sampling can only refute pinnedness, never prove it.  Candidates that pass
a floating-point filter are snapped to nearby rationals and accepted only
if the whole segment ``{t u : 0 < t <= 1}`` satisfies the family exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from ._exact import is_zero, nullspace, vec
from .linespace import Constraint, concurrent_with_l0, coplanar_with_l0
from .pinning import DirectWitness, LocalSystem, PinningVerdict, _system, verify_escape


class DegenerateTriple(ValueError):
    pass


@dataclass(frozen=True)
class SampleBudget:
    radii: tuple = (Fraction(1), Fraction(1, 4), Fraction(1, 16), Fraction(1, 64))
    grid: int = 9
    random: int = 10_000
    seed: int = 0

    def __post_init__(self):
        rs = [Fraction(r) for r in self.radii]
        if not rs or any(r <= 0 for r in rs) or any(a <= b for a, b in zip(rs, rs[1:])):
            raise ValueError("radii must be positive and strictly decreasing")
        object.__setattr__(self, "radii", tuple(rs))


@dataclass(frozen=True)
class OracleReport:
    refuted: Optional[tuple]
    samples_tested: int
    agreement: bool = True


def _float_filter(system: LocalSystem, pts: np.ndarray) -> np.ndarray:
    lifted = np.concatenate([pts, (pts[:, 1] * pts[:, 2] - pts[:, 0] * pts[:, 3])[:, None]], axis=1)
    scale = np.maximum(np.abs(pts).max(axis=1), 1e-300)
    tol = 1e-9 * scale
    ok = np.ones(len(pts), dtype=bool)
    for grp in system.groups:
        any_piece = np.zeros(len(pts), dtype=bool)
        for piece in grp:
            if not piece:
                any_piece[:] = True
                break
            mat = np.array([[float(x) for x in a] for a in piece])
            any_piece |= np.all(lifted @ mat.T <= tol[:, None], axis=1)
        ok &= any_piece
    return ok


def _snap(row) -> tuple:
    return tuple(Fraction(float(x)).limit_denominator(10 ** 6) for x in row)


def _candidates(budget: SampleBudget):
    rng = np.random.default_rng(budget.seed)
    axis = np.linspace(-1.0, 1.0, budget.grid)
    mesh = np.stack(np.meshgrid(axis, axis, axis, axis, indexing="ij"), axis=-1).reshape(-1, 4)
    per_radius = budget.random // len(budget.radii)
    for r in budget.radii:
        rf = float(r)
        raw = rng.normal(size=(per_radius, 4))
        raw /= np.linalg.norm(raw, axis=1)[:, None]
        raw *= rng.uniform(0, 1, size=(per_radius, 1)) ** 0.25
        yield r, np.concatenate([mesh * rf, raw * rf])


def sample_escape(family, budget: Optional[SampleBudget] = None) -> OracleReport:
    system = _system(family)
    budget = budget or SampleBudget()
    tested = 0
    for _, pts in _candidates(budget):
        pts = pts[np.abs(pts).max(axis=1) > 0]
        tested += len(pts)
        hits = np.nonzero(_float_filter(system, pts))[0]
        for k in hits:
            u = _snap(pts[k])
            if is_zero(u):
                continue
            if verify_escape(DirectWitness(u, True), system):
                return OracleReport(u, tested)
    return OracleReport(None, tested)


def cross_check(family, verdict: PinningVerdict, budget: Optional[SampleBudget] = None) -> OracleReport:
    """Oracle report with agreement against an exact verdict."""
    system = _system(family)
    rep = sample_escape(system, budget)
    if verdict.pinned:
        agree = rep.refuted is None
    else:
        agree = rep.refuted is not None or verify_escape(verdict.certificate, system)
    return OracleReport(rep.refuted, rep.samples_tested, agree)


# ---------------------------------------------------------------- transversals

@dataclass(frozen=True)
class Finite:
    count: int


@dataclass(frozen=True)
class Infinite:
    pass


def _plucker_of(g: Constraint):
    p = (Fraction(0), Fraction(0), g.lam)
    d = tuple(Fraction(x) for x in g.dir)
    m = (p[1] * d[2] - p[2] * d[1], p[2] * d[0] - p[0] * d[2], p[0] * d[1] - p[1] * d[0])
    return d + m


def _reciprocal(a, b):
    return a[0] * b[3] + a[1] * b[4] + a[2] * b[5] + a[3] * b[0] + a[4] * b[1] + a[5] * b[2]


def common_transversals(lines: Sequence[Constraint]):
    """Number of common transversals of four lines meeting the axis perpendicularly.

    Counted projectively: the axis itself and the horizontal line at infinity
    are always among them.
    """
    ls = list(lines)
    if len(ls) != 4:
        raise ValueError("exactly four lines are required")
    if any(g.dz != 0 for g in ls):
        raise ValueError("lines must be perpendicular to the axis")
    for a, b in combinations(ls, 2):
        if coplanar_with_l0(a, b) and concurrent_with_l0(a, b):
            raise ValueError("lines must be pairwise distinct")
    for a, b in combinations(ls[:3], 2):
        if coplanar_with_l0(a, b) or concurrent_with_l0(a, b):
            raise DegenerateTriple("two of the first three lines meet")
    rows = [_plucker_of(g) for g in ls]
    # x meets line L iff reciprocal(x, L) = 0; reciprocal(x, L) = L' . x with swapped halves
    eqs = [r[3:] + r[:3] for r in rows]
    pencil = nullspace(eqs, 6)
    if len(pencil) > 2:
        return Infinite()
    a, b = pencil
    qa, qab, qb = _reciprocal(a, a) / 2, _reciprocal(a, b) / 2, _reciprocal(b, b) / 2
    if qa == 0 and qab == 0 and qb == 0:
        return Infinite()
    disc = qab * qab - qa * qb
    if qa == 0 and qb == 0:
        return Finite(2)
    if disc > 0:
        return Finite(2)
    if disc == 0:
        return Finite(1)
    return Finite(0)
