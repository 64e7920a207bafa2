"""Deciding whether a family of constraints pins the reference line.

The satisfying lines of a family, lifted to R^5, are C ∩ M where C is a
polyhedral cone and M the quadric x5 = x2*x3 - x1*x4.  The reference line
is pinned iff the origin is isolated in C ∩ M, which is decided from the
sign of x5 on C and the sign of the quadratic form q on C ∩ {x5 = 0}.

Polytope contacts may contribute a union of convex pieces instead of a
single cone; ``LocalSystem`` models that (groups of alternative pieces)
and the decision explores the piece selections with pruning.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

from ._exact import add, dot, is_zero, neg, primitive, rank, scale, sign, solve, vec
from .cone import (ConeRep, Subspace, basic_solution, cone_add_halfspaces, cone_from_halfspaces,
                   face_in_hyperplane, farkas_certificate, nullspace, positively_spans,
                   project_out)
from .linespace import Constraint, embed, halfspace_of, has_degenerate_pair, qform


class EmptyFamily(ValueError):
    pass


class NotAPinning(ValueError):
    pass


class NotSurrounding(ValueError):
    pass


class NotAFlat(ValueError):
    pass


class PreconditionViolated(ValueError):
    pass


class BoundViolation(AssertionError):
    pass


# ---------------------------------------------------------------- verdict types

@dataclass(frozen=True)
class IsolationCase:
    kind: str
    dim_e: Optional[int] = None

    def __str__(self):
        return self.kind if self.dim_e is None else f"{self.kind}({self.dim_e})"


TransversalLine = IsolationCase("transversal_line")


def PositiveSide(k: int) -> IsolationCase:
    return IsolationCase("positive_side", k)


def NegativeSide(k: int) -> IsolationCase:
    return IsolationCase("negative_side", k)


@dataclass(frozen=True)
class DirectWitness:
    u: tuple
    scalable: bool = True


@dataclass(frozen=True)
class SegmentWitness:
    p: tuple
    q: tuple


@dataclass(frozen=True)
class PinningVerdict:
    pinned: bool
    case: Optional[IsolationCase] = None
    e_basis: tuple = ()
    certificate: object = None

    @property
    def dim_e(self):
        return None if self.case is None else self.case.dim_e


def Pinned(case: IsolationCase, e_basis=()) -> PinningVerdict:
    return PinningVerdict(True, case, tuple(e_basis))


def NotPinned(cert) -> PinningVerdict:
    return PinningVerdict(False, certificate=cert)


class QSign(Enum):
    STRICTLY_POSITIVE = "strictly_positive"
    STRICTLY_NEGATIVE = "strictly_negative"
    ZERO_CONE = "zero_cone"
    INDEFINITE = "indefinite"


@dataclass(frozen=True)
class QSignReport:
    sign: QSign
    min_point: Optional[tuple] = None
    max_point: Optional[tuple] = None


# ---------------------------------------------------------------- local systems

@dataclass(frozen=True)
class LocalSystem:
    """groups -> alternative pieces -> R^5 halfspace normals.

    A lifted point is admissible when, for every group, it lies in at least
    one of the group's pieces.
    """

    groups: tuple

    @classmethod
    def from_constraints(cls, family: Iterable[Constraint]) -> "LocalSystem":
        return cls(tuple(((halfspace_of(g).a,),) for g in family))

    @classmethod
    def from_groups(cls, groups) -> "LocalSystem":
        return cls(tuple(tuple(tuple(vec(a) for a in piece) for piece in grp) for grp in groups))

    def __len__(self):
        return len(self.groups)

    def subsystem(self, keep: Sequence[int]) -> "LocalSystem":
        return LocalSystem(tuple(self.groups[i] for i in keep))


def _system(family) -> LocalSystem:
    if isinstance(family, LocalSystem):
        return family
    return LocalSystem.from_constraints(family)


# ---------------------------------------------------------------- quadratic form on cones

def _bilinear(x, y):
    return (x[1] * y[2] + x[2] * y[1] - x[0] * y[3] - x[3] * y[0]) / 2


def _simplex_extremes(rays):
    """(min, argmin, max, argmax) of q over the simplex spanned by rays."""
    k = len(rays)
    m = [[_bilinear(rays[i], rays[j]) for j in range(k)] for i in range(k)]
    best_lo = best_hi = None
    for size in range(1, k + 1):
        for sup in combinations(range(k), size):
            sys_ = [[m[i][j] for j in sup] + [Fraction(-1)] for i in sup]
            sys_.append([Fraction(1)] * size + [Fraction(0)])
            sol = solve(sys_, [Fraction(0)] * size + [Fraction(1)])
            if sol is None:
                continue
            coef, mu = sol[:size], sol[size]
            if any(c <= 0 for c in coef):
                continue
            point = [Fraction(0)] * 4
            for c, i in zip(coef, sup):
                point = [x + c * y for x, y in zip(point, rays[i])]
            point = tuple(point)
            if best_lo is None or mu < best_lo[0]:
                best_lo = (mu, point)
            if best_hi is None or mu > best_hi[0]:
                best_hi = (mu, point)
    return best_lo, best_hi


def q_sign_on_cone(cone: ConeRep) -> QSignReport:
    """Sign of q(u) = u2*u3 - u1*u4 on a cone in R^4 minus the origin."""
    if cone.dim != 4:
        raise ValueError("q_sign_on_cone expects a cone in R^4")
    gens = cone.generators()
    if not gens:
        return QSignReport(QSign.ZERO_CONE)
    vals = [qform(g) for g in gens]
    zero = next((g for g, v in zip(gens, vals) if v == 0), None)
    if zero is not None:
        return QSignReport(QSign.INDEFINITE, zero, zero)
    pos = next((g for g, v in zip(gens, vals) if v > 0), None)
    negp = next((g for g, v in zip(gens, vals) if v < 0), None)
    if pos is not None and negp is not None:
        return QSignReport(QSign.INDEFINITE, negp, pos)
    r = rank(gens)
    lo = hi = None
    for basis in combinations(gens, r):
        if rank(list(basis)) < r:
            continue
        blo, bhi = _simplex_extremes(list(basis))
        if blo is not None and (lo is None or blo[0] < lo[0]):
            lo = blo
        if bhi is not None and (hi is None or bhi[0] > hi[0]):
            hi = bhi
    if lo[0] > 0:
        return QSignReport(QSign.STRICTLY_POSITIVE, lo[1], hi[1])
    if hi[0] < 0:
        return QSignReport(QSign.STRICTLY_NEGATIVE, lo[1], hi[1])
    return QSignReport(QSign.INDEFINITE, lo[1], hi[1])


# ---------------------------------------------------------------- single-cone analysis

@dataclass
class _Analysis:
    pinned: bool
    case: Optional[IsolationCase] = None
    e_basis: tuple = ()
    trace: Optional[ConeRep] = None
    qsign: Optional[QSignReport] = None


def analyze_cone(cone: ConeRep) -> _Analysis:
    if cone.is_zero:
        return _Analysis(True, PositiveSide(0))
    if cone.is_line and cone.lineality[0][4] != 0:
        return _Analysis(True, TransversalLine)
    up = any(r[4] > 0 for r in cone.rays) or any(l[4] != 0 for l in cone.lineality)
    down = any(r[4] < 0 for r in cone.rays) or any(l[4] != 0 for l in cone.lineality)
    if up and down:
        return _Analysis(False)
    trace = face_in_hyperplane(cone, 4)
    qs = q_sign_on_cone(trace)
    e_basis = tuple(trace.lineality) + tuple(trace.rays)
    e_basis = Subspace.span(e_basis, 4).basis
    k = len(e_basis)
    if qs.sign is QSign.ZERO_CONE:
        return _Analysis(True, NegativeSide(0) if down else PositiveSide(0), e_basis, trace, qs)
    if qs.sign is QSign.STRICTLY_NEGATIVE and not down:
        return _Analysis(True, PositiveSide(k), e_basis, trace, qs)
    if qs.sign is QSign.STRICTLY_POSITIVE and not up:
        return _Analysis(True, NegativeSide(k), e_basis, trace, qs)
    return _Analysis(False, None, e_basis, trace, qs)


# ---------------------------------------------------------------- certificates

def _germ_sign(p) -> int:
    if p[4] != 0:
        return sign(p[4])
    return -sign(qform(p[:4]))


def _f(p):
    return p[4] - qform(p[:4])


def _ray_fits(u, normals) -> bool:
    # the whole lifted arc {lift(t u) : 0 < t <= 1} stays in the piece
    qu = qform(u)
    for a in normals:
        b = dot(a[:4], u)
        c = a[4] * qu
        if b > 0 or (b == 0 and c > 0) or b + c > 0:
            return False
    return True


def _ray_germ_fits(u, normals) -> bool:
    # the arc fits for all small t
    qu = qform(u)
    for a in normals:
        b = dot(a[:4], u)
        if b > 0 or (b == 0 and a[4] * qu > 0):
            return False
    return True


def _normalize_direct(u, normals):
    top = max(abs(x) for x in u)
    u = scale(Fraction(1, 8) / top, u)
    while not _ray_fits(u, normals):
        u = scale(Fraction(1, 2), u)
    return u


def _in_piece(p, normals) -> bool:
    return all(dot(a, p) <= 0 for a in normals)


def _build_certificate(cone: ConeRep, info: _Analysis, hints=()):
    normals = [a for a in cone.hrep if not is_zero(a)]
    gens = cone.generators()
    extra = []
    if info.trace is not None:
        extra += [embed(g) for g in info.trace.generators()]
        if info.qsign is not None:
            extra += [embed(x) for x in (info.qsign.min_point, info.qsign.max_point) if x is not None]
    points = gens + extra
    candidates = [vec(h) for h in hints]
    candidates += [p[:4] for p in points]
    if cone.rays:
        total = cone.rays[0]
        for r in cone.rays[1:]:
            total = add(total, r)
        candidates.append(total[:4])
    for u in candidates:
        if is_zero(u):
            continue
        if _ray_germ_fits(u, normals):
            return DirectWitness(_normalize_direct(u, normals), True)
    ups = [p for p in points if _germ_sign(p) > 0]
    downs = [p for p in points if _germ_sign(p) < 0]
    pair = None
    for p in ups:
        for q in downs:
            if not _antiparallel(p, q):
                pair = (p, q)
                break
        if pair:
            break
    if pair is None and ups and downs:
        p, q = ups[0], downs[0]
        for g in points:
            if rank([p, g]) == 2:
                eps = Fraction(1)
                while True:
                    q2 = add(q, scale(eps, g))
                    if _germ_sign(q2) < 0 and _in_piece(q2, normals):
                        break
                    eps /= 2
                pair = (p, q2)
                break
    if pair is None:
        raise RuntimeError("no escape certificate found for a non-pinned cone")
    p, q = pair
    return SegmentWitness(_settle(p), _settle(q))


def _antiparallel(p, q) -> bool:
    return rank([p, q]) < 2 and dot(p, q) < 0


def _settle(p):
    s = _germ_sign(p)
    while sign(_f(p)) != s:
        p = scale(Fraction(1, 2), p)
    return p


def verify_escape(cert, family) -> bool:
    system = _system(family)
    if isinstance(cert, DirectWitness):
        u = vec(cert.u)
        if len(u) != 4 or is_zero(u) or not cert.scalable:
            return False
        return all(any(_ray_fits(u, piece) for piece in grp) for grp in system.groups)
    if isinstance(cert, SegmentWitness):
        p, q = vec(cert.p), vec(cert.q)
        if len(p) != 5 or len(q) != 5 or is_zero(p) or is_zero(q) or _antiparallel(p, q):
            return False
        if _f(p) * _f(q) >= 0 or _germ_sign(p) * _germ_sign(q) >= 0:
            return False
        return all(any(_in_piece(p, piece) and _in_piece(q, piece) for piece in grp)
                   for grp in system.groups)
    return False


# ---------------------------------------------------------------- decision

def decide_system(system: LocalSystem, hints: Sequence = ()) -> PinningVerdict:
    if len(system) == 0:
        raise EmptyFamily("empty family")
    base = [a for grp in system.groups if len(grp) == 1 for a in grp[0]]
    multi = [grp for grp in system.groups if len(grp) > 1]
    multi.sort(key=len)
    root = cone_from_halfspaces(base, 5)
    memo: dict = {}

    def explore(cone: ConeRep, depth: int):
        key = (depth, cone.key())
        if key in memo:
            return memo[key]
        info = analyze_cone(cone)
        if info.pinned:
            out = Pinned(info.case, info.e_basis)
        elif depth == len(multi):
            out = NotPinned(_build_certificate(cone, info, hints))
        else:
            out = None
            for piece in multi[depth]:
                child = cone_add_halfspaces(cone, piece)
                res = explore(child, depth + 1)
                if not res.pinned:
                    out = res
                    break
                if out is None:
                    out = res
        memo[key] = out
        return out

    verdict = explore(root, 0)
    if not verdict.pinned:
        for h in hints:
            cert = _hint_witness(system, vec(h))
            if cert is not None:
                return NotPinned(cert)
    return verdict


def _hint_witness(system: LocalSystem, u) -> Optional[DirectWitness]:
    # a suggested direction wins over the search's own certificate when it escapes
    if len(u) != 4 or is_zero(u):
        return None
    normals = []
    for grp in system.groups:
        piece = next((p for p in grp if _ray_germ_fits(u, p)), None)
        if piece is None:
            return None
        normals += list(piece)
    return DirectWitness(_normalize_direct(u, normals), True)


def decide_pinning(family: Sequence[Constraint], hints: Sequence = ()) -> PinningVerdict:
    fam = list(family)
    if not fam:
        raise EmptyFamily("decide_pinning needs at least one constraint")
    return decide_system(LocalSystem.from_constraints(fam), hints)


def is_pinning(family) -> bool:
    system = _system(family)
    return len(system) > 0 and decide_system(system).pinned


def minimize_pinning(family: Sequence[Constraint]) -> list[Constraint]:
    fam = list(family)
    if not fam or not decide_pinning(fam).pinned:
        raise NotAPinning("the family does not pin the reference line")
    keep = list(range(len(fam)))
    for i in range(len(fam)):
        trial = [j for j in keep if j != i]
        if trial and decide_pinning([fam[j] for j in trial]).pinned:
            keep = trial
    out = [fam[j] for j in keep]
    if len(out) > 8:
        raise BoundViolation(f"minimal pinning of size {len(out)} exceeds eight")
    if len(out) > 6 and not has_degenerate_pair(out):
        raise BoundViolation(f"nondegenerate minimal pinning of size {len(out)} exceeds six")
    return out


def minimize_indices(family) -> list[int]:
    """Greedy leave-one-out over the groups of a system, in input order."""
    system = _system(family)
    if not is_pinning(system):
        raise NotAPinning("the family does not pin the reference line")
    keep = list(range(len(system)))
    for i in range(len(system)):
        trial = [j for j in keep if j != i]
        if trial and decide_system(system.subsystem(trial)).pinned:
            keep = trial
    return keep


# ---------------------------------------------------------------- reductions

def steinitz_reduce(points: Sequence[Sequence]) -> list[int]:
    """Indices of at most 2d points of X whose hull still has the origin inside.

    A critical simplex is peeled off, its span is factored out and the
    remaining points are reduced in the quotient; a final greedy pass drops
    anything redundant.
    """
    pts = [vec(p) for p in points]
    if not pts or not positively_spans(pts):
        raise NotSurrounding("the origin is not interior to the convex hull")
    d = len(pts[0])
    keep = sorted(_steinitz_cover({i: p for i, p in enumerate(pts)}))
    for i in list(keep):
        trial = [j for j in keep if j != i]
        if trial and positively_spans([pts[j] for j in trial]):
            keep = trial
    if len(keep) > 2 * d:
        raise BoundViolation("irreducible surrounding set larger than 2d")
    return keep


def _steinitz_cover(table: dict) -> list[int]:
    ids = list(table)
    if not ids:
        return []
    dim = len(table[ids[0]])
    rows = [[table[i][k] for i in ids] for k in range(dim)] + [[Fraction(1)] * len(ids)]
    lam = basic_solution(rows, [Fraction(0)] * dim + [Fraction(1)])
    if lam is None:
        raise NotSurrounding("the origin is not in the convex hull")
    simplex = [i for i, x in zip(ids, lam) if x != 0]
    frame = nullspace([table[i] for i in simplex], dim)
    if not frame:
        return simplex
    rest = {}
    for i in ids:
        if i not in simplex:
            y = tuple(dot(table[i], f) for f in frame)
            if not is_zero(y):
                rest[i] = y
    return simplex + _steinitz_cover(rest)


def helly_flat_reduce(halfspaces: Sequence) -> list[int]:
    """Indices of at most 2d - 2j halfspaces cutting out the same j-flat."""
    hs = [vec(getattr(h, "a", h)) for h in halfspaces]
    if not hs:
        raise NotAFlat("no halfspaces")
    d = len(hs[0])
    cone = cone_from_halfspaces(hs, d)
    if cone.rays:
        raise NotAFlat("the intersection is not a linear subspace")
    flat = Subspace(cone.lineality, d)
    j = flat.dim
    if j == d:
        return []
    proj = [h.a for h in project_out(hs, flat)]
    idx = [i for i, a in enumerate(proj) if not is_zero(a)]
    chosen = steinitz_reduce([proj[i] for i in idx])
    out = sorted(idx[i] for i in chosen)
    if len(out) > 2 * d - 2 * j:
        raise BoundViolation("flat reduction exceeded 2d - 2j")
    return out


def _top_positive(hs, d) -> bool:
    # cone inside {x_d > 0} ∪ {0}: nothing with x_d = -1, and only 0 with x_d = 0
    below = tuple(Fraction(int(i == d - 1)) for i in range(d))
    if farkas_certificate(hs, (below, -1)) is None:
        return False
    flat = [a[:-1] for a in hs if not is_zero(a[:-1])]
    return positively_spans(flat) if d > 1 else True


def positive_cone_reduce(halfspaces: Sequence, d: Optional[int] = None) -> list[int]:
    """Indices of at most 2d - 2 halfspaces keeping the cone in {x_d > 0} ∪ {0}."""
    hs = [vec(getattr(h, "a", h)) for h in halfspaces]
    if not hs:
        raise PreconditionViolated("no halfspaces")
    if d is None:
        d = len(hs[0])
    if d < 2 or any(len(a) != d for a in hs):
        raise PreconditionViolated("dimension must be at least two and consistent")
    for a in hs:
        if not is_zero(a) and all(x == 0 for x in a[:-1]):
            raise PreconditionViolated("a halfspace is bounded by the hyperplane x_d = 0")
    if not _top_positive(hs, d):
        raise PreconditionViolated("the cone is not inside {x_d > 0} ∪ {0}")
    out = sorted(_positive_cone(hs, list(range(len(hs))), d))
    if len(out) > 2 * d - 2:
        raise BoundViolation("positive-cone reduction exceeded 2d - 2")
    return out


def _positive_cone(hs, ids, d) -> list[int]:
    local = [hs[i] for i in ids]
    below = tuple(Fraction(int(i == d - 1)) for i in range(d))
    _, picked = farkas_certificate(local, (below, -1))
    chosen = [ids[i] for i in picked]
    cone_d = cone_from_halfspaces([hs[i] for i in chosen], d)
    trace = face_in_hyperplane(cone_d, d - 1)
    flat_gens = [g + (Fraction(0),) for g in trace.generators()]
    if not flat_gens:
        return chosen
    e_space = Subspace.span(flat_gens, d)
    k = e_space.dim
    inner = [i for i in chosen if all(dot(hs[i], e) == 0 for e in e_space.basis)]
    # frame of the complement: vectors orthogonal to E and to e_d, then e_d
    frame = nullspace(list(e_space.basis) + [below], d) + [below]
    projected = {i: tuple(dot(hs[i], w) for w in frame) for i in inner}
    sub_ids = [i for i in inner if not is_zero(projected[i])]
    sub = _positive_cone_mapped(projected, sub_ids, d - k)
    # inside E the halfspaces of the whole family meet only in the origin
    in_e = [(i, tuple(dot(hs[i], e) for e in e_space.basis)) for i in ids]
    in_e = [(i, a) for i, a in in_e if not is_zero(a)]
    picked_e = steinitz_reduce([a for _, a in in_e])
    return sorted(set(sub) | {in_e[j][0] for j in picked_e})


def _positive_cone_mapped(projected, ids, d) -> list[int]:
    order = list(ids)
    table = [projected[i] for i in order]
    local = _positive_cone(table, list(range(len(table))), d)
    return [order[j] for j in local]
