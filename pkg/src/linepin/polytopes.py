"""Convex polytopes touching the reference line, reduced to line constraints.

The reference line is the z-axis.  A polytope touching it in the relative
interior of an edge contributes the supporting line of that edge; one
touching it in a vertex contributes the two silhouette edges there.  A
polytope whose vertical edge lies on the axis between horizontal caps
(a cropped wedge) is also handled: locally its transversals form a union
of four convex pieces in lifted coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from ._exact import dot, is_zero, rank, sub, vec
from .cone import cone_from_halfspaces, in_convex_hull, solve_lp
from .linespace import Constraint, eval_zeta, halfspace_of, make_constraint
from .pinning import (BoundViolation, LocalSystem, NotAPinning, PinningVerdict,
                      decide_system, minimize_indices)


class NotTangent(ValueError):
    pass


class CoplanarFacetExcluded(ValueError):
    pass


class DegeneratePolytope(ValueError):
    pass


@dataclass(frozen=True)
class ConvexPolytope:
    vertices: tuple

    def __init__(self, vertices):
        pts = []
        for v in vertices:
            p = vec(v)
            if len(p) != 3:
                raise ValueError("vertices must have three coordinates")
            if p not in pts:
                pts.append(p)
        if not pts:
            raise ValueError("a polytope needs at least one vertex")
        object.__setattr__(self, "vertices", tuple(pts))

    def translated(self, shift) -> "ConvexPolytope":
        s = vec(shift)
        return ConvexPolytope([tuple(a + b for a, b in zip(v, s)) for v in self.vertices])


@dataclass(frozen=True)
class TangencyKind:
    kind: str                  # interior | edge | vertex | coplanar_facet | miss
    vertex: Optional[tuple] = None
    edges: tuple = ()          # pairs of endpoints
    facet: Optional[tuple] = None
    z_range: Optional[tuple] = None

    def __str__(self):
        return self.kind


MISS = TangencyKind("miss")


@dataclass(frozen=True)
class Hull:
    vertices: tuple            # extreme points
    facets: tuple              # (a1, a2, a3, b): a . x + b <= 0


def hull(poly: ConvexPolytope) -> Hull:
    pts = list(poly.vertices)
    if len(pts) < 4 or rank([sub(p, pts[0]) for p in pts[1:]]) < 3:
        raise DegeneratePolytope("polytopes must be full-dimensional")
    extreme = [p for i, p in enumerate(pts)
               if not in_convex_hull(p, pts[:i] + pts[i + 1:])]
    polar = cone_from_halfspaces([p + (Fraction(1),) for p in extreme], 4)
    facets = tuple(sorted(polar.rays))
    return Hull(tuple(extreme), facets)


def _value(facet, x):
    return facet[0] * x[0] + facet[1] * x[1] + facet[2] * x[2] + facet[3]


def _axis_interval(h: Hull):
    lo, hi = None, None
    for a in h.facets:
        if a[2] == 0:
            if a[3] > 0:
                return None
            continue
        bound = -a[3] / a[2]
        if a[2] > 0:
            hi = bound if hi is None else min(hi, bound)
        else:
            lo = bound if lo is None else max(lo, bound)
    if lo is None or hi is None or lo > hi:
        return None
    return lo, hi


def tangency(poly: ConvexPolytope) -> TangencyKind:
    h = hull(poly)
    span = _axis_interval(h)
    if span is None:
        return MISS
    for a in h.facets:
        if a[2] == 0 and a[3] == 0:
            return TangencyKind("coplanar_facet", facet=a, z_range=span)
    lo, hi = span
    if lo < hi:
        return TangencyKind("interior", z_range=span)
    point = (Fraction(0), Fraction(0), lo)
    active = [a for a in h.facets if _value(a, point) == 0]
    r = rank([a[:3] for a in active])
    on_face = [v for v in h.vertices if all(_value(a, v) == 0 for a in active)]
    if r == 3:
        return TangencyKind("vertex", vertex=point, edges=tuple(_silhouette(h, point)), z_range=span)
    if r == 2:
        return TangencyKind("edge", edges=(tuple(sorted(on_face)),), z_range=span)
    raise DegeneratePolytope("unexpected contact face")


def _cross2(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _silhouette(h: Hull, apex) -> list:
    # neighbours of the apex in the projected hull, then the edges lying over them
    others = [v for v in h.vertices if v != apex and (v[0], v[1]) != (0, 0)]
    dirs = [(v[0], v[1]) for v in others]
    rims = []
    for d in dirs:
        # a rim direction has every projected vertex weakly on one side
        side = [_cross2(d, e) for e in dirs]
        if all(s >= 0 for s in side) or all(s <= 0 for s in side):
            if not any(_cross2(d, r) == 0 and dot(d, r) > 0 for r in rims):
                rims.append(d)
    if len(rims) != 2:
        raise DegeneratePolytope("could not find two silhouette edges")
    edges = []
    for r in rims:
        over = [v for v in others if _cross2(r, (v[0], v[1])) == 0 and dot(r, (v[0], v[1])) > 0]
        ends = [v for v in over if _is_edge(h, apex, v)]
        if len(ends) != 1:
            raise DegeneratePolytope("ambiguous silhouette edge")
        edges.append((apex, ends[0]))
    return edges


def _is_edge(h: Hull, p, q) -> bool:
    tight = [a for a in h.facets if _value(a, p) == 0 and _value(a, q) == 0]
    return rank([a[:3] for a in tight]) == 2


def _oriented(lam, d, inward) -> Constraint:
    g = make_constraint(lam, d)
    probe = (inward[0], inward[1], inward[0], inward[1])
    val = eval_zeta(g, probe)
    if val == 0:
        raise DegeneratePolytope("probe direction parallel to the contact edge")
    if val > 0:
        g = make_constraint(lam, tuple(-x for x in d))
    back = (-inward[0], -inward[1], -inward[0], -inward[1])
    assert eval_zeta(g, probe) < 0 < eval_zeta(g, back)
    return g


def constraints_of_polytope(poly: ConvexPolytope) -> list[Constraint]:
    t = tangency(poly)
    if t.kind == "coplanar_facet":
        raise CoplanarFacetExcluded("a facet plane contains the reference line")
    if t.kind not in ("edge", "vertex"):
        raise NotTangent(f"the reference line is not tangent ({t.kind})")
    h = hull(poly)
    if t.kind == "edge":
        p, q = t.edges[0]
        d = sub(q, p)
        lam = t.z_range[0]
        others = [v for v in h.vertices if v not in (p, q)]
        # inward horizontal normal of the projected edge line
        n = (-d[1], d[0])
        if all(_cross2((d[0], d[1]), (v[0], v[1])) <= 0 for v in others):
            n = (d[1], -d[0])
        return [_oriented(lam, d, n)]
    out = []
    apex = t.vertex
    rims = [(e[1][0], e[1][1]) for e in t.edges]
    for k, (a, b) in enumerate(t.edges):
        r = rims[k]
        other = rims[1 - k]
        n = (-r[1], r[0])
        if dot(n, other) < 0:
            n = (r[1], -r[0])
        out.append(_oriented(apex[2], sub(b, a), n))
    return out


# ---------------------------------------------------------------- cropped wedges

@dataclass(frozen=True)
class PrismContact:
    v: tuple
    w: tuple
    z0: Fraction
    z1: Fraction


def prism_contact(poly: ConvexPolytope) -> Optional[PrismContact]:
    """Vertical edge on the axis bounded by two vertical facets and horizontal caps."""
    t = tangency(poly)
    if t.kind != "coplanar_facet":
        return None
    h = hull(poly)
    z0, z1 = t.z_range
    if z0 == z1:
        return None
    sides = [a for a in h.facets if a[2] == 0 and a[3] == 0]
    if len(sides) != 2 or rank([a[:2] for a in sides]) != 2:
        return None
    for z, sgn in ((z0, -1), (z1, 1)):
        point = (Fraction(0), Fraction(0), z)
        active = [a for a in h.facets if _value(a, point) == 0 and a not in sides]
        if len(active) != 1 or active[0][0] != 0 or active[0][1] != 0 or active[0][2] * sgn <= 0:
            return None
    return PrismContact(sides[0][:2], sides[1][:2], z0, z1)


def prism_pieces(pc: PrismContact) -> list[list[tuple]]:
    v, w, z0, z1 = pc.v, pc.w, pc.z0, pc.z1

    def at(z, n):
        return ((1 - z) * n[0], (1 - z) * n[1], z * n[0], z * n[1], Fraction(0))

    a1, a2 = at(z0, v), at(z0, w)
    b1, b2 = at(z1, v), at(z1, w)
    orient = _cross2(v, w) * (z1 - z0)
    # det(a, b) = -(z1 - z0) * q, and q = x5 on the lifted quadric
    cross_pos = (Fraction(0),) * 4 + (orient,)      # Δ >= 0
    cross_neg = (Fraction(0),) * 4 + (-orient,)     # Δ <= 0
    return [[a1, a2], [b1, b2], [a1, b2, cross_pos], [a2, b1, cross_neg]]


# ---------------------------------------------------------------- families

def line_meets_polytope(u, poly: ConvexPolytope) -> bool:
    """Exact test whether the line of chart point u meets the polytope."""
    u = vec(u)
    h = hull(poly)
    lo, hi = None, None
    for a in h.facets:
        # point at height z: (u1 + z(u3-u1), u2 + z(u4-u2), z)
        c0 = a[0] * u[0] + a[1] * u[1] + a[3]
        c1 = a[0] * (u[2] - u[0]) + a[1] * (u[3] - u[1]) + a[2]
        if c1 == 0:
            if c0 > 0:
                return False
            continue
        bound = -c0 / c1
        if c1 > 0:
            hi = bound if hi is None else min(hi, bound)
        else:
            lo = bound if lo is None else max(lo, bound)
    return lo is None or hi is None or lo <= hi


@dataclass(frozen=True)
class PolytopeReport:
    system: LocalSystem
    members: tuple          # indices of polytopes contributing a group
    dropped: tuple          # indices of interior-intersecting polytopes
    kinds: tuple


def reduce_polytopes(family: Sequence[ConvexPolytope]) -> PolytopeReport:
    groups, members, dropped, kinds = [], [], [], []
    for i, poly in enumerate(family):
        t = tangency(poly)
        kinds.append(t.kind)
        if t.kind == "interior":
            dropped.append(i)
            continue
        if t.kind == "miss":
            raise NotTangent(f"the reference line misses polytope {i}")
        if t.kind == "coplanar_facet":
            pc = prism_contact(poly)
            if pc is None:
                raise CoplanarFacetExcluded(f"polytope {i} has a facet coplanar with the reference line")
            groups.append(tuple(tuple(piece) for piece in prism_pieces(pc)))
        else:
            piece = tuple(halfspace_of(g).a for g in constraints_of_polytope(poly))
            groups.append((piece,))
        members.append(i)
    return PolytopeReport(LocalSystem.from_groups(groups), tuple(members), tuple(dropped), tuple(kinds))


def decide_polytope_pinning(family: Sequence[ConvexPolytope], hints: Sequence = ()) -> PinningVerdict:
    report = reduce_polytopes(family)
    if not report.members:
        raise NotTangent("no polytope constrains lines near the reference line")
    return decide_system(report.system, hints)


def polytopes_disjoint(p: ConvexPolytope, q: ConvexPolytope) -> bool:
    rows, rhs = [], []
    for h in (hull(p), hull(q)):
        for a in h.facets:
            rows.append(a[:3])
            rhs.append(-a[3])
    status, _ = solve_lp([0, 0, 0], rows, rhs)
    return status != "optimal"


def minimize_polytope_indices(family: Sequence[ConvexPolytope]) -> list[int]:
    fam = list(family)
    report = reduce_polytopes(fam)
    if not report.members:
        raise NotAPinning("no polytope constrains lines near the reference line")
    local = minimize_indices(report.system)
    out = [report.members[j] for j in local]
    if all(report.kinds[i] in ("edge", "vertex") for i in out):
        if len(out) > 8:
            raise BoundViolation("minimal polytope pinning larger than eight")
        chosen = [fam[i] for i in out]
        if len(out) > 6 and all(polytopes_disjoint(a, b) for a, b in combinations(chosen, 2)):
            raise BoundViolation("minimal pinning by disjoint polytopes larger than six")
    return out


def minimize_polytope_pinning(family: Sequence[ConvexPolytope]) -> list[ConvexPolytope]:
    fam = list(family)
    return [fam[i] for i in minimize_polytope_indices(fam)]
