"""Exact polyhedral cones in low dimension.

Cones are intersections of halfspaces ``{x : a.x <= 0}``.  The double
description method gives a lineality basis (reduced echelon form) and
extreme rays (primitive integer vectors, orthogonal to the lineality).
Linear programs are solved by a dense tableau simplex with Bland's rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from ._exact import (as_rat, dot, is_zero, neg, nullspace, primitive,
                     project_onto_complement, rank, rref, sign, vec)


class DimensionMismatch(ValueError):
    pass


class NotContaining(ValueError):
    pass


@dataclass(frozen=True)
class HalfspaceD:
    a: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", vec(self.a))


@dataclass(frozen=True)
class Subspace:
    basis: tuple
    ambient: int

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient: int) -> "Subspace":
        vs = [vec(v) for v in vectors if not is_zero(v)]
        red = rref(vs, ambient)[0] if vs else []
        return cls(tuple(red), ambient)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence) -> bool:
        return rank(list(self.basis) + [vec(v)]) == self.dim

    def complement(self) -> "Subspace":
        return Subspace.span(nullspace(list(self.basis), self.ambient), self.ambient)


@dataclass(frozen=True)
class ConeRep:
    dim: int
    hrep: tuple
    lineality: tuple
    rays: tuple

    @property
    def is_zero(self) -> bool:
        return not self.lineality and not self.rays

    @property
    def is_line(self) -> bool:
        return not self.rays and len(self.lineality) == 1

    def generators(self) -> list[tuple]:
        return list(self.rays) + list(self.lineality) + [neg(v) for v in self.lineality]

    def contains(self, x: Sequence) -> bool:
        return all(dot(a, x) <= 0 for a in self.hrep)

    def key(self) -> tuple:
        return (self.lineality, self.rays)


# ---------------------------------------------------------------- double description

def _tight(ray, processed) -> frozenset:
    return frozenset(i for i, a in enumerate(processed) if dot(a, ray) == 0)


def _dd_step(lin: list, rays: list, processed: list, a: tuple):
    vals = [dot(a, l) for l in lin]
    k = next((i for i, v in enumerate(vals) if v != 0), None)
    if k is not None:
        l0 = lin[k] if vals[k] < 0 else neg(lin[k])
        a0 = dot(a, l0)
        new_lin = []
        for i, l in enumerate(lin):
            if i == k:
                continue
            c = vals[i] / a0
            new_lin.append(tuple(x - c * y for x, y in zip(l, l0)))
        new_rays = []
        for r in rays:
            c = dot(a, r) / a0
            new_rays.append(tuple(x - c * y for x, y in zip(r, l0)))
        new_rays.append(l0)
        processed.append(a)
        return new_lin, [primitive(r) for r in new_rays]
    s = [dot(a, r) for r in rays]
    pos = [i for i, v in enumerate(s) if v > 0]
    processed.append(a)
    if not pos:
        return lin, rays
    neg_ = [i for i, v in enumerate(s) if v < 0]
    keep = [rays[i] for i, v in enumerate(s) if v <= 0]
    if neg_:
        prev = processed[:-1]
        tight = [_tight(r, prev) for r in rays]
        for i in pos:
            for j in neg_:
                common = tight[i] & tight[j]
                adjacent = True
                for m in range(len(rays)):
                    if m != i and m != j and common <= tight[m]:
                        adjacent = False
                        break
                if adjacent:
                    r = tuple(s[i] * y - s[j] * x for x, y in zip(rays[i], rays[j]))
                    keep.append(primitive(r))
    out = []
    seen = set()
    for r in keep:
        if r not in seen:
            seen.add(r)
            out.append(r)
    return lin, out


def _finish(dim: int, hrep: list, lin: list, rays: list) -> ConeRep:
    lin_basis = tuple(rref(lin, dim)[0]) if lin else ()
    proj = []
    seen = set()
    for r in rays:
        p = primitive(project_onto_complement(r, lin_basis)) if lin_basis else primitive(r)
        if is_zero(p) or p in seen:
            continue
        seen.add(p)
        proj.append(p)
    proj.sort()
    return ConeRep(dim, tuple(hrep), lin_basis, tuple(proj))


def cone_from_halfspaces(halfspaces: Iterable, dim: int | None = None) -> ConeRep:
    hs = [vec(h.a if hasattr(h, "a") else h) for h in halfspaces]
    if dim is None:
        if not hs:
            raise DimensionMismatch("dimension needed for an empty family")
        dim = len(hs[0])
    if any(len(a) != dim for a in hs):
        raise DimensionMismatch("halfspaces of mixed dimension")
    lin = [tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)]
    return _run(dim, lin, [], [], hs)


def cone_add_halfspaces(cone: ConeRep, halfspaces: Iterable) -> ConeRep:
    hs = [vec(h.a if hasattr(h, "a") else h) for h in halfspaces]
    if any(len(a) != cone.dim for a in hs):
        raise DimensionMismatch("halfspaces of mixed dimension")
    return _run(cone.dim, list(cone.lineality), list(cone.rays), list(cone.hrep), hs)


def _run(dim, lin, rays, processed, hs) -> ConeRep:
    lin = list(lin)
    rays = list(rays)
    processed = list(processed)
    for a in hs:
        if is_zero(a):
            processed.append(a)
            continue
        lin, rays = _dd_step(lin, rays, processed, a)
    return _finish(dim, processed, lin, rays)


def cone_from_generators(dim: int, rays: Iterable[Sequence], lineality: Iterable[Sequence] = ()) -> ConeRep:
    """V-representation to a ConeRep (facets computed through the polar cone)."""
    gens = [vec(r) for r in rays]
    lin = [vec(l) for l in lineality]
    polar_h = gens + lin + [neg(l) for l in lin]
    polar = cone_from_halfspaces(polar_h, dim) if polar_h else cone_from_halfspaces([], dim)
    facets = list(polar.rays) + list(polar.lineality) + [neg(v) for v in polar.lineality]
    return cone_add_halfspaces(cone_from_halfspaces([], dim), facets) if facets else \
        cone_from_halfspaces([], dim)


# ---------------------------------------------------------------- derived operations

def linear_hull(cone: ConeRep):
    gens = cone.generators()
    sub = Subspace.span(gens, cone.dim)
    active = [HalfspaceD(a) for a in cone.hrep
              if not is_zero(a) and all(dot(a, g) == 0 for g in gens)]
    return sub, active


def face_in_hyperplane(cone: ConeRep, k: int) -> ConeRep:
    """C intersected with {x_k = 0}, written in the remaining coordinates."""
    d = cone.dim
    e = tuple(Fraction(int(i == k)) for i in range(d))
    cut = cone_add_halfspaces(cone, [e, neg(e)])
    drop = lambda v: v[:k] + v[k + 1:]
    hrep = [drop(a) for a in cone.hrep if not is_zero(drop(a))]
    return _finish(d - 1, hrep, [drop(l) for l in cut.lineality], [drop(r) for r in cut.rays])


def project_out(halfspaces: Iterable, subspace: Subspace) -> list[HalfspaceD]:
    hs = [vec(h.a if hasattr(h, "a") else h) for h in halfspaces]
    for a in hs:
        if any(dot(a, e) != 0 for e in subspace.basis):
            raise NotContaining("halfspace does not contain the subspace")
    frame = complement_frame(subspace)
    return [HalfspaceD(tuple(dot(a, w) for w in frame)) for a in hs]


def complement_frame(subspace: Subspace) -> list[tuple]:
    return nullspace(list(subspace.basis), subspace.ambient)


# ---------------------------------------------------------------- exact simplex

def _simplex_min(a: list, b: list, c: list):
    """min c.x s.t. a x = b, x >= 0.  Returns ('optimal', x) / ('infeasible', None) / ('unbounded', None)."""
    m = len(a)
    n = len(c)
    rows = []
    for i in range(m):
        r = [as_rat(x) for x in a[i]]
        bi = as_rat(b[i])
        if bi < 0:
            r = [-x for x in r]
            bi = -bi
        rows.append(r + [Fraction(int(j == i)) for j in range(m)] + [bi])
    basis = [n + i for i in range(m)]
    width = n + m
    # phase one: minimise the artificial sum
    obj = [Fraction(0)] * n + [Fraction(1)] * m + [Fraction(0)]
    obj = _price(obj, rows, basis)
    status = _iterate(rows, basis, obj, width)
    if obj[-1] != 0:
        return "infeasible", None
    # drive artificials out of the basis
    keep_rows = []
    for i in range(m):
        if basis[i] >= n:
            j = next((j for j in range(n) if rows[i][j] != 0), None)
            if j is None:
                continue
            _pivot(rows, basis, None, i, j)
        keep_rows.append(i)
    rows = [rows[i][:n] + [rows[i][-1]] for i in keep_rows]
    basis = [basis[i] for i in keep_rows]
    cost = [as_rat(x) for x in c] + [Fraction(0)]
    cost = _price(cost, rows, basis)
    status = _iterate(rows, basis, cost, n)
    if status == "unbounded":
        return "unbounded", None
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        x[j] = rows[i][-1]
    return "optimal", x


def _price(obj, rows, basis):
    obj = list(obj)
    for i, j in enumerate(basis):
        if obj[j] != 0:
            f = obj[j]
            obj = [o - f * r for o, r in zip(obj, rows[i])]
    return obj


def _pivot(rows, basis, obj, i, j):
    pv = rows[i][j]
    rows[i] = [x / pv for x in rows[i]]
    for k in range(len(rows)):
        if k != i and rows[k][j] != 0:
            f = rows[k][j]
            rows[k] = [x - f * y for x, y in zip(rows[k], rows[i])]
    if obj is not None and obj[j] != 0:
        f = obj[j]
        obj[:] = [x - f * y for x, y in zip(obj, rows[i])]
    basis[i] = j


def _iterate(rows, basis, obj, width):
    while True:
        j = next((j for j in range(width) if obj[j] < 0), None)
        if j is None:
            return "optimal"
        best = None
        for i, r in enumerate(rows):
            if r[j] > 0:
                ratio = r[-1] / r[j]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        _pivot(rows, basis, obj, best[1], j)


def solve_lp(c, a_ub=(), b_ub=(), a_eq=(), b_eq=(), nonneg: Sequence[bool] | None = None):
    """min c.x subject to a_ub x <= b_ub, a_eq x = b_eq; variables free unless marked nonneg."""
    n = len(c)
    if nonneg is None:
        nonneg = [False] * n
    cols = []  # (variable index, sign)
    for i in range(n):
        cols.append((i, 1))
        if not nonneg[i]:
            cols.append((i, -1))
    nub = len(a_ub)
    rows, rhs = [], []
    for k, (row, bk) in enumerate(zip(a_ub, b_ub)):
        r = [as_rat(row[i]) * s for i, s in cols] + [Fraction(int(t == k)) for t in range(nub)]
        rows.append(r)
        rhs.append(as_rat(bk))
    for row, bk in zip(a_eq, b_eq):
        rows.append([as_rat(row[i]) * s for i, s in cols] + [Fraction(0)] * nub)
        rhs.append(as_rat(bk))
    cost = [as_rat(c[i]) * s for i, s in cols] + [Fraction(0)] * nub
    if not rows:
        if any(x != 0 for x in cost):
            return "unbounded", None
        return "optimal", [Fraction(0)] * n
    status, y = _simplex_min(rows, rhs, cost)
    if status != "optimal":
        return status, None
    x = [Fraction(0)] * n
    for k, (i, s) in enumerate(cols):
        x[i] += s * y[k]
    return "optimal", x


def basic_solution(a_eq, b_eq):
    """A basic feasible solution of a x = b, x >= 0 (support of independent columns), or None."""
    n = len(a_eq[0]) if a_eq else 0
    status, x = _simplex_min(a_eq, b_eq, [0] * n)
    return x if status == "optimal" else None


def lp_nonzero_point(halfspaces: Iterable, extra: tuple | None = None):
    """A point of the cone on the affine hyperplane extra = (c, b): c.x = b, or None."""
    hs = [vec(h.a if hasattr(h, "a") else h) for h in halfspaces]
    if extra is None:
        raise ValueError("an affine normalisation is required")
    cvec, b = vec(extra[0]), as_rat(extra[1])
    d = len(cvec)
    status, x = solve_lp([0] * d, hs, [0] * len(hs), [cvec], [b])
    if status != "optimal":
        return None
    return tuple(x)


def farkas_certificate(halfspaces: Iterable, extra: tuple):
    """Infeasible subfamily of size <= rank (None when the system is feasible).

    The cone {a.x <= 0} misses the hyperplane c.x = b exactly when some
    y >= 0 has y.A = c / b; a basic such y names the subfamily.
    """
    hs = [vec(h.a if hasattr(h, "a") else h) for h in halfspaces]
    cvec, b = vec(extra[0]), as_rat(extra[1])
    if b == 0:
        raise ValueError("the normalisation must be affine (b != 0)")
    d = len(cvec)
    if not hs:
        return None
    a_eq = [[hs[i][k] for i in range(len(hs))] for k in range(d)]
    y = basic_solution(a_eq, [x / b for x in cvec])
    if y is None:
        return None
    keep = [i for i, v in enumerate(y) if v != 0]
    return [HalfspaceD(hs[j]) for j in keep], keep


def positively_spans(points: Sequence[Sequence]) -> bool:
    """True iff the origin is interior to conv(points) in their ambient space."""
    pts = [vec(p) for p in points]
    if not pts:
        return False
    d = len(pts[0])
    if rank(pts) < d:
        return False
    return _strict_positive_dependency(pts)


def _strict_positive_dependency(pts) -> bool:
    # sum l_i p_i = 0 with all l_i >= 1
    d = len(pts[0])
    n = len(pts)
    a_eq = [[pts[i][k] for i in range(n)] for k in range(d)]
    b_eq = [-sum(pts[i][k] for i in range(n)) for k in range(d)]
    status, _ = solve_lp([0] * n, a_eq=a_eq, b_eq=b_eq, nonneg=[True] * n)
    return status == "optimal"


def surrounds_in_span(points: Sequence[Sequence]) -> bool:
    """Origin in the relative interior of conv(points) (inside their linear hull)."""
    pts = [vec(p) for p in points]
    if not pts:
        return False
    return _strict_positive_dependency(pts)


def in_convex_hull(x: Sequence, points: Sequence[Sequence]) -> bool:
    pts = [vec(p) for p in points]
    n = len(pts)
    d = len(pts[0])
    a_eq = [[pts[i][k] for i in range(n)] for k in range(d)] + [[1] * n]
    b_eq = list(vec(x)) + [1]
    status, _ = solve_lp([0] * n, a_eq=a_eq, b_eq=b_eq, nonneg=[True] * n)
    return status == "optimal"
