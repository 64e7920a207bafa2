"""Deterministic fixture families: constraint families and polytope families."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Optional

from ._exact import rank
from .cone import positively_spans
from .linespace import Constraint, eta, make_constraint
from .polytopes import ConvexPolytope, constraints_of_polytope


class GenericityFailure(RuntimeError):
    pass


class UnsupportedLabel(ValueError):
    pass


@dataclass(frozen=True)
class NamedFamily:
    name: str
    constraints: tuple = ()
    polytopes: tuple = ()
    expected: str = ""              # "pinned" | "not_pinned"
    label: Optional[str] = None
    hints: tuple = ()


def _g(lam, dx, dy, dz=0) -> Constraint:
    return make_constraint(lam, (dx, dy, dz))


def _both(lam, dx, dy):
    return [_g(lam, dx, dy), _g(lam, -dx, -dy)]


# ---------------------------------------------------------------- line families

ORTHO8_LINES = ((0, (1, 0)), (1, (0, 1)), (2, (1, 1)), (3, (1, -2)))


def gen_ortho8() -> NamedFamily:
    from .oracle import Finite, common_transversals
    lines = [_g(lam, *d) for lam, d in ORTHO8_LINES]
    count = common_transversals(lines)
    if not isinstance(count, Finite) or count.count > 2:
        raise GenericityFailure("the four lines have too many common transversals")
    fam = [h for lam, d in ORTHO8_LINES for h in _both(lam, *d)]
    return NamedFamily("ortho8", tuple(fam), expected="pinned", label="(8)")


def _quadric_lines():
    return [_g(0, -1, 0), _g(1, 1, 1), _g(2, -1, -2), _g(3, 1, 3)]


def gen_quadric_4block() -> NamedFamily:
    return NamedFamily("quadric_4block", tuple(_quadric_lines()), expected="not_pinned")


def gen_tangent_4pinning() -> NamedFamily:
    fam = [make_constraint(0, (-1, 0, Fraction(-1, 100)))] + _quadric_lines()[1:]
    return NamedFamily("tangent_4pinning", tuple(fam), expected="pinned")


def _six_base():
    return [_g(0, 0, -1, -1), _g(0, 0, 1, -1), _g(1, 1, 0, 1), _g(1, -1, 0, 1)]


def gen_six_k1() -> NamedFamily:
    fam = _six_base() + [_g(2, -1, 1), _g(2, 1, -1)]
    return NamedFamily("six_k1", tuple(fam), expected="pinned")


def gen_six_k2() -> NamedFamily:
    fam = _six_base() + [_g(2, -1, -1), _g(3, 1, 1)]
    return NamedFamily("six_k2", tuple(fam), expected="pinned")


def gen_six_k3() -> NamedFamily:
    # directions at angles pi - atan 3, -atan 2, atan 2, pi + atan 3
    fam = _six_base()[:2] + [_g(-1, -1, 3), _g(Fraction(-1, 2), 1, -2),
                             _g(Fraction(1, 4), 1, 2), _g(Fraction(1, 3), -1, -3)]
    return NamedFamily("six_k3", tuple(fam), expected="pinned")


FIVE_BLOCK_LINES = ((0, (1, 0)), (1, (0, 1)), (2, (1, 1)), (3, (1, -2)), (4, (2, 1)))


def gen_five_block() -> NamedFamily:
    lines = [_g(lam, *d) for lam, d in FIVE_BLOCK_LINES]
    if any(rank([eta(g) for g in sub]) < 4 for sub in combinations(lines, 4)):
        raise GenericityFailure("four of the five lines are dependent")
    for signs in product((1, -1), repeat=5):
        fam = [_g(lam, s * d[0], s * d[1]) for (lam, d), s in zip(FIVE_BLOCK_LINES, signs)]
        if positively_spans([eta(g) for g in fam]):
            return NamedFamily("five_block", tuple(fam), expected="pinned", label="(1)")
    raise GenericityFailure("no orientation surrounds the origin")


# Candidate line layouts for the taxonomy.  Each entry: (lambda, (dx, dy), both)
# where ``both`` puts the two orientations in (a 2-block), otherwise the
# orientation is searched.
def _ruling(c, lam):
    # rulings of x (z + c1) = y (z + c2)-type paraboloids through the axis
    a, b, p, q = c
    return (lam, (a * lam + b, p * lam + q), False)


_Q1 = (0, 1, 1, 0)       # directions (1, lambda): the paraboloid y = x z
_Q2 = (1, 1, 2, 0)       # directions (lambda + 1, 2 lambda)

LAYOUTS = {
    "(1)": [(lam, d, False) for lam, d in FIVE_BLOCK_LINES],
    "(2a)": [(0, (1, 0), False), (1, (1, 0), False), (2, (1, 0), False),
             (3, (0, 1), False), (4, (0, 1), False), (5, (0, 1), False)],
    "(2b)": [(0, (1, 0), False), (0, (-1, 1), False), (0, (-1, -1), False),
             (1, (0, 1), False), (1, (1, -1), False), (1, (-1, -1), False)],
    "(3a)": [_ruling(_Q1, 0), _ruling(_Q1, 1), _ruling(_Q1, 2), _ruling(_Q1, 3),
             _ruling(_Q2, 4), _ruling(_Q2, 5)],
    "(3b)": [(0, (1, 0), False), (1, (1, 0), False), (2, (0, 1), False),
             (2, (1, 1), False), (3, (1, -1), False), (4, (1, -1), False)],
    "(3c)": [_ruling(_Q1, 0), _ruling(_Q1, 1), _ruling(_Q1, 2), _ruling(_Q1, 3),
             (4, (1, 0), False), (1, (0, 1), False)],
    "(4a)": [_ruling(_Q1, 0), _ruling(_Q1, 1), _ruling(_Q1, 2), _ruling(_Q1, 3),
             (4, (1, 0), False), (5, (1, 0), False)],
    "(4b)": [_ruling(_Q1, 0), _ruling(_Q1, 1), _ruling(_Q1, 2), _ruling(_Q1, 3),
             (0, (1, 1), False), (0, (1, -1), False)],
    "(4c)": [(0, (1, 0), False), (1, (1, 0), False), (2, (0, 1), False),
             (2, (1, 1), False), (3, (0, 1), False), (4, (0, 1), False)],
    "(4d)": [(0, (1, 0), False), (1, (1, 0), False), (2, (0, 1), False),
             (2, (1, 1), False), (0, (-1, 1), False), (0, (-1, -1), False)],
    "(5a)": [_ruling(_Q1, 0), _ruling(_Q1, 1), _ruling(_Q1, 2), _ruling(_Q1, 3),
             (4, (1, 0), True)],
    "(5b)": [(0, (1, 0), False), (1, (1, 0), False), (2, (0, 1), False),
             (2, (1, 1), False), (3, (1, -1), True)],
    "(6a)": [(0, (1, 0), False), (1, (1, 0), False), (2, (1, 0), False),
             (3, (0, 1), True), (4, (1, 1), True)],
    "(6b)": [(0, (1, 0), False), (0, (-1, 1), False), (0, (-1, -1), False),
             (1, (0, 1), True), (2, (1, 1), True)],
    "(7)": [(0, (1, 0), False), (1, (1, 0), False), (2, (1, 0), False),
            (0, (-1, 1), False), (0, (-1, -1), False), (3, (0, 1), True)],
}


def _layout_families(layout):
    free = [i for i, (_, _, both) in enumerate(layout) if not both]
    for signs in product((1, -1), repeat=len(free)):
        sign_of = dict(zip(free, signs))
        fam = []
        for i, (lam, d, both) in enumerate(layout):
            if both:
                fam += _both(lam, *d)
            else:
                s = sign_of[i]
                fam.append(_g(lam, s * d[0], s * d[1]))
        yield fam


def gen_char_ortho(label) -> NamedFamily:
    from .classify import (NotAMinimalOrthoPinning, OrthoPinningClass,
                           classify_ortho_pinning)
    target = OrthoPinningClass.parse(label)
    if target is OrthoPinningClass.C8:
        return gen_ortho8()
    if target is OrthoPinningClass.C1:
        fam = gen_five_block()
        return NamedFamily("char_ortho(1)", fam.constraints, expected="pinned", label="(1)")
    layout = LAYOUTS.get(target.value)
    if layout is None:
        raise UnsupportedLabel(f"no construction for {target.value}")
    for fam in _layout_families(layout):
        if not positively_spans([eta(g) for g in fam]):
            continue
        try:
            if classify_ortho_pinning(fam) is target:
                return NamedFamily(f"char_ortho{target.value}", tuple(fam),
                                   expected="pinned", label=target.value)
        except NotAMinimalOrthoPinning:
            continue
    raise UnsupportedLabel(f"no orientation of the candidate lines realizes {target.value}")


# ---------------------------------------------------------------- the unbounded construction

def _edge_box(p, d, side) -> ConvexPolytope:
    """Thin box touching the axis along the edge p - d .. p + d."""
    ez = (0, 0, 1)
    pts = []
    for s in (1, -1):
        base = tuple(pi + s * di for pi, di in zip(p, d))
        pts.append(base)
        for t in (1, -1):
            pts.append(tuple(b + c + t * e for b, c, e in zip(base, side, ez)))
        pts.append(tuple(b + 2 * c for b, c in zip(base, side)))
    return ConvexPolytope(pts)


def _box_with_constraint(p, d, sides, wanted: Constraint) -> ConvexPolytope:
    for side in sides:
        box = _edge_box(p, d, side)
        if constraints_of_polytope(box) == [wanted]:
            return box
    raise GenericityFailure("no side realizes the wanted constraint")


def _unit(m: Fraction):
    # rational point on the unit circle at angle 2 atan(m)
    den = 1 + m * m
    return ((1 - m * m) / den, 2 * m / den)


def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _in_cone(x, a, b) -> bool:
    # x in the closed cone spanned by a, b (a before b counterclockwise, acute)
    return _cross(a, x) >= 0 and _cross(x, b) >= 0


def infinite_angle_pairs(n: int):
    """Pairs (v, w) of rational unit vectors whose cones cover W with the middle-vector property."""
    if n < 1:
        raise ValueError("n must be positive")
    lo, hi = math.atan2(1, 2), math.atan2(2, 1)
    step = (hi - lo) / n
    pad = step / 4
    pairs = []
    for i in range(n):
        a = lo + i * step - pad
        b = lo + (i + 1) * step + pad
        ma = Fraction(math.tan(a / 2)).limit_denominator(1000)
        mb = Fraction(math.tan(b / 2)).limit_denominator(1000)
        pairs.append((_unit(ma), _unit(mb)))
    w_lo, w_hi = (2, 1), (1, 2)
    ok = _in_cone(w_lo, *pairs[0]) and _in_cone(w_hi, *pairs[-1])
    for (v1, w1), (v2, w2) in zip(pairs, pairs[1:]):
        ok = ok and _cross(v2, w1) > 0
    for i, (v, w) in enumerate(pairs):
        mid = (v[0] + w[0], v[1] + w[1])
        ok = ok and _in_cone(mid, w_lo, w_hi)
        ok = ok and not any(_in_cone(mid, *pairs[j]) for j in range(n) if j != i)
    if not ok:
        raise GenericityFailure("angle schedule violates the cover conditions")
    return pairs


def infinite_escape_directions(n: int):
    """Escape path directions, one per wedge: (0, vy + wy, vx + wx, 0)."""
    return [(Fraction(0), v[1] + w[1], v[0] + w[0], Fraction(0))
            for v, w in infinite_angle_pairs(n)]


def _clip(poly, normal):
    # keep the part of a convex polygon with normal . x <= 0
    out = []
    k = len(poly)
    for i in range(k):
        p, q = poly[i], poly[(i + 1) % k]
        fp = normal[0] * p[0] + normal[1] * p[1]
        fq = normal[0] * q[0] + normal[1] * q[1]
        if fp <= 0:
            out.append(p)
        if (fp < 0 < fq) or (fq < 0 < fp):
            t = fp / (fp - fq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


def _wedge(n1, n2, radius, height) -> ConvexPolytope:
    r = Fraction(radius)
    square = [(-r, -r), (r, -r), (r, r), (-r, r)]
    poly = _clip(_clip(square, n1), n2)
    return ConvexPolytope([(x, y, z) for x, y in poly for z in (-height, height)])


def _crossing_heights(u2, u3, normal):
    # height z where the line (z u3, (1 - z) u2, z) crosses normal . x = 0
    den = normal[0] * u3 - normal[1] * u2
    if den == 0:
        return []
    return [-normal[1] * u2 / den]


def gen_infinite(n: int) -> list[ConvexPolytope]:
    pairs = infinite_angle_pairs(n)
    boxes = [
        _box_with_constraint((0, 0, 0), (0, 1, 0), [(1, 0, 0), (-1, 0, 0)], _g(0, 0, 1)),
        _box_with_constraint((0, 0, 0), (0, 1, 0), [(1, 0, 0), (-1, 0, 0)], _g(0, 0, -1)),
        _box_with_constraint((0, 0, 1), (1, 0, 0), [(0, 1, 0), (0, -1, 0)], _g(1, 1, 0)),
        _box_with_constraint((0, 0, 1), (1, 0, 0), [(0, 1, 0), (0, -1, 0)], _g(1, -1, 0)),
        _box_with_constraint((0, 0, -1), (1, -1, 0), [(1, 1, 0), (-1, -1, 0)], _g(-1, 1, -1)),
        _box_with_constraint((0, 0, 2), (1, -1, 0), [(1, 1, 0), (-1, -1, 0)], _g(2, 1, -1)),
    ]
    # wedge normals are the swapped subdivision vectors, so that the escape
    # path (0, vy + wy, vx + wx, 0) misses its own wedge
    normals = [((v[1], v[0]), (w[1], w[0])) for v, w in pairs]
    paths = infinite_escape_directions(n)
    heights = [Fraction(1)]
    for i, path in enumerate(paths):
        for j, (n1, n2) in enumerate(normals):
            if i != j:
                for nv in (n1, n2):
                    heights += _crossing_heights(path[1], path[2], nv)
    height = max(abs(z) for z in heights) + 1
    reach = max(max(abs(height * p[2]), abs((1 + height) * p[1])) for p in paths) + 1
    radius = math.ceil(reach)
    wedges = [_wedge(n1, n2, radius, height) for n1, n2 in normals]
    return boxes + wedges


FIXTURES = {
    "ortho8": gen_ortho8,
    "quadric_4block": gen_quadric_4block,
    "tangent_4pinning": gen_tangent_4pinning,
    "six_k1": gen_six_k1,
    "six_k2": gen_six_k2,
    "six_k3": gen_six_k3,
    "five_block": gen_five_block,
}
