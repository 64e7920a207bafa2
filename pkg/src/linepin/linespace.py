"""Oriented lines near the reference line (the z-axis) and the constraints they must satisfy.

A line of the chart is given by ``u = (u1, u2, u3, u4)``: it passes through
``(u1, u2, 0)`` and ``(u3, u4, 1)``.  ``u = 0`` is the reference line.
A constraint is an oriented line meeting the reference line at height
``lam`` with direction ``dir``.  All arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from ._exact import as_rat, det, primitive, vec


class DegenerateDirection(ValueError):
    """Direction parallel to the reference line (or zero)."""


class Sidedness(Enum):
    RIGHT = "right"
    LEFT = "left"
    MEETS_OR_PARALLEL = "meets_or_parallel"


@dataclass(frozen=True)
class OrientedLine:
    point: tuple
    dir: tuple

    def __post_init__(self):
        object.__setattr__(self, "point", vec(self.point))
        object.__setattr__(self, "dir", vec(self.dir))
        if all(d == 0 for d in self.dir):
            raise DegenerateDirection("zero direction")


@dataclass(frozen=True, order=True)
class Constraint:
    lam: Fraction
    dir: tuple

    def as_line(self) -> OrientedLine:
        return OrientedLine((0, 0, self.lam), self.dir)

    @property
    def dx(self):
        return self.dir[0]

    @property
    def dy(self):
        return self.dir[1]

    @property
    def dz(self):
        return self.dir[2]

    def __repr__(self):
        d = ",".join(str(x) for x in self.dir)
        return f"g({self.lam}, ({d}))"


@dataclass(frozen=True)
class Halfspace5:
    """The set {x in R^5 : a . x <= 0}."""

    a: tuple

    def canonical(self) -> tuple:
        return primitive(self.a)

    def same_as(self, other: "Halfspace5") -> bool:
        return self.canonical() == other.canonical()


def make_constraint(lam, direction: Sequence) -> Constraint:
    d = vec(direction)
    if len(d) != 3:
        raise ValueError("direction must have three coordinates")
    if d[0] == 0 and d[1] == 0:
        raise DegenerateDirection("constraint must not be parallel to the reference line")
    return Constraint(as_rat(lam), primitive(d))


def passes_right(l1: OrientedLine, l2: OrientedLine) -> Sidedness:
    p1, p2 = l1.point, l2.point
    q1 = tuple(a + b for a, b in zip(p1, l1.dir))
    q2 = tuple(a + b for a, b in zip(p2, l2.dir))
    cols = [p1, q1, p2, q2]
    m = [[c[i] for c in cols] for i in range(3)] + [[1, 1, 1, 1]]
    s = det(m)
    if s < 0:
        return Sidedness.RIGHT
    if s > 0:
        return Sidedness.LEFT
    return Sidedness.MEETS_OR_PARALLEL


def qform(u: Sequence) -> Fraction:
    return u[1] * u[2] - u[0] * u[3]


def eval_zeta(g: Constraint, u: Sequence) -> Fraction:
    # sign-equivalent to the unit-direction value; scaled by |(dx, dy)|
    u = vec(u)
    dx, dy, dz = g.dir
    lam = g.lam
    return (dz * qform(u) + (1 - lam) * dy * u[0] - (1 - lam) * dx * u[1]
            + lam * dy * u[2] - lam * dx * u[3])


def satisfies(u: Sequence, g: Constraint) -> bool:
    return eval_zeta(g, u) <= 0


def halfspace_of(g: Constraint) -> Halfspace5:
    dx, dy, dz = g.dir
    lam = g.lam
    return Halfspace5(((1 - lam) * dy, -(1 - lam) * dx, lam * dy, -lam * dx, Fraction(dz)))


def eta(g: Constraint) -> tuple:
    return halfspace_of(g).a[:4]


def orthogonalize(g: Constraint) -> Constraint:
    return make_constraint(g.lam, (g.dir[0], g.dir[1], 0))


def orthogonalize_family(family: Iterable[Constraint]) -> list[Constraint]:
    out: list[Constraint] = []
    for g in family:
        h = orthogonalize(g)
        if h not in out:
            out.append(h)
    return out


def lift(u: Sequence) -> tuple:
    u = vec(u)
    return u + (qform(u),)


def embed(u: Sequence) -> tuple:
    return vec(u) + (Fraction(0),)


def meets_l0(u: Sequence) -> bool:
    return qform(vec(u)) == 0


def to_plucker(u: Sequence) -> tuple:
    u1, u2, u3, u4 = vec(u)
    return (u3 - u1, u4 - u2, Fraction(1), u2, -u1, u1 * u4 - u2 * u3)


def coplanar_with_l0(g1: Constraint, g2: Constraint) -> bool:
    return g1.dir[0] * g2.dir[1] - g1.dir[1] * g2.dir[0] == 0


def concurrent_with_l0(g1: Constraint, g2: Constraint) -> bool:
    return g1.lam == g2.lam


def degenerate_pair(g1: Constraint, g2: Constraint) -> bool:
    return coplanar_with_l0(g1, g2) and concurrent_with_l0(g1, g2)


def has_degenerate_pair(family: Sequence[Constraint]) -> bool:
    fam = list(family)
    return any(degenerate_pair(fam[i], fam[j])
               for i in range(len(fam)) for j in range(i + 1, len(fam)))


def line_of(u: Sequence) -> OrientedLine:
    """The oriented line of chart point u, directed upward."""
    u1, u2, u3, u4 = vec(u)
    return OrientedLine((u1, u2, 0), (u3 - u1, u4 - u2, 1))
