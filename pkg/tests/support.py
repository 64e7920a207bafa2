"""Seeded random families and independent reference computations for the tests."""

import random
from fractions import Fraction

import numpy as np
import sympy
from scipy.optimize import linprog

from linepin.linespace import make_constraint


# ---------------------------------------------------------------- random families

def random_family(rng: random.Random):
    """5 to 10 constraints; about 40% of lines also appear reversed (degenerate pairs)."""
    size = rng.randint(5, 10)
    fam = []
    while len(fam) < size:
        lam = Fraction(rng.randint(-6, 6), rng.choice([1, 2]))
        d = (rng.randint(-3, 3), rng.randint(-3, 3))
        if d == (0, 0):
            continue
        dz = Fraction(rng.choice([0, 0, 0, rng.randint(-2, 2)]), 4)
        fam.append(make_constraint(lam, (d[0], d[1], dz)))
        if len(fam) < size and rng.random() < 0.4:
            dz2 = rng.choice([-dz, Fraction(rng.randint(-2, 2), 4)])
            fam.append(make_constraint(lam, (-d[0], -d[1], dz2)))
    return fam


def random_families(count=500, seed=0):
    rng = random.Random(seed)
    return [random_family(rng) for _ in range(count)]


def _surrounds(points):
    # independent float check: origin strictly inside the hull (LP with margin)
    pts = np.array([[float(x) for x in p] for p in points])
    n, d = pts.shape
    # maximize t s.t. sum c_i p_i = 0, sum c_i = 1, c_i >= t
    c = np.zeros(n + 1)
    c[-1] = -1
    a_eq = np.zeros((d + 1, n + 1))
    a_eq[:d, :n] = pts.T
    a_eq[d, :n] = 1
    b_eq = np.zeros(d + 1)
    b_eq[d] = 1
    a_ub = np.hstack([-np.eye(n), np.ones((n, 1))])
    res = linprog(c, A_ub=a_ub, b_ub=np.zeros(n), A_eq=a_eq, b_eq=b_eq,
                  bounds=[(0, None)] * n + [(None, None)])
    return res.status == 0 and -res.fun > 1e-9 and np.linalg.matrix_rank(pts) == d


def random_surrounding(rng: random.Random, d: int):
    """Integer points whose hull has the origin in its interior."""
    while True:
        n = rng.randint(d + 1, 3 * d + 2)
        pts = [tuple(Fraction(rng.randint(-4, 4)) for _ in range(d)) for _ in range(n)]
        if any(all(x == 0 for x in p) for p in pts):
            continue
        if _surrounds(pts):
            return pts


def random_flat_halfspaces(rng: random.Random, d: int):
    """Halfspaces cutting out a j-flat: normals surround the origin inside its complement."""
    j = rng.randint(0, d - 1)
    basis = [tuple(Fraction(rng.randint(-2, 2)) for _ in range(d)) for _ in range(d)]
    if np.linalg.matrix_rank(np.array(basis, dtype=float)) < d:
        return random_flat_halfspaces(rng, d)
    comp = basis[: d - j]
    coords = random_surrounding(rng, d - j) if d - j > 1 else [(Fraction(1),), (Fraction(-rng.randint(1, 3)),)]
    hs = [tuple(sum(c[k] * comp[k][i] for k in range(d - j)) for i in range(d)) for c in coords]
    return hs, j


def random_positive_cone(rng: random.Random, d: int):
    """Halfspaces (p, -c) with p surrounding the origin in R^(d-1), plus extras."""
    if d == 2:
        base = [(Fraction(1),), (Fraction(-rng.randint(1, 3)),)]
    else:
        base = random_surrounding(rng, d - 1)
    hs = [tuple(p) + (Fraction(-rng.randint(0 if i else 1, 3)),) for i, p in enumerate(base)]
    for _ in range(rng.randint(0, 3)):
        hs.append(tuple(Fraction(rng.randint(-3, 3)) for _ in range(d - 1)) + (Fraction(-rng.randint(1, 4)),))
    hs = [h for h in hs if any(x != 0 for x in h[:-1])]
    return hs


# ---------------------------------------------------------------- reference computations

def sidedness_det(g, u):
    """The 4x4 sidedness determinant for a constraint and a chart line, via sympy."""
    dx, dy, dz = (sympy.Rational(x) for x in g.dir)
    lam = sympy.Rational(g.lam)
    u1, u2, u3, u4 = (sympy.Rational(x) for x in u)
    m = sympy.Matrix([[0, dx, u1, u3], [0, dy, u2, u4], [lam, lam + dz, 0, 1], [1, 1, 1, 1]])
    return m.det()


def line_hits_polytope(u, poly) -> bool:
    """Does the line through (u1,u2,0),(u3,u4,1) meet conv(vertices)?  Float LP (HiGHS);
    callers keep probes away from the tangency boundary."""
    verts = poly.vertices
    p = (u[0], u[1], 0)
    d = (u[2] - u[0], u[3] - u[1], 1)
    n = len(verts)
    a_eq = np.zeros((4, n + 1))
    for i, v in enumerate(verts):
        a_eq[:3, i] = [float(x) for x in v]
        a_eq[3, i] = 1
    a_eq[:3, n] = [-float(x) for x in d]
    b_eq = np.array([float(x) for x in p] + [1.0])
    res = linprog(np.zeros(n + 1), A_eq=a_eq, b_eq=b_eq, bounds=[(0, None)] * n + [(None, None)],
                  method="highs")
    return res.status == 0


def plucker_residual(x):
    return x[0] * x[3] + x[1] * x[4] + x[2] * x[5]
