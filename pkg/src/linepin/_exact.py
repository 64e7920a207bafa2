"""Small exact linear-algebra kit over ``fractions.Fraction``."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

Vec = tuple


def as_rat(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" / decimal strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not accepted where exact values are required")
    return Fraction(x)


def vec(xs: Iterable) -> Vec:
    return tuple(as_rat(x) for x in xs)


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def add(a: Sequence, b: Sequence) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence, b: Sequence) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def scale(s, a: Sequence) -> Vec:
    return tuple(s * x for x in a)


def neg(a: Sequence) -> Vec:
    return tuple(-x for x in a)


def sign(x) -> int:
    return (x > 0) - (x < 0)


def is_zero(a: Sequence) -> bool:
    return all(x == 0 for x in a)


def primitive(a: Sequence) -> Vec:
    """Positive rescaling of a rational vector to coprime integers (as Fractions)."""
    fr = [as_rat(x) for x in a]
    if all(x == 0 for x in fr):
        return tuple(Fraction(0) for _ in fr)
    den = lcm(*(x.denominator for x in fr))
    ints = [int(x * den) for x in fr]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return tuple(Fraction(v // g) for v in ints)


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(map(as_rat, r)) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[0])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[Vec]:
    """Basis of {x : row . x = 0 for every row}."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    red, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, piv):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def solve(a: Sequence[Sequence], b: Sequence):
    """Unique solution of a square system, or None when singular."""
    n = len(a)
    m = [list(map(as_rat, row)) + [as_rat(bi)] for row, bi in zip(a, b)]
    for c in range(n):
        pr = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pr is None:
            return None
        m[c], m[pr] = m[pr], m[c]
        pv = m[c][c]
        m[c] = [x / pv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return tuple(m[i][n] for i in range(n))


def det(a: Sequence[Sequence]) -> Fraction:
    n = len(a)
    m = [list(map(as_rat, row)) for row in a]
    out = Fraction(1)
    for c in range(n):
        pr = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pr is None:
            return Fraction(0)
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            out = -out
        pv = m[c][c]
        out *= pv
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / pv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return out


def project_onto_complement(v: Sequence, basis: Sequence[Sequence]) -> Vec:
    """Orthogonal projection of v onto the orthogonal complement of span(basis)."""
    if not basis:
        return tuple(map(as_rat, v))
    k = len(basis)
    gram = [[dot(basis[i], basis[j]) for j in range(k)] for i in range(k)]
    rhs = [dot(basis[i], v) for i in range(k)]
    coef = solve(gram, rhs)
    out = list(map(as_rat, v))
    for c, b in zip(coef, basis):
        out = [x - c * y for x, y in zip(out, b)]
    return tuple(out)


def fmt(x: Fraction) -> str:
    x = as_rat(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
