"""Critical simplices, surrounding sets and the orthogonal-pinning taxonomy."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Optional, Sequence

from ._exact import is_zero, nullspace, rank, vec
from .cone import in_convex_hull, positively_spans
from .linespace import (Constraint, coplanar_with_l0, concurrent_with_l0, eta,
                        has_degenerate_pair, orthogonalize_family)
from .pinning import decide_pinning, is_pinning


class WrongArity(ValueError):
    pass


class NotContainingOrigin(ValueError):
    pass


class NotMinimallySurrounding(ValueError):
    pass


class NotOrthogonal(ValueError):
    pass


class NotAMinimalOrthoPinning(ValueError):
    pass


class BlockType(Enum):
    B2 = "2"
    B3_PAR = "3par"
    B3_CROSS = "3cross"
    B4_PAR = "4par"
    B4_CROSS = "4cross"
    B5 = "5"


@dataclass(frozen=True)
class SurroundingCase:
    kind: str               # simplex4 | two_critical | three_critical | four_segments | star
    detail: tuple = ()

    def __str__(self):
        return self.kind if not self.detail else f"{self.kind}{self.detail}"


Simplex4 = SurroundingCase("simplex4")
FourSegments = SurroundingCase("four_segments")
Star = SurroundingCase("star")


def TwoCritical(*sizes) -> SurroundingCase:
    return SurroundingCase("two_critical", tuple(sorted(sizes, reverse=True)))


def ThreeCritical(k_triangles: int) -> SurroundingCase:
    return SurroundingCase("three_critical", (k_triangles,))


class OrthoPinningClass(Enum):
    C1 = "(1)"
    C2A = "(2a)"
    C2B = "(2b)"
    C3A = "(3a)"
    C3B = "(3b)"
    C3C = "(3c)"
    C4A = "(4a)"
    C4B = "(4b)"
    C4C = "(4c)"
    C4D = "(4d)"
    C5A = "(5a)"
    C5B = "(5b)"
    C6A = "(6a)"
    C6B = "(6b)"
    C7 = "(7)"
    C8 = "(8)"

    @classmethod
    def parse(cls, label) -> "OrthoPinningClass":
        if isinstance(label, cls):
            return label
        text = str(label).strip()
        if not text.startswith("("):
            text = f"({text})"
        for member in cls:
            if member.value == text:
                return member
        raise ValueError(f"unknown label {label!r}")


# ---------------------------------------------------------------- dependence

def is_dependent(family: Sequence[Constraint]) -> bool:
    fam = list(family)
    if len(fam) not in (2, 3, 4):
        raise WrongArity("dependence is defined for two to four constraints")
    return rank([eta(g) for g in fam]) < len(fam)


# ---------------------------------------------------------------- critical simplices

def is_critical_simplex(points: Sequence[Sequence]) -> bool:
    pts = [vec(p) for p in points]
    if not pts:
        return False
    if len(pts) == 1:
        return is_zero(pts[0])
    if rank(pts) != len(pts) - 1:
        return False
    d = len(pts[0])
    cols = [[pts[i][k] for i in range(len(pts))] for k in range(d)]
    null = nullspace(cols, len(pts))
    if len(null) != 1:
        return False
    c = null[0]
    return all(x > 0 for x in c) or all(x < 0 for x in c)


def find_critical_simplex(points: Sequence[Sequence]) -> list[int]:
    pts = [vec(p) for p in points]
    if not pts or not in_convex_hull([0] * len(pts[0]), pts):
        raise NotContainingOrigin("the origin is not in the convex hull")
    for size in range(1, len(pts) + 1):
        for sub in combinations(range(len(pts)), size):
            if is_critical_simplex([pts[i] for i in sub]):
                return list(sub)
    raise NotContainingOrigin("no critical simplex found")


def minimally_surrounds(points: Sequence[Sequence]) -> bool:
    pts = [vec(p) for p in points]
    if not pts or not positively_spans(pts):
        return False
    return not any(positively_spans(pts[:i] + pts[i + 1:]) for i in range(len(pts)))


def decompose_surrounding(points: Sequence[Sequence]):
    """Case label and a minimum cover of X by critical simplices (index tuples)."""
    pts = [vec(p) for p in points]
    if not pts or len(pts[0]) != 4 or not minimally_surrounds(pts):
        raise NotMinimallySurrounding("the points do not minimally surround the origin in R^4")
    n = len(pts)
    critical = [sub for size in range(2, 6) for sub in combinations(range(n), size)
                if is_critical_simplex([pts[i] for i in sub])]
    everything = frozenset(range(n))
    cover = None
    for count in range(1, 5):
        found = []
        for combo in combinations(critical, count):
            if frozenset().union(*map(frozenset, combo)) == everything:
                found.append(tuple(sorted(combo, key=lambda s: (-len(s), s))))
        if found:
            found.sort(key=lambda c: (tuple(-len(s) for s in c), c))
            cover = found[0]
            break
    if cover is None:
        raise NotMinimallySurrounding("no cover by critical simplices")
    sizes = tuple(len(s) for s in cover)
    if n == 5:
        case = Simplex4
    elif n == 6:
        case = TwoCritical(*sizes)
    elif n == 7:
        k = sum(1 for s in sizes if s == 3)
        case = Star if k == 3 else ThreeCritical(k)
    else:
        case = FourSegments
    return case, [list(s) for s in cover]


# ---------------------------------------------------------------- blocks

def _check_orthogonal(family):
    if any(g.dz != 0 for g in family):
        raise NotOrthogonal("all constraints must be orthogonal to the reference line")


def block_classify(family: Sequence[Constraint]) -> Optional[BlockType]:
    fam = list(family)
    _check_orthogonal(fam)
    if len(fam) < 2 or not is_critical_simplex([eta(g) for g in fam]):
        return None
    pairs = list(combinations(fam, 2))
    if len(fam) == 2:
        return BlockType.B2
    if len(fam) == 3:
        if all(coplanar_with_l0(a, b) for a, b in pairs):
            return BlockType.B3_PAR
        return BlockType.B3_CROSS
    if len(fam) == 4:
        has_plane = any(coplanar_with_l0(a, b) for a, b in pairs)
        has_point = any(concurrent_with_l0(a, b) for a, b in pairs)
        return BlockType.B4_CROSS if has_plane and has_point else BlockType.B4_PAR
    return BlockType.B5


# ---------------------------------------------------------------- taxonomy

def _is_minimal_pinning(fam) -> bool:
    if not is_pinning(fam):
        return False
    return not any(is_pinning(fam[:i] + fam[i + 1:]) for i in range(len(fam)) if len(fam) > 1)


def classify_ortho_pinning(family: Sequence[Constraint]) -> OrthoPinningClass:
    fam = list(family)
    _check_orthogonal(fam)
    if not fam or not _is_minimal_pinning(fam):
        raise NotAMinimalOrthoPinning("the family is not a minimal pinning")
    try:
        case, cover = decompose_surrounding([eta(g) for g in fam])
    except NotMinimallySurrounding as exc:
        raise NotAMinimalOrthoPinning(str(exc)) from exc
    blocks = [block_classify([fam[i] for i in s]) for s in cover]
    C = OrthoPinningClass
    B = BlockType
    if case == Simplex4:
        return C.C1
    if case == FourSegments:
        return C.C8
    if case.kind == "two_critical":
        sizes = case.detail
        if sizes == (3, 3):
            if blocks[0] == blocks[1] == B.B3_PAR:
                return C.C2A
            if blocks[0] == blocks[1] == B.B3_CROSS:
                return C.C2B
        elif sizes == (4, 4):
            kinds = sorted(b.value for b in blocks)
            if kinds == ["4par", "4par"]:
                return C.C3A
            if kinds == ["4cross", "4cross"]:
                return C.C3B
            return C.C3C
        elif sizes == (4, 3):
            par4 = blocks[0] == B.B4_PAR
            par3 = blocks[1] == B.B3_PAR
            return {(True, True): C.C4A, (True, False): C.C4B,
                    (False, True): C.C4C, (False, False): C.C4D}[(par4, par3)]
        elif sizes == (4, 2):
            return C.C5A if blocks[0] == B.B4_PAR else C.C5B
    if case == ThreeCritical(1):
        tri = next(b for b, s in zip(blocks, cover) if len(s) == 3)
        return C.C6A if tri == B.B3_PAR else C.C6B
    if case == ThreeCritical(2):
        return C.C7
    raise NotAMinimalOrthoPinning(f"normals decompose as {case}, which no orthogonal pinning realizes")


def detect_4pinning(family: Sequence[Constraint]) -> bool:
    fam = list(family)
    if not fam or has_degenerate_pair(fam):
        return False
    if not _is_minimal_pinning(fam):
        return False
    flat = orthogonalize_family(fam)
    if decide_pinning(flat).pinned:
        return False
    if len(fam) != 4 or block_classify(flat) != BlockType.B4_PAR:
        raise AssertionError("a nondegenerate higher-order minimal pinning must be a 4-parallel block")
    return True
