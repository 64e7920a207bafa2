import random
from fractions import Fraction

import pytest

from linepin._exact import rank
from linepin.generators import gen_infinite, infinite_escape_directions
from linepin.linespace import eval_zeta, lift, make_constraint, satisfies
from linepin.pinning import verify_escape
from linepin.polytopes import (ConvexPolytope, CoplanarFacetExcluded, NotTangent,
                               constraints_of_polytope, decide_polytope_pinning,
                               line_meets_polytope, minimize_polytope_indices, polytopes_disjoint,
                               prism_contact, prism_pieces, reduce_polytopes, tangency)

from support import line_hits_polytope

TETRA = ConvexPolytope([(0, -1, 1), (0, 1, 1), (1, 0, 0), (1, 0, 2)])
DIAMOND = ConvexPolytope([(0, 0, 0), (1, 1, 0), (1, -1, 0), (1, 0, 1), (1, 0, -1)])
CUBE = ConvexPolytope([(x, y, z) for x in (1, 2) for y in (1, 2) for z in (1, 2)])


def _rotate(poly, c, s):
    return ConvexPolytope([(c * x - s * y, s * x + c * y, z) for x, y, z in poly.vertices])


def _mirror_x(poly):
    return ConvexPolytope([(-x, y, z) for x, y, z in poly.vertices])


def _probes(rng, count, scale):
    for _ in range(count):
        yield tuple(Fraction(rng.randint(-1000, 1000), 1000) * scale for _ in range(4))


def _agrees_with_lp(poly, cons, seed):
    rng = random.Random(seed)
    checked = 0
    for u in _probes(rng, 300, Fraction(1, 50)):
        vals = [eval_zeta(g, u) for g in cons]
        if any(abs(v) < Fraction(1, 10 ** 4) for v in vals):
            continue          # too close to the tangency boundary for a float oracle
        checked += 1
        assert all(v <= 0 for v in vals) == line_hits_polytope(u, poly)
    return checked


def test_tangency_kinds():
    t = tangency(TETRA)
    assert t.kind == "edge" and set(t.edges[0]) == {(0, -1, 1), (0, 1, 1)}
    assert tangency(CUBE).kind == "miss"
    assert tangency(DIAMOND).kind == "vertex"
    slab = ConvexPolytope([(x, y, z) for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)])
    assert tangency(slab).kind == "interior"
    facet = ConvexPolytope([(0, -1, 0), (0, 1, 0), (0, -1, 1), (0, 1, 1), (1, 0, 0)])
    assert tangency(facet).kind == "coplanar_facet"


def test_tetrahedron_edge_constraint():
    assert constraints_of_polytope(TETRA) == [make_constraint(1, (0, -1, 0))]


def test_tetrahedron_constraint_matches_probe_lines():
    g = constraints_of_polytope(TETRA)[0]
    # a vertical line at x = e > 0 goes through the body, at x = -e it misses
    e = Fraction(1, 100)
    assert satisfies((e, 0, e, 0), g) and not satisfies((-e, 0, -e, 0), g)
    assert _agrees_with_lp(TETRA, [g], 1) > 100


def test_pyramid_vertex_constraints():
    cons = constraints_of_polytope(DIAMOND)
    assert sorted(cons, key=repr) == sorted([make_constraint(0, (-1, -1, 0)), make_constraint(0, (1, -1, 0))], key=repr)
    assert _agrees_with_lp(DIAMOND, cons, 2) > 100


def test_mirroring_reverses_orientation():
    g = constraints_of_polytope(TETRA)[0]
    h = constraints_of_polytope(_mirror_x(TETRA))[0]
    assert h.lam == g.lam and h.dir == tuple(-x for x in g.dir)


@pytest.mark.parametrize("c,s", [(Fraction(3, 5), Fraction(4, 5)), (Fraction(-5, 13), Fraction(12, 13)), (0, 1)])
def test_tangency_invariant_under_rotation(c, s):
    for poly in (TETRA, DIAMOND, CUBE):
        assert tangency(_rotate(poly, c, s)).kind == tangency(poly).kind


def test_coplanar_facet_rejected_for_constraints():
    facet = ConvexPolytope([(0, -1, 0), (0, 1, 0), (0, -1, 1), (0, 1, 1), (1, 0, 0)])
    with pytest.raises(CoplanarFacetExcluded):
        constraints_of_polytope(facet)
    with pytest.raises(NotTangent):
        constraints_of_polytope(CUBE)


def test_prism_contact_matches_line_intersection():
    wedge = gen_infinite(3)[-1]
    pc = prism_contact(wedge)
    assert pc is not None
    pieces = prism_pieces(pc)
    rng = random.Random(9)
    for u in _probes(rng, 400, Fraction(1, 20)):
        x = lift(u)
        inside = any(all(sum(a * b for a, b in zip(n, x)) <= 0 for n in piece) for piece in pieces)
        assert inside == line_meets_polytope(u, wedge)


def test_exact_line_intersection_agrees_with_lp():
    rng = random.Random(10)
    for poly in (TETRA, DIAMOND, CUBE):
        for u in _probes(rng, 60, Fraction(3)):
            assert line_meets_polytope(u, poly) == line_hits_polytope(u, poly)


def test_reduction_report():
    slab = ConvexPolytope([(x, y, z) for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)])
    rep = reduce_polytopes([TETRA, slab, DIAMOND])
    assert rep.members == (0, 2) and rep.dropped == (1,)
    assert rep.kinds == ("edge", "interior", "vertex")
    with pytest.raises(NotTangent):
        reduce_polytopes([TETRA, CUBE])


def test_single_tangent_polytope_does_not_pin():
    v = decide_polytope_pinning([TETRA])
    assert not v.pinned and verify_escape(v.certificate, reduce_polytopes([TETRA]).system)


def test_disjointness():
    assert polytopes_disjoint(TETRA, CUBE)
    assert not polytopes_disjoint(TETRA, DIAMOND)


def test_infinite_family_pins_and_needs_every_wedge():
    n = 3
    fam = gen_infinite(n)
    hints = infinite_escape_directions(n)
    assert len(fam) == 6 + n
    assert decide_polytope_pinning(fam, hints).pinned
    for i in range(n):
        rest = fam[:6 + i] + fam[6 + i + 1:]
        v = decide_polytope_pinning(rest, hints)
        assert not v.pinned
        assert rank([list(v.certificate.u), list(hints[i])]) == 1
        assert verify_escape(v.certificate, reduce_polytopes(rest).system)
    kept = minimize_polytope_indices(fam)
    assert all(6 + i in kept for i in range(n))
