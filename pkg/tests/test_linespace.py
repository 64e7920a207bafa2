from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from linepin.linespace import (Constraint, DegenerateDirection, OrientedLine, Sidedness,
                               coplanar_with_l0, concurrent_with_l0, degenerate_pair, eta,
                               eval_zeta, halfspace_of, has_degenerate_pair, lift, line_of,
                               make_constraint, meets_l0, orthogonalize, orthogonalize_family,
                               passes_right, qform, satisfies, to_plucker)

from support import plucker_residual, sidedness_det

small = st.fractions(min_value=-5, max_value=5, max_denominator=6)
chart = st.tuples(small, small, small, small)


@st.composite
def constraints(draw):
    lam = draw(small)
    dx, dy = draw(st.integers(-4, 4)), draw(st.integers(-4, 4))
    if dx == 0 and dy == 0:
        dx = 1
    dz = draw(st.fractions(min_value=-2, max_value=2, max_denominator=4))
    return make_constraint(lam, (dx, dy, dz))


@settings(max_examples=300, deadline=None)
@given(constraints(), chart)
def test_eval_zeta_has_the_sign_of_the_sidedness_determinant(g, u):
    det = sidedness_det(g, u)
    val = eval_zeta(g, u)
    assert (val > 0) == (det > 0) and (val < 0) == (det < 0)


@settings(max_examples=300, deadline=None)
@given(constraints(), chart)
def test_satisfies_agrees_with_passes_right(g, u):
    side = passes_right(g.as_line(), line_of(u))
    assert satisfies(u, g) == (side is not Sidedness.LEFT)


@settings(max_examples=300, deadline=None)
@given(constraints(), chart)
def test_halfspace_is_linear_in_the_lift(g, u):
    a = halfspace_of(g).a
    x = lift(u)
    assert sum(p * q for p, q in zip(a, x)) == eval_zeta(g, u)


@settings(max_examples=200, deadline=None)
@given(chart)
def test_plucker_coordinates_lie_on_the_klein_quadric(u):
    assert plucker_residual(to_plucker(u)) == 0


def test_reference_line_is_on_every_constraint_boundary():
    g = make_constraint(Fraction(3, 2), (1, -2, 5))
    assert eval_zeta(g, (0, 0, 0, 0)) == 0
    assert satisfies((0, 0, 0, 0), g)


def test_orthogonal_constraint_is_a_halfspace_through_the_origin():
    g = make_constraint(2, (1, 1, 0))
    assert halfspace_of(g).a[4] == 0
    assert eta(g) == (-1, 1, 2, -2)


def test_make_constraint_rejects_vertical_directions():
    with pytest.raises(DegenerateDirection):
        make_constraint(0, (0, 0, 1))
    with pytest.raises(DegenerateDirection):
        OrientedLine((0, 0, 0), (0, 0, 0))


def test_make_constraint_scales_direction_to_primitive_integers():
    assert make_constraint(0, (Fraction(1, 2), 1, 0)).dir == (1, 2, 0)
    assert make_constraint(0, (2, 4, 0)) == make_constraint(0, (1, 2, 0))


def test_orthogonalize_keeps_height_and_horizontal_direction():
    g = make_constraint(Fraction(1, 3), (2, -1, 7))
    assert orthogonalize(g) == make_constraint(Fraction(1, 3), (2, -1, 0))
    # the orthogonalized family is a set: coinciding projections collapse
    assert orthogonalize_family([g, g]) == [orthogonalize(g)]


def test_degenerate_pairs():
    a = make_constraint(1, (1, 2, 0))
    b = make_constraint(1, (-1, -2, 3))
    c = make_constraint(2, (1, 2, 0))
    assert coplanar_with_l0(a, b) and concurrent_with_l0(a, b) and degenerate_pair(a, b)
    assert coplanar_with_l0(a, c) and not concurrent_with_l0(a, c)
    assert has_degenerate_pair([a, c, b]) and not has_degenerate_pair([a, c])


def test_lines_meeting_the_reference_line_are_on_the_tangent_cone():
    assert meets_l0((1, 2, 2, 4))      # through (1,2,0) and (2,4,1): meets the axis at z = -1
    assert not meets_l0((1, 0, 0, 1))
    assert qform((1, 2, 3, 4)) == 2 * 3 - 1 * 4
