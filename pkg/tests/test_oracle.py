from fractions import Fraction
from itertools import product

import pytest

from linepin.classify import is_dependent
from linepin.generators import gen_ortho8, gen_quadric_4block, gen_six_k1, gen_six_k3
from linepin.linespace import make_constraint, satisfies
from linepin.oracle import (DegenerateTriple, Finite, Infinite, SampleBudget, common_transversals,
                            cross_check, sample_escape)
from linepin.pinning import decide_pinning

from support import random_families


def test_budget_defaults_and_validation():
    b = SampleBudget()
    assert b.radii == (1, Fraction(1, 4), Fraction(1, 16), Fraction(1, 64))
    assert b.grid == 9 and b.random == 10_000 and b.seed == 0
    with pytest.raises(ValueError):
        SampleBudget(radii=(1, 2))
    with pytest.raises(ValueError):
        SampleBudget(radii=())


def test_refutes_the_quadric_block_with_a_true_escape():
    fam = list(gen_quadric_4block().constraints)
    rep = sample_escape(fam)
    assert rep.refuted is not None
    u = rep.refuted
    for t in (1, Fraction(1, 3), Fraction(1, 1000)):
        assert all(satisfies(tuple(t * x for x in u), g) for g in fam)


def test_never_refutes_pinned_fixtures():
    for fam in (gen_ortho8(), gen_six_k1()):
        assert sample_escape(list(fam.constraints)).refuted is None


def test_finds_the_escape_of_the_third_six_family():
    assert sample_escape(list(gen_six_k3().constraints)).refuted is not None


def test_sampling_is_deterministic_per_seed():
    fam = list(gen_quadric_4block().constraints)
    a = sample_escape(fam, SampleBudget(seed=3))
    b = sample_escape(fam, SampleBudget(seed=3))
    assert a == b


def test_agreement_on_random_families():
    for fam in random_families(80, seed=12):
        v = decide_pinning(fam)
        assert cross_check(fam, v, SampleBudget(random=2000)).agreement


def test_generic_lines_have_two_transversals():
    lines = [gen_ortho8().constraints[i] for i in (0, 2, 4, 6)]
    assert common_transversals(lines) == Finite(2)


def test_rulings_of_one_quadric_have_infinitely_many():
    assert common_transversals(gen_quadric_4block().constraints) == Infinite()


def test_transversal_preconditions():
    a = make_constraint(0, (1, 0, 0))
    b = make_constraint(0, (0, 1, 0))
    c = make_constraint(1, (1, 1, 0))
    d = make_constraint(2, (1, -1, 0))
    with pytest.raises(DegenerateTriple):
        common_transversals([a, b, c, d])
    with pytest.raises(ValueError):
        common_transversals([a, c, d])
    with pytest.raises(ValueError):
        common_transversals([make_constraint(0, (1, 0, 1)), c, d, b])


def test_infinite_count_iff_dependent_for_some_orientation():
    heights = [0, 1, 2, 3]
    dirs = [(1, 0), (0, 1), (1, 1), (1, -2), (1, 2), (2, 1), (1, 3), (-1, 2)]
    for combo in product(dirs, repeat=4):
        if len(set(combo[:3])) < 3:
            continue
        lines = [make_constraint(h, (d[0], d[1], 0)) for h, d in zip(heights, combo)]
        try:
            count = common_transversals(lines)
        except (DegenerateTriple, ValueError):
            continue
        # dependence does not depend on orientation: flipping a line negates its normal
        assert isinstance(count, Infinite) == is_dependent(lines)
