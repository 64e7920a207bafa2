"""Exact decision procedures for pinning a line by lines and polytopes in R^3."""

from .linespace import (Constraint, OrientedLine, Sidedness, eval_zeta, halfspace_of,
                        make_constraint, orthogonalize, orthogonalize_family, passes_right,
                        satisfies, to_plucker)
from .pinning import (DirectWitness, LocalSystem, PinningVerdict, SegmentWitness, decide_pinning,
                      helly_flat_reduce, is_pinning, minimize_pinning, positive_cone_reduce,
                      steinitz_reduce, verify_escape)
from .classify import (OrthoPinningClass, block_classify, classify_ortho_pinning,
                       decompose_surrounding, detect_4pinning)
from .polytopes import (ConvexPolytope, constraints_of_polytope, decide_polytope_pinning,
                        minimize_polytope_pinning, reduce_polytopes)
from .oracle import SampleBudget, common_transversals, sample_escape

__version__ = "0.1.0"
