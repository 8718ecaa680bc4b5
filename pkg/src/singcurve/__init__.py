"""Newton trees and invariants of plane curve singularities over F_{p^k} and Q."""

from .field import field_ctx
from .invariants import (INF, delta, intersect_param, intersect_tree, mu_bar,
                         parametrize_branch, semigroup_gaps,
                         zariski_sequence)
from .milnor import check_conjecture, local_intersection, milnor_number
from .poly import BiPoly, parse_poly, poly_str
from .tree import (build_tree, build_tree_multi, minimalize,
                   tree_multiplicity)

__version__ = "0.1.0"
