"""gainforge: exact balance testing for abelian gain graphs via the Binary
Cycle Test, with applications to reciprocal diagrams and lifting spaces of
PL-realized cell complexes."""

from .abelian import (GroupElement, GroupSpec, add, element, element_order, format_spec,
                      has_nontrivial_inf_2_divisible, has_odd_torsion, is_identity,
                      negate, parse_spec, scale, zero)
from .bct import (BctOutcome, BctVerdict, binary_cycle_test, gate_report,
                  lemma_free_abelian_oracle, wheel_counterexample)
from .gain import (BalanceReport, GainGraph, essential_gain_group, is_balanced, switch,
                   walk_gain)
from .graph import (BinaryVector, CycleBasisCandidate, Multigraph, Walk, binary_image,
                    cycle_rank, fundamental_circles, is_binary_cycle_basis, spanning_tree)
from .lattice import (IntMatrix, hermite_normal_form, membership, mod2_rank,
                      quotient_structure, smith_normal_form)
from .plgeom import (CellComplexRealization, Lifting, Reciprocal, dual_graph,
                     facet_gain_graph, generation_gate, hex_patch, is_locally_convex,
                     lifting_from_reciprocal, lifting_space, rec_dimension, reciprocal,
                     ridge_star_3d, sharp_lifting, two_cell_patch)
from .states import (ActionKind, ActionSpec, is_satisfied, propagate_state, right_regular,
                     sat_dimension, scalar_on_line, translation)

__version__ = "0.1.0"
