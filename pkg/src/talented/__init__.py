"""
Exact computation with the graded ("talented") monoid of a finite directed
graph: normal forms, equality and order decisions, orbit analysis, the
lattice of order-ideals, structure reports and invariant fingerprints.
"""

from .analyzer import (
    ComparisonReport,
    Fingerprint,
    StructureReport,
    action_free,
    action_free_all_quotients,
    compare,
    exists_periodic_element,
    exists_properly_infinite_witness,
    fingerprint,
    structure_report,
)
from .graph import (
    Cycle,
    Edge,
    Graph,
    condition_K,
    condition_L,
    covering_window,
    cycle_has_exit,
    enumerate_hereditary_saturated,
    hereditary_saturated_closure,
    is_cofinal_wrt,
    is_downward_directed,
    line_points,
    parse_graph,
    quotient_graph,
    simple_cycles,
    sinks,
    tree,
)
from .ideals import (
    OrderIdeal,
    contains,
    ideal_generated_by,
    is_prime,
    is_simple,
    lattice,
    quotient_context,
    quotient_sim,
)
from .madvet import parse_puzzle, solve_madvet
from .monoid import (
    CanonicalForm,
    GradedElement,
    UngradedElement,
    add,
    canonical_form,
    compare_orbit,
    eq_graded,
    eq_ungraded,
    expand_step,
    forgetful,
    is_minimal_vertex,
    is_periodic,
    leq_graded,
    orbit_equivalent,
    parse_element,
    parse_ungraded,
    shift,
    transition_matrix,
)
from .oracle import run_oracle

__version__ = "0.1.0"
