"""Synthesis and certification of weighted marked graph Petri nets from
words and labelled transition systems."""

from .acyclic import (
    AcyclicSolution,
    LatticePointSet,
    WmgRegion,
    check_lattice_convex,
    embed,
    find_separating_region,
    synthesize_acyclic,
)
from .binary import (
    BinaryCircuit,
    QuotientProfile,
    bezout_block,
    infinite_binary_candidate,
    predict_state_count,
    quotient_sequence,
    reversible_binary_lts,
    solve_binary_cyclic,
    synthesize_reversible_binary,
    verify_infinite_binary,
)
from .cyclic import (
    CyclicDecision,
    CyclicVerdict,
    PairProjection,
    brute_force_cyclic_oracle,
    contiguous_pairs,
    decide_cyclic,
    merge_circuits,
    project,
    ternary_decide,
    theorem5_check,
)
from .formats import emit_dot, emit_lts, emit_net, parse_lts, parse_net
from .lts import (
    Lts,
    ParikhVector,
    PropertyReport,
    check_basic_properties,
    circular_lts_from_word,
    lts_isomorphic,
    parikh_distances,
    small_cycle_parikh,
)
from .net import (
    PlaceDescriptor,
    System,
    WeightedNet,
    build_net,
    build_system,
    fire,
    is_wmg,
    minimal_t_semiflow,
    reachability_graph,
)
from .search import bounded_net_search

__version__ = "0.1.0"
