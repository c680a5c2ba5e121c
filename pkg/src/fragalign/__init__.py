"""Optimal complete, infix and postfix alignments of trace fragments on Petri nets and process trees."""

from .alignment import (
    AlignConfig, Alignment, Move, MoveKind, SynchronousProductNet, align, build_spn,
    build_trace_net, move_cost, postprocess, search, validate_alignment,
)
from .auxiliary import (
    AuxiliaryNet, Method, RelevantMarkings, advanced_markings, baseline_markings, build_auxiliary_net,
    bumg, filtered_markings, restrict_to_submodel, tdmg,
)
from .errors import *  # noqa: F401,F403
from .nets import (
    SKIP, AcceptingPetriNet, Marking, Multiset, enabled_transitions, fire, marking_set_product,
    multiset_union, reachability_graph, reachable_markings, validate_workflow_net,
)
from .oracle import brute_force_cost, enumerate_model_fragments
from .pnml import read_pnml, to_dot, write_pnml
from .traces import (
    EventLog, Trace, TraceKind, load_csv, load_jsonl, load_log, load_xes, sample_infixes,
    sample_postfixes, simulate_log,
)
from .tree import (
    Operator, ProcessTree, children, format_tree, minimal_enclosing_subtree, parent, parse_tree_text,
    random_tree, read_ptml, read_tree_text, subtree,
)
from .tree_net import TreeNetBinding, to_wfnet

__version__ = "0.1.0"
