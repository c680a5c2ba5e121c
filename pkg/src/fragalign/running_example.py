"""The running example: a hand-built sound WF-net over activities a..h and the
process tree describing the same behaviour.

The net is not produced by the tree translation; it has no silent split or
join transitions and is kept separate so golden tests can refer to places
``p1``..``p12`` and transitions ``t1``..``t10`` directly.
"""

from __future__ import annotations

from .nets import AcceptingPetriNet, Multiset
from .tree import ProcessTree, parse_tree_text

TREE_TEXT = "->(a, +(b, c), d, X(+(e, f), g), h)"

_LABELS = {
    "t1": "a", "t2": "b", "t3": "c", "t4": "d", "t5": None,
    "t6": "e", "t7": "f", "t8": "g", "t9": None, "t10": "h",
}

_ARCS = [
    ("p1", "t1"), ("t1", "p2"), ("t1", "p3"),
    ("p2", "t2"), ("t2", "p4"), ("p3", "t3"), ("t3", "p5"),
    ("p4", "t4"), ("p5", "t4"), ("t4", "p6"),
    ("p6", "t5"), ("t5", "p7"), ("t5", "p8"),
    ("p7", "t6"), ("t6", "p9"), ("p8", "t7"), ("t7", "p10"),
    ("p9", "t9"), ("p10", "t9"), ("t9", "p11"),
    ("p6", "t8"), ("t8", "p11"),
    ("p11", "t10"), ("t10", "p12"),
]


def running_example_net() -> AcceptingPetriNet:
    return AcceptingPetriNet(
        places={f"p{i}" for i in range(1, 13)},
        transitions=set(_LABELS),
        arcs=_ARCS,
        initial_marking=Multiset(["p1"]),
        final_marking=Multiset(["p12"]),
        labels=_LABELS,
        name="running-example",
    )


def running_example_tree() -> ProcessTree:
    return parse_tree_text(TREE_TEXT)
