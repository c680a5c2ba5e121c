"""Block-structured translation of process trees into sound workflow nets.

Translation rules, applied recursively with a given source and sink place:

* leaf: one transition (silent for tau) from source to sink
* sequence: children chained through fresh intermediate places
* xor: all children share the source and the sink place
* parallel: silent split into one fresh place per child, silent join after
* loop(do, redo): silent enter into the do-part; the do-part ends in a
  decision place, from which a silent redo leads into the redo-part (whose
  end feeds back into the do-part via a silent transition) and a silent
  exit leads to the sink

Transition ids are derived from node ids (``t:n1.3``, ``tau:n1.2:split``) so a
subtree translates to nets whose leaf transitions keep the same ids.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

from .nets import AcceptingPetriNet, Multiset
from .tree import Operator, ProcessTree


@dataclass(frozen=True, eq=False)
class TreeNetBinding:
    tree: ProcessTree
    net: AcceptingPetriNet
    leaf_to_transition: Mapping
    transition_to_leaf: Mapping

    def __reduce__(self):
        return (TreeNetBinding, (self.tree, self.net, dict(self.leaf_to_transition),
                                 dict(self.transition_to_leaf)))

    def transition(self, leaf):
        return self.leaf_to_transition[leaf]


def leaf_transition_id(node) -> str:
    return f"t:{node}"


def to_wfnet(tree: ProcessTree, name: str = "") -> TreeNetBinding:
    places: set = set()
    labels: dict = {}
    arcs: set = set()
    leaf_map: dict = {}

    def place(pid):
        places.add(pid)
        return pid

    def transition(tid, label, pre, post):
        labels[tid] = label
        arcs.update((p, tid) for p in pre)
        arcs.update((tid, p) for p in post)

    def build(node, src, snk):
        label = tree.label(node)
        kids = tree.children(node)
        if not isinstance(label, Operator):
            tid = leaf_transition_id(node)
            transition(tid, label, [src], [snk])
            leaf_map[node] = tid
        elif label is Operator.SEQUENCE:
            bounds = [src] + [place(f"p:{node}:{i}") for i in range(1, len(kids))] + [snk]
            for i, kid in enumerate(kids):
                build(kid, bounds[i], bounds[i + 1])
        elif label is Operator.XOR:
            for kid in kids:
                build(kid, src, snk)
        elif label is Operator.PARALLEL:
            ins = [place(f"p:{kid}:in") for kid in kids]
            outs = [place(f"p:{kid}:out") for kid in kids]
            transition(f"tau:{node}:split", None, [src], ins)
            transition(f"tau:{node}:join", None, outs, [snk])
            for kid, p_in, p_out in zip(kids, ins, outs):
                build(kid, p_in, p_out)
        else:
            do, redo = kids
            body = place(f"p:{node}:do")
            decide = place(f"p:{node}:decide")
            redo_in = place(f"p:{node}:redo_in")
            redo_out = place(f"p:{node}:redo_out")
            transition(f"tau:{node}:enter", None, [src], [body])
            build(do, body, decide)
            transition(f"tau:{node}:redo", None, [decide], [redo_in])
            build(redo, redo_in, redo_out)
            transition(f"tau:{node}:back", None, [redo_out], [body])
            transition(f"tau:{node}:exit", None, [decide], [snk])

    source, sink = place("source"), place("sink")
    build(tree.root, source, sink)
    net = AcceptingPetriNet(
        places=places,
        transitions=set(labels),
        arcs=arcs,
        initial_marking=Multiset([source]),
        final_marking=Multiset([sink]),
        labels=labels,
        name=name or "tree",
    )
    return TreeNetBinding(
        tree=tree,
        net=net,
        leaf_to_transition=MappingProxyType(dict(leaf_map)),
        transition_to_leaf=MappingProxyType({t: n for n, t in leaf_map.items()}),
    )
