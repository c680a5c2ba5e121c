"""Relevant start markings for fragment alignments and the auxiliary net built from them.

Three strategies produce candidate start markings:

``baseline``
    every reachable marking;
``filtered``
    reachable markings that enable a transition whose label occurs in the
    fragment, plus the final marking;
``advanced``
    markings generated directly from the process tree by a bottom-up walk
    from each matching leaf (``bumg``) that asks sibling subtrees of parallel
    operators for their markings top-down (``tdmg``).

The auxiliary net adds a fresh start place and one silent "jump" transition
per relevant marking, so a single search over the synchronous product can
start the model part at any of them.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import UnsupportedMarking
from .nets import (
    DEFAULT_STATE_CAP,
    AcceptingPetriNet,
    Marking,
    Multiset,
    is_enabled,
    marking_set_product,
    reachable_markings,
)
from .pnml import to_dot
from .tree import Operator, ProcessTree, minimal_enclosing_subtree
from .tree_net import TreeNetBinding

JUMP_PREFIX = "jump::"


class Method(str, Enum):
    BASELINE = "baseline"
    FILTERED = "filtered"
    ADVANCED = "advanced"

    def __str__(self):
        return self.value


@dataclass(frozen=True, eq=False)
class RelevantMarkings:
    markings: frozenset
    method: Method
    source_net: AcceptingPetriNet

    def __len__(self):
        return len(self.markings)

    def __iter__(self):
        return iter(sorted(self.markings))

    def __contains__(self, marking):
        return marking in self.markings


@dataclass(frozen=True, eq=False)
class AuxiliaryNet:
    net: AcceptingPetriNet
    start_place: str
    jump_transitions: Mapping
    original_net: AcceptingPetriNet

    def is_jump(self, transition) -> bool:
        return transition in self.jump_transitions


def _labels(fragment) -> set:
    return set(fragment)


def baseline_markings(net: AcceptingPetriNet, cap: int = DEFAULT_STATE_CAP) -> RelevantMarkings:
    return RelevantMarkings(frozenset(reachable_markings(net, cap)), Method.BASELINE, net)


def filtered_markings(net: AcceptingPetriNet, fragment, cap: int = DEFAULT_STATE_CAP) -> RelevantMarkings:
    labels = _labels(fragment)
    relevant_transitions = [t for t in net.sorted_transitions() if net.label(t) in labels]
    kept = {m for m in reachable_markings(net, cap)
            if any(is_enabled(net, m, t) for t in relevant_transitions)}
    kept.add(net.final_marking)
    return RelevantMarkings(frozenset(kept), Method.FILTERED, net)


def _pre(binding: TreeNetBinding, leaf) -> Marking:
    return Multiset(binding.net.preset(binding.transition(leaf)))


def _post(binding: TreeNetBinding, leaf) -> Marking:
    return Multiset(binding.net.postset(binding.transition(leaf)))


def tdmg(subtree: ProcessTree, binding: TreeNetBinding, labels: set, add_final: bool) -> set:
    """Top-down marking generation for ``subtree`` (ids shared with ``binding.tree``).

    Returns markings that enable leaves labelled with ``labels`` and, if
    ``add_final``, the marking in which the subtree has completed.
    """
    return _tdmg(subtree, subtree.root, binding, labels, add_final)


def _tdmg(tree: ProcessTree, node, binding, labels, add_final) -> set:
    label = tree.label(node)
    if not isinstance(label, Operator):
        # silent leaves never match a fragment label but can still complete
        result = set()
        if label is not None and label in labels:
            result.add(_pre(binding, node))
        if add_final:
            result.add(_post(binding, node))
        return result
    kids = tree.children(node)
    if label is Operator.SEQUENCE:
        result = set()
        for kid in kids[:-1]:
            result |= _tdmg(tree, kid, binding, labels, False)
        return result | _tdmg(tree, kids[-1], binding, labels, add_final)
    if label is Operator.PARALLEL:
        result = _tdmg(tree, kids[0], binding, labels, True)
        for kid in kids[1:]:
            result = marking_set_product(result, _tdmg(tree, kid, binding, labels, True))
        return result
    # xor and loop: only the first child may carry the completion marking
    result = _tdmg(tree, kids[0], binding, labels, add_final)
    for kid in kids[1:]:
        result |= _tdmg(tree, kid, binding, labels, False)
    return result


def bumg(tree: ProcessTree, node, previous, binding: TreeNetBinding, markings: set, labels: set) -> set:
    """Bottom-up marking generation starting at leaf ``node`` (``previous`` is None).

    Walks to the root; at every parallel ancestor the markings collected so
    far are combined with the top-down markings of the other children.
    """
    while True:
        label = tree.label(node)
        if not isinstance(label, Operator):
            markings = {_pre(binding, node)}
        elif label is Operator.PARALLEL:
            assert previous is not None, "parallel node reached without a child"
            for sibling in tree.children(node):
                if sibling != previous:
                    markings = marking_set_product(
                        markings, tdmg(tree.subtree(sibling), binding, labels, True))
        if node == tree.root:
            return markings
        previous, node = node, tree.parent(node)


def advanced_markings(binding: TreeNetBinding, tree: ProcessTree | None, fragment) -> RelevantMarkings:
    tree = binding.tree if tree is None else tree
    labels = _labels(fragment)
    result: set = set()
    for leaf in tree.leaves():
        if tree.label(leaf) is not None and tree.label(leaf) in labels:
            result |= bumg(tree, leaf, None, binding, set(), labels)
    result.add(binding.net.final_marking)
    return RelevantMarkings(frozenset(result), Method.ADVANCED, binding.net)


def restrict_to_submodel(tree: ProcessTree, fragment) -> ProcessTree:
    """Smallest subtree (loop-lifted) containing every leaf whose label occurs
    in ``fragment``; the whole tree if no label occurs."""
    labels = _labels(fragment) & tree.activities()
    if not labels:
        return tree
    return tree.subtree(minimal_enclosing_subtree(tree, labels))


def jump_transition_id(marking: Marking) -> str:
    return JUMP_PREFIX + marking.encode()


def build_auxiliary_net(net: AcceptingPetriNet, relevant: RelevantMarkings | Iterable[Marking]) -> AuxiliaryNet:
    markings = sorted(relevant.markings if isinstance(relevant, RelevantMarkings) else set(relevant))
    if isinstance(relevant, RelevantMarkings) and relevant.source_net is not net:
        raise ValueError("relevant markings were computed for a different net")
    if not markings:
        raise ValueError("at least one relevant marking is required")
    start = "p0'"
    while start in net.places or start in net.transitions:
        start += "'"
    arcs = set(net.arcs)
    labels = dict(net.labels)
    jumps = {}
    for marking in markings:
        unknown = marking.support() - net.places
        if unknown:
            raise ValueError(f"marking {marking!r} references unknown places {sorted(unknown)}")
        if any(count > 1 for _, count in marking.items()):
            raise UnsupportedMarking(f"marking {marking!r} puts more than one token in a place")
        tid = jump_transition_id(marking)
        labels[tid] = None
        arcs.add((start, tid))
        arcs.update((tid, p) for p in marking)
        jumps[tid] = marking
    aux = AcceptingPetriNet(
        places=net.places | {start},
        transitions=net.transitions | set(jumps),
        arcs=arcs,
        initial_marking=Multiset([start]),
        final_marking=net.final_marking,
        labels=labels,
        name=f"{net.name or 'net'}-aux",
    )
    return AuxiliaryNet(aux, start, MappingProxyType(jumps), net)


def auxiliary_to_dot(aux: AuxiliaryNet, kept: Iterable[Marking] | None = None) -> str:
    """DOT source with jump transitions coloured blue (kept) or red (filtered out)."""
    kept = None if kept is None else set(kept)
    colors = {t: "blue" if kept is None or m in kept else "red" for t, m in aux.jump_transitions.items()}
    return to_dot(aux.net, transition_colors=colors)
