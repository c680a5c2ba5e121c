"""Multisets, markings and accepting Petri nets with plain firing semantics.

Arcs are unweighted: a transition consumes one token from every place in its
preset and produces one token in every place of its postset.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

from .errors import InvalidNet, NotEnabled, StateSpaceCapExceeded

SKIP = ">>"
DEFAULT_STATE_CAP = 100_000


def state_cap_from_env(default: int = DEFAULT_STATE_CAP) -> int:
    value = os.environ.get("FRAGALIGN_STATE_CAP")
    if not value:
        return default
    cap = int(value)
    if cap <= 0:
        raise ValueError("FRAGALIGN_STATE_CAP must be a positive integer")
    return cap


class Multiset:
    """Immutable multiset with a canonical, hashable encoding.

    Accepts either a mapping ``element -> count`` or an iterable of elements
    (repetitions add up). Elements with count 0 are dropped.
    """

    __slots__ = ("_key", "_counts", "_hash")

    def __init__(self, items: Mapping | Iterable = ()):
        counts: dict = {}
        if isinstance(items, Multiset):
            counts = dict(items._counts)
        elif isinstance(items, Mapping):
            for element, count in items.items():
                if count < 0:
                    raise ValueError(f"negative count for {element!r}")
                if count:
                    counts[element] = count
        else:
            for element in items:
                counts[element] = counts.get(element, 0) + 1
        self._key = tuple(sorted(counts.items()))
        self._counts = dict(self._key)
        self._hash = hash(self._key)

    def count(self, element) -> int:
        return self._counts.get(element, 0)

    def total(self) -> int:
        return sum(self._counts.values())

    def items(self):
        return self._key

    def support(self) -> frozenset:
        return frozenset(self._counts)

    def encode(self) -> str:
        """Canonical text form, e.g. ``p2,p5`` or ``p3^2``."""
        return ",".join(str(e) if c == 1 else f"{e}^{c}" for e, c in self._key)

    def __iter__(self) -> Iterator:
        return iter(self._counts)

    def __contains__(self, element) -> bool:
        return element in self._counts

    def __len__(self) -> int:
        return len(self._counts)

    def __bool__(self) -> bool:
        return bool(self._counts)

    def __add__(self, other: Multiset) -> Multiset:
        counts = dict(self._counts)
        for element, count in other._counts.items():
            counts[element] = counts.get(element, 0) + count
        return Multiset(counts)

    def __sub__(self, other: Multiset) -> Multiset:
        counts = dict(self._counts)
        for element, count in other._counts.items():
            left = counts.get(element, 0) - count
            if left < 0:
                raise ValueError(f"cannot remove {element!r} {count} times")
            counts[element] = left
        return Multiset(counts)

    def __le__(self, other: Multiset) -> bool:
        return all(other.count(e) >= c for e, c in self._key)

    def __eq__(self, other) -> bool:
        return isinstance(other, Multiset) and self._key == other._key

    def __lt__(self, other: Multiset) -> bool:
        return self._key < other._key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(str(e) if c == 1 else f"{e}^{c}" for e, c in self._key)
        return f"[{inner}]"


Marking = Multiset


def multiset_union(a: Multiset, b: Multiset) -> Multiset:
    return a + b


def marking_set_product(left: Iterable[Multiset], right: Iterable[Multiset]) -> set[Multiset]:
    right = list(right)
    return {a + b for a in left for b in right}


@dataclass(frozen=True, eq=False)
class AcceptingPetriNet:
    """Petri net with designated initial and final markings.

    ``labels`` maps every transition to an activity label, or to ``None``
    for silent transitions.
    """

    places: frozenset
    transitions: frozenset
    arcs: frozenset
    initial_marking: Marking
    final_marking: Marking
    labels: Mapping
    name: str = ""
    _preset: Mapping = field(init=False, repr=False)
    _postset: Mapping = field(init=False, repr=False)
    _place_preset: Mapping = field(init=False, repr=False)
    _place_postset: Mapping = field(init=False, repr=False)

    def __post_init__(self):
        places = frozenset(self.places)
        transitions = frozenset(self.transitions)
        arcs = frozenset(tuple(a) for a in self.arcs)
        if places & transitions:
            raise InvalidNet(f"ids used for both places and transitions: {sorted(places & transitions)}")
        labels = dict(self.labels)
        missing = transitions - labels.keys()
        if missing:
            raise InvalidNet(f"transitions without label entry: {sorted(missing)}")
        extra = labels.keys() - transitions
        if extra:
            raise InvalidNet(f"labels for unknown transitions: {sorted(extra)}")
        for label in labels.values():
            if label is not None and (not label or label == SKIP):
                raise InvalidNet(f"invalid activity label {label!r}")
        pre = {t: set() for t in transitions}
        post = {t: set() for t in transitions}
        ppre = {p: set() for p in places}
        ppost = {p: set() for p in places}
        for src, dst in arcs:
            if src in places and dst in transitions:
                pre[dst].add(src)
                ppost[src].add(dst)
            elif src in transitions and dst in places:
                post[src].add(dst)
                ppre[dst].add(src)
            else:
                raise InvalidNet(f"arc ({src!r}, {dst!r}) does not connect a place and a transition")
        for marking_name in ("initial_marking", "final_marking"):
            marking = Multiset(getattr(self, marking_name))
            unknown = marking.support() - places
            if unknown:
                raise InvalidNet(f"{marking_name} references unknown places {sorted(unknown)}")
            object.__setattr__(self, marking_name, marking)
        object.__setattr__(self, "places", places)
        object.__setattr__(self, "transitions", transitions)
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "labels", MappingProxyType(labels))
        freeze = lambda d: MappingProxyType({k: frozenset(v) for k, v in d.items()})
        object.__setattr__(self, "_preset", freeze(pre))
        object.__setattr__(self, "_postset", freeze(post))
        object.__setattr__(self, "_place_preset", freeze(ppre))
        object.__setattr__(self, "_place_postset", freeze(ppost))

    def __reduce__(self):
        return (_rebuild_net, (self.places, self.transitions, self.arcs, self.initial_marking,
                               self.final_marking, dict(self.labels), self.name))

    def preset(self, node) -> frozenset:
        if node in self._preset:
            return self._preset[node]
        return self._place_preset[node]

    def postset(self, node) -> frozenset:
        if node in self._postset:
            return self._postset[node]
        return self._place_postset[node]

    def label(self, transition):
        return self.labels[transition]

    def is_silent(self, transition) -> bool:
        return self.labels[transition] is None

    def sorted_transitions(self) -> list:
        return sorted(self.transitions)

    def visible_labels(self) -> set:
        return {l for l in self.labels.values() if l is not None}


def _rebuild_net(places, transitions, arcs, initial, final, labels, name):
    return AcceptingPetriNet(places, transitions, arcs, initial, final, labels, name)


def enabled_transitions(net: AcceptingPetriNet, marking: Marking) -> set:
    return {t for t in net.transitions if all(marking.count(p) >= 1 for p in net.preset(t))}


def is_enabled(net: AcceptingPetriNet, marking: Marking, transition) -> bool:
    return all(marking.count(p) >= 1 for p in net.preset(transition))


def fire(net: AcceptingPetriNet, marking: Marking, transition) -> Marking:
    if not is_enabled(net, marking, transition):
        raise NotEnabled(transition, marking)
    return marking - Multiset(net.preset(transition)) + Multiset(net.postset(transition))


def fire_sequence(net: AcceptingPetriNet, marking: Marking, transitions: Iterable) -> Marking:
    for t in transitions:
        marking = fire(net, marking, t)
    return marking


def reachability_graph(net: AcceptingPetriNet, cap: int = DEFAULT_STATE_CAP, start: Marking | None = None) -> dict:
    """Breadth-first reachability graph ``marking -> [(transition, successor)]``."""
    start = net.initial_marking if start is None else start
    transitions = net.sorted_transitions()
    graph: dict = {}
    queue = deque([start])
    seen = {start}
    while queue:
        marking = queue.popleft()
        edges = []
        for t in transitions:
            if is_enabled(net, marking, t):
                successor = fire(net, marking, t)
                edges.append((t, successor))
                if successor not in seen:
                    seen.add(successor)
                    if len(seen) > cap:
                        raise StateSpaceCapExceeded(cap, "reachable marking set")
                    queue.append(successor)
        graph[marking] = edges
    return graph


def reachable_markings(net: AcceptingPetriNet, cap: int = DEFAULT_STATE_CAP) -> list[Marking]:
    """All markings reachable from the initial marking, in canonical order."""
    return sorted(reachability_graph(net, cap))


def can_reach(graph: dict, target: Marking) -> set:
    """Markings of ``graph`` from which ``target`` is reachable."""
    backward: dict = {m: [] for m in graph}
    for m, edges in graph.items():
        for _, succ in edges:
            backward.setdefault(succ, []).append(m)
    if target not in backward:
        return set()
    result = {target}
    queue = deque([target])
    while queue:
        m = queue.popleft()
        for pred in backward.get(m, ()):
            if pred not in result:
                result.add(pred)
                queue.append(pred)
    return result


@dataclass(frozen=True)
class Violation:
    code: str
    message: str

    def __str__(self):
        return f"{self.code}: {self.message}"


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def codes(self) -> list[str]:
        return [v.code for v in self.violations]

    def add(self, code: str, message: str) -> None:
        self.violations.append(Violation(code, message))

    def __str__(self):
        if self.ok:
            return "valid"
        return "\n".join(str(v) for v in self.violations)


def validate_workflow_net(net: AcceptingPetriNet, cap: int = DEFAULT_STATE_CAP) -> ValidationReport:
    """Structural workflow-net checks plus the two soundness consequences we rely on.

    Soundness is approximated by: the state space is finite (within ``cap``) and
    the final marking is reachable from every reachable marking.
    """
    report = ValidationReport()
    sources = sorted(p for p in net.places if not net.preset(p))
    sinks = sorted(p for p in net.places if not net.postset(p))
    if not sources:
        report.add("no source", "no place with empty preset")
    elif len(sources) > 1:
        report.add("multiple sources", f"places with empty preset: {sources}")
    if not sinks:
        report.add("no sink", "no place with empty postset")
    elif len(sinks) > 1:
        report.add("multiple sinks", f"places with empty postset: {sinks}")
    if len(sources) != 1 or len(sinks) != 1:
        return report

    source, sink = sources[0], sinks[0]
    forward = _closure(source, net.postset)
    backward = _closure(sink, net.preset)
    off_path = sorted((net.places | net.transitions) - (forward & backward))
    if off_path:
        report.add("not on source-sink path", f"nodes not on a path from {source} to {sink}: {off_path}")
    if net.initial_marking != Multiset([source]):
        report.add("initial marking", f"initial marking {net.initial_marking!r} is not [{source}]")
    if net.final_marking != Multiset([sink]):
        report.add("final marking", f"final marking {net.final_marking!r} is not [{sink}]")
    if not report.ok:
        return report

    try:
        graph = reachability_graph(net, cap)
    except StateSpaceCapExceeded:
        report.add("state space cap", f"more than {cap} reachable markings (unbounded or oversized net)")
        return report
    coreachable = can_reach(graph, net.final_marking)
    stuck = [m for m in graph if m not in coreachable]
    if stuck:
        report.add("final marking unreachable",
                   f"{len(stuck)} reachable markings cannot reach {net.final_marking!r}, e.g. {sorted(stuck)[0]!r}")
    return report


def _closure(start, step) -> set:
    seen = {start}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for nxt in step(node):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen
