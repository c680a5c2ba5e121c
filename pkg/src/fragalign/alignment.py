"""Synchronous product nets, shortest-path alignment search and alignment checks.

Pipeline for fragment alignments (``align``):

1. relevant start markings (see :mod:`fragalign.auxiliary`)
2. auxiliary net with one silent jump per relevant marking
3. synchronous product of the (auxiliary) model net and the trace net
4. uniform-cost search with a goal depending on the alignment kind
5. removal of the jump move, which fixes the alignment's start marking
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Mapping

from .auxiliary import (
    AuxiliaryNet,
    Method,
    advanced_markings,
    baseline_markings,
    build_auxiliary_net,
    filtered_markings,
    restrict_to_submodel,
)
from .errors import MalformedPath, MethodNotApplicable, NoGoalReachable, StateSpaceCapExceeded
from .nets import (
    SKIP,
    AcceptingPetriNet,
    Marking,
    Multiset,
    ValidationReport,
    can_reach,
    fire,
    is_enabled,
    reachability_graph,
    state_cap_from_env,
)
from .traces import Trace, TraceKind, as_trace
from .tree import ProcessTree
from .tree_net import TreeNetBinding, to_wfnet


class MoveKind(str, Enum):
    SYNCHRONOUS = "synchronous"
    LOG = "log"
    VISIBLE_MODEL = "visible_model"
    INVISIBLE_MODEL = "invisible_model"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Move:
    log: str
    model: str
    kind: MoveKind
    model_label: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.log == SKIP and self.model == SKIP:
            raise ValueError("(>>, >>) is not a move")


def move_cost(move: Move) -> int:
    return 1 if move.kind in (MoveKind.LOG, MoveKind.VISIBLE_MODEL) else 0


@dataclass(eq=False)
class Alignment:
    moves: tuple
    cost: int
    start_marking: Marking
    end_marking: Marking
    kind: TraceKind
    method: Method | None = None
    stats: dict = field(default_factory=dict)
    net: AcceptingPetriNet | None = field(default=None, repr=False)

    def log_projection(self) -> tuple:
        return tuple(m.log for m in self.moves if m.log != SKIP)

    def model_projection(self) -> tuple:
        return tuple(m.model for m in self.moves if m.model != SKIP)

    def count(self, kind) -> int:
        return sum(1 for m in self.moves if m.kind == MoveKind(kind))

    def to_json(self) -> dict:
        return {
            "kind": str(self.kind),
            "cost": self.cost,
            "moves": [{"log": m.log, "model_transition": m.model, "move_type": str(m.kind)}
                      for m in self.moves],
            "start_marking": [[p, c] for p, c in self.start_marking.items()],
            "end_marking": [[p, c] for p, c in self.end_marking.items()],
            "stats": {"expanded": self.stats.get("expanded", 0),
                      "queued": self.stats.get("queued", 0),
                      "ms": round(self.stats.get("ms", 0.0), 3)},
        }

    def pretty(self) -> str:
        return format_alignment(self)


def format_alignment(alignment: Alignment) -> str:
    """Two-row table: trace part on top, model part (transition and label) below."""
    if not alignment.moves:
        return "(empty alignment)"
    top, bottom = [], []
    for m in alignment.moves:
        top.append(m.log)
        if m.model == SKIP:
            bottom.append(SKIP)
        elif m.model_label is None:
            bottom.append(f"{m.model}")
        else:
            bottom.append(f"{m.model}({m.model_label})")
    widths = [max(len(a), len(b)) for a, b in zip(top, bottom)]
    row = lambda cells: "| " + " | ".join(c.ljust(w) for c, w in zip(cells, widths)) + " |"
    rule = "+" + "+".join("-" * (w + 2) for w in widths) + "+"
    return "\n".join([rule, row(top), rule.replace("-", "="), row(bottom), rule])


# -- nets for the search ----------------------------------------------------

def build_trace_net(trace) -> AcceptingPetriNet:
    trace = as_trace(trace)
    places = [f"q{i}" for i in range(len(trace) + 1)]
    transitions = {f"e{i}": label for i, label in enumerate(trace.activities, start=1)}
    arcs = set()
    for i in range(1, len(trace) + 1):
        arcs.add((f"q{i - 1}", f"e{i}"))
        arcs.add((f"e{i}", f"q{i}"))
    return AcceptingPetriNet(
        places=places, transitions=transitions, arcs=arcs,
        initial_marking=Multiset([places[0]]), final_marking=Multiset([places[-1]]),
        labels=transitions, name="trace",
    )


@dataclass(frozen=True, eq=False)
class SynchronousProductNet:
    net: AcceptingPetriNet
    move_class: Mapping
    trace_final_place: str
    model_final_marking: Marking
    model_places: Mapping
    model_start_place: str | None = None

    def model_part(self, marking: Marking) -> Marking:
        return Multiset({self.model_places[p]: c for p, c in marking.items() if p in self.model_places})


def build_spn(model: AcceptingPetriNet, trace_net: AcceptingPetriNet,
              model_start_place=None) -> SynchronousProductNet:
    """Product of ``model`` and ``trace_net``; ``model_start_place`` names the
    auxiliary start place that must be empty in every goal state."""
    mp = {p: f"m:{p}" for p in model.places}
    tp = {q: f"l:{q}" for q in trace_net.places}
    arcs, labels, moves = set(), {}, {}

    def add(tid, move, pre, post):
        labels[tid] = None
        moves[tid] = move
        arcs.update((p, tid) for p in pre)
        arcs.update((tid, p) for p in post)

    for e in trace_net.sorted_transitions():
        a = trace_net.label(e)
        add(f"log:{e}", Move(a, SKIP, MoveKind.LOG),
            [tp[q] for q in trace_net.preset(e)], [tp[q] for q in trace_net.postset(e)])
    for t in model.sorted_transitions():
        label = model.label(t)
        kind = MoveKind.INVISIBLE_MODEL if label is None else MoveKind.VISIBLE_MODEL
        add(f"model:{t}", Move(SKIP, t, kind, label),
            [mp[p] for p in model.preset(t)], [mp[p] for p in model.postset(t)])
    by_label: dict = {}
    for t in model.sorted_transitions():
        if model.label(t) is not None:
            by_label.setdefault(model.label(t), []).append(t)
    for e in trace_net.sorted_transitions():
        a = trace_net.label(e)
        for t in by_label.get(a, ()):
            add(f"sync:{e}:{t}", Move(a, t, MoveKind.SYNCHRONOUS, a),
                [tp[q] for q in trace_net.preset(e)] + [mp[p] for p in model.preset(t)],
                [tp[q] for q in trace_net.postset(e)] + [mp[p] for p in model.postset(t)])

    initial = Multiset({mp[p]: c for p, c in model.initial_marking.items()}) + \
        Multiset({tp[q]: c for q, c in trace_net.initial_marking.items()})
    final = Multiset({mp[p]: c for p, c in model.final_marking.items()}) + \
        Multiset({tp[q]: c for q, c in trace_net.final_marking.items()})
    net = AcceptingPetriNet(
        places=set(mp.values()) | set(tp.values()), transitions=set(labels), arcs=arcs,
        initial_marking=initial, final_marking=final, labels=labels, name="spn",
    )
    (trace_final,) = trace_net.final_marking
    return SynchronousProductNet(
        net=net,
        move_class=moves,
        trace_final_place=tp[trace_final],
        model_final_marking=model.final_marking,
        model_places={v: k for k, v in mp.items()},
        model_start_place=None if model_start_place is None else mp[model_start_place],
    )


# -- search -----------------------------------------------------------------

@dataclass
class SearchResult:
    path: list
    cost: int
    final_marking: Marking
    expanded: int
    queued: int


def _goal_kind(goal) -> str:
    goal = str(TraceKind(goal))
    return "final" if goal in ("complete", "postfix") else "trace_end"


def search(spn: SynchronousProductNet, goal, cost: Callable[[Move], int] = move_cost,
           cap: int | None = None, heuristic: Callable | None = None) -> SearchResult:
    """Least-cost firing sequence from the SPN's initial marking to a goal state.

    ``goal`` is an alignment kind: complete/postfix states must equal the SPN
    final marking; infix/prefix states need the last trace place marked (and
    the auxiliary start place, if any, emptied). ``heuristic(state, places)``
    may supply an admissible, consistent estimate; the default is 0, i.e.
    uniform-cost search. Ties are broken first-in first-out.
    """
    cap = state_cap_from_env() if cap is None else cap
    net = spn.net
    places = sorted(net.places)
    index = {p: i for i, p in enumerate(places)}
    transitions = net.sorted_transitions()
    pre = [tuple(index[p] for p in sorted(net.preset(t))) for t in transitions]
    post = [tuple(index[p] for p in sorted(net.postset(t))) for t in transitions]
    costs = [cost(spn.move_class[t]) for t in transitions]
    if any(c < 0 for c in costs):
        raise ValueError("move costs must be non-negative")
    consumers = [[] for _ in places]
    for ti, inputs in enumerate(pre):
        for i in inputs:
            consumers[i].append(ti)

    start = tuple(net.initial_marking.count(p) for p in places)
    if _goal_kind(goal) == "final":
        target = tuple(net.final_marking.count(p) for p in places)
        is_goal = lambda s: s == target
    else:
        last = index[spn.trace_final_place]
        blocked = index[spn.model_start_place] if spn.model_start_place is not None else None
        is_goal = lambda s: s[last] > 0 and (blocked is None or s[blocked] == 0)
    h = (lambda s: 0) if heuristic is None else (lambda s: heuristic(s, places))

    best = {start: 0}
    parent: dict = {start: None}
    closed = set()
    heap = [(h(start), 0, 0, start)]
    seq = 1
    expanded = 0
    while heap:
        _, g, _, state = heapq.heappop(heap)
        if state in closed:
            continue
        closed.add(state)
        expanded += 1
        if is_goal(state):
            path = []
            node = state
            while parent[node] is not None:
                node, ti = parent[node]
                path.append(transitions[ti])
            path.reverse()
            final = Multiset({places[i]: c for i, c in enumerate(state) if c})
            return SearchResult(path, g, final, expanded, seq - 1)
        candidates = sorted({ti for i, c in enumerate(state) if c for ti in consumers[i]})
        for ti in candidates:
            if not all(state[i] for i in pre[ti]):
                continue
            succ = list(state)
            for i in pre[ti]:
                succ[i] -= 1
            for i in post[ti]:
                succ[i] += 1
            succ = tuple(succ)
            if succ in closed:
                continue
            ng = g + costs[ti]
            if ng < best.get(succ, ng + 1):
                best[succ] = ng
                parent[succ] = (state, ti)
                if len(best) > cap:
                    raise StateSpaceCapExceeded(cap, "alignment search")
                heapq.heappush(heap, (ng + h(succ), ng, seq, succ))
                seq += 1
    raise NoGoalReachable(f"no {goal} goal state is reachable")


def path_to_alignment(result: SearchResult, spn: SynchronousProductNet, kind,
                      net: AcceptingPetriNet) -> Alignment:
    moves = tuple(spn.move_class[t] for t in result.path)
    return Alignment(
        moves=moves,
        cost=result.cost,
        start_marking=spn.model_part(spn.net.initial_marking),
        end_marking=spn.model_part(result.final_marking),
        kind=TraceKind(kind),
        stats={"expanded": result.expanded, "queued": result.queued},
        net=net,
    )


def postprocess(alignment: Alignment, aux: AuxiliaryNet | None) -> Alignment:
    """Drop the jump move introduced by the auxiliary net and start the
    alignment at the marking the jump produced."""
    if aux is None:
        return alignment
    jumps = [i for i, m in enumerate(alignment.moves) if m.model != SKIP and aux.is_jump(m.model)]
    if len(jumps) > 1:
        raise MalformedPath(f"path contains {len(jumps)} jump moves")
    if not jumps:
        return replace(alignment, net=aux.original_net)
    (i,) = jumps
    if any(m.model != SKIP for m in alignment.moves[:i]):
        raise MalformedPath("a model move precedes the jump move")
    jump = alignment.moves[i]
    return replace(
        alignment,
        moves=alignment.moves[:i] + alignment.moves[i + 1:],
        cost=alignment.cost - move_cost(jump),
        start_marking=aux.jump_transitions[jump.model],
        net=aux.original_net,
    )


# -- orchestration ----------------------------------------------------------

@dataclass
class AlignConfig:
    state_cap: int = field(default_factory=state_cap_from_env)
    restrict_submodel: bool = True
    heuristic: Callable | None = None
    cost: Callable[[Move], int] = move_cost


def _resolve_model(model):
    if isinstance(model, ProcessTree):
        binding = to_wfnet(model)
        return binding, binding.net
    if isinstance(model, TreeNetBinding):
        return model, model.net
    if isinstance(model, AcceptingPetriNet):
        return None, model
    raise TypeError(f"unsupported model type {type(model).__name__}")


def relevant_markings(model, trace, method, kind=TraceKind.INFIX, config: AlignConfig | None = None):
    """Relevant markings for ``method``; returns ``(markings, binding_or_None, net)``.

    For advanced infix alignments the tree is first restricted to the smallest
    (loop-lifted) subtree containing the fragment's labels.
    """
    config = config or AlignConfig()
    binding, net = _resolve_model(model)
    method = Method(method)
    if method is Method.ADVANCED:
        if binding is None:
            raise MethodNotApplicable("the advanced method needs a process tree model")
        if TraceKind(kind) is TraceKind.INFIX and config.restrict_submodel:
            restricted = restrict_to_submodel(binding.tree, trace)
            if restricted.root != binding.tree.root:
                binding = to_wfnet(restricted, name=f"tree@{restricted.root}")
        return advanced_markings(binding, binding.tree, trace), binding, binding.net
    if method is Method.BASELINE:
        return baseline_markings(net, config.state_cap), binding, net
    return filtered_markings(net, trace, config.state_cap), binding, net


def align(model, trace, kind="complete", method="baseline", config: AlignConfig | None = None) -> Alignment:
    """Optimal complete, prefix, infix or postfix alignment of ``trace`` on ``model``.

    ``model`` is an accepting Petri net, a process tree or a tree binding.
    ``method`` selects the relevant-marking strategy and is ignored for
    complete and prefix alignments.
    """
    config = config or AlignConfig()
    kind = TraceKind(kind)
    trace = as_trace(trace, kind)
    started = time.perf_counter()
    binding, net = _resolve_model(model)
    stats: dict = {}
    aux = None
    if kind in (TraceKind.COMPLETE, TraceKind.PREFIX):
        search_net = net
        used_method = None
    else:
        used_method = Method(method)
        rm, binding, net = relevant_markings(model if binding is None else binding, trace,
                                             used_method, kind, config)
        stats["marking_ms"] = (time.perf_counter() - started) * 1000
        stats["relevant_markings"] = len(rm)
        aux = build_auxiliary_net(net, rm)
        search_net = aux.net
    spn = build_spn(search_net, build_trace_net(trace), aux.start_place if aux else None)
    result = search(spn, kind, cost=config.cost, cap=config.state_cap, heuristic=config.heuristic)
    alignment = postprocess(path_to_alignment(result, spn, kind, search_net), aux)
    stats.update(alignment.stats)
    stats["ms"] = (time.perf_counter() - started) * 1000
    stats.setdefault("marking_ms", 0.0)
    return replace(alignment, method=used_method, stats=stats, net=net)


# -- validity ---------------------------------------------------------------

def validate_alignment(alignment: Alignment, model=None, trace=None, cap: int | None = None) -> ValidationReport:
    """Check the three validity conditions of complete/prefix/infix/postfix alignments.

    1. the trace part (skips removed) equals ``trace``
    2. the model part fires from the start marking to the end marking, and
       the markings satisfy the kind's constraints
    3. no (>>, >>) move, synchronous moves have matching labels, move types
       agree with transition labels
    """
    report = ValidationReport()
    if model is None:
        net = alignment.net
    else:
        net = _resolve_model(model)[1]
    if net is None:
        raise ValueError("no model net to validate against")
    cap = state_cap_from_env() if cap is None else cap
    kind = TraceKind(alignment.kind)

    if trace is not None:
        expected = tuple(as_trace(trace).activities)
        if alignment.log_projection() != expected:
            report.add("condition 1", f"trace part {alignment.log_projection()} differs from {expected}")

    for i, m in enumerate(alignment.moves):
        if m.log == SKIP and m.model == SKIP:
            report.add("condition 3", f"move {i} is (>>, >>)")
            continue
        if m.model != SKIP and m.model not in net.transitions:
            report.add("condition 3", f"move {i} uses unknown transition {m.model!r}")
            continue
        label = net.label(m.model) if m.model != SKIP else None
        if m.log != SKIP and m.model != SKIP and label != m.log:
            report.add("condition 3", f"move {i} pairs {m.log!r} with {m.model!r} labelled {label!r}")
        expected_kind = (MoveKind.LOG if m.model == SKIP else
                         MoveKind.SYNCHRONOUS if m.log != SKIP else
                         MoveKind.INVISIBLE_MODEL if label is None else MoveKind.VISIBLE_MODEL)
        if m.kind != expected_kind:
            report.add("move type", f"move {i} is typed {m.kind} but is a {expected_kind} move")
    if not report.ok:
        return report

    marking = alignment.start_marking
    for t in alignment.model_projection():
        if not is_enabled(net, marking, t):
            report.add("condition 2", f"{t} is not enabled in {marking!r}")
            return report
        marking = fire(net, marking, t)
    if marking != alignment.end_marking:
        report.add("condition 2", f"model part ends in {marking!r}, not {alignment.end_marking!r}")

    needs_start_initial = kind in (TraceKind.COMPLETE, TraceKind.PREFIX)
    needs_end_final = kind in (TraceKind.COMPLETE, TraceKind.POSTFIX)
    if needs_start_initial and alignment.start_marking != net.initial_marking:
        report.add("condition 2", f"{kind} alignment must start in {net.initial_marking!r}")
    if needs_end_final and alignment.end_marking != net.final_marking:
        report.add("condition 2", f"{kind} alignment must end in {net.final_marking!r}")
    if not needs_start_initial or not needs_end_final:
        graph = reachability_graph(net, cap)
        if alignment.start_marking not in graph:
            report.add("condition 2", f"start marking {alignment.start_marking!r} is not reachable")
        elif alignment.end_marking not in can_reach(graph, net.final_marking):
            report.add("condition 2", f"final marking is not reachable from {alignment.end_marking!r}")

    total = sum(move_cost(m) for m in alignment.moves)
    if total != alignment.cost:
        report.add("cost", f"stated cost {alignment.cost} differs from move cost sum {total}")
    return report
