"""Brute-force reference costs, independent of the product-net search.

States are pairs (model marking, number of trace events consumed). Costs are
computed by layered breadth-first search: layer k holds every state with
optimal cost k, closed under the cost-free moves (synchronous and silent)
before the unit-cost moves (log and visible model moves) open layer k + 1.
Only the firing rule of :mod:`fragalign.nets` is shared with the engine.
"""

from __future__ import annotations

from collections import deque

from .errors import NoGoalReachable, StateSpaceCapExceeded
from .nets import DEFAULT_STATE_CAP, AcceptingPetriNet, enabled_transitions, fire, reachable_markings
from .traces import as_trace


def _successors(net, marking, pos, trace):
    """Yield ``(cost, state)`` for every single move out of ``(marking, pos)``."""
    if pos < len(trace):
        yield 1, (marking, pos + 1)
    for t in sorted(enabled_transitions(net, marking)):
        succ = fire(net, marking, t)
        label = net.label(t)
        if label is None:
            yield 0, (succ, pos)
        else:
            yield 1, (succ, pos)
            if pos < len(trace) and trace[pos] == label:
                yield 0, (succ, pos + 1)


def _layered_cost(net, starts, trace, is_goal, cap):
    seen = set()
    frontier = list(dict.fromkeys((m, 0) for m in starts))
    cost = 0
    while frontier:
        # close the layer under cost-free moves
        layer = []
        queue = deque(s for s in frontier if s not in seen)
        for s in queue:
            seen.add(s)
        while queue:
            state = queue.popleft()
            layer.append(state)
            if is_goal(state):
                return cost
            for step, succ in _successors(net, state[0], state[1], trace):
                if step == 0 and succ not in seen:
                    seen.add(succ)
                    queue.append(succ)
            if len(seen) > cap:
                raise StateSpaceCapExceeded(cap, "oracle product space")
        frontier = []
        for state in layer:
            for step, succ in _successors(net, state[0], state[1], trace):
                if step == 1 and succ not in seen:
                    frontier.append(succ)
        cost += 1
    raise NoGoalReachable("oracle found no goal state")


def brute_force_fragment_cost(net: AcceptingPetriNet, trace, kind: str = "infix",
                              cap: int = DEFAULT_STATE_CAP) -> int:
    """Optimal infix/postfix cost, minimised over every reachable start marking."""
    trace = tuple(as_trace(trace).activities)
    if kind not in ("infix", "postfix"):
        raise ValueError(f"fragment kind must be infix or postfix, not {kind!r}")
    starts = reachable_markings(net, cap)
    n = len(trace)
    if kind == "infix":
        is_goal = lambda s: s[1] == n
    else:
        is_goal = lambda s: s[1] == n and s[0] == net.final_marking
    return _layered_cost(net, starts, trace, is_goal, cap)


def brute_force_complete_cost(net: AcceptingPetriNet, trace, cap: int = DEFAULT_STATE_CAP) -> int:
    trace = tuple(as_trace(trace).activities)
    n = len(trace)
    return _layered_cost(net, [net.initial_marking], trace,
                         lambda s: s[1] == n and s[0] == net.final_marking, cap)


def brute_force_prefix_cost(net: AcceptingPetriNet, trace, cap: int = DEFAULT_STATE_CAP) -> int:
    trace = tuple(as_trace(trace).activities)
    n = len(trace)
    return _layered_cost(net, [net.initial_marking], trace, lambda s: s[1] == n, cap)


def brute_force_cost(net: AcceptingPetriNet, trace, kind: str, cap: int = DEFAULT_STATE_CAP) -> int:
    kind = str(kind)
    if kind == "complete":
        return brute_force_complete_cost(net, trace, cap)
    if kind == "prefix":
        return brute_force_prefix_cost(net, trace, cap)
    return brute_force_fragment_cost(net, trace, kind, cap)


def product_state_count(net: AcceptingPetriNet, trace, cap: int = DEFAULT_STATE_CAP) -> int:
    """Size of the (marking, position) product space, the measure used to bound oracle instances."""
    return len(reachable_markings(net, cap)) * (len(as_trace(trace)) + 1)


def enumerate_model_fragments(net: AcceptingPetriNet, max_len: int, cap: int = DEFAULT_STATE_CAP) -> set:
    """Every visible-label sequence of length <= ``max_len`` (the empty one
    included) that some run of the net produces contiguously. Silent
    transitions are skipped freely."""
    result = {()}
    seen = set()
    queue = deque()
    for m in reachable_markings(net, cap):
        queue.append((m, ()))
        seen.add((m, ()))
    while queue:
        marking, seq = queue.popleft()
        for t in sorted(enabled_transitions(net, marking)):
            label = net.label(t)
            if label is not None and len(seq) == max_len:
                continue
            nxt = (fire(net, marking, t), seq if label is None else seq + (label,))
            if nxt not in seen:
                seen.add(nxt)
                if len(seen) > cap:
                    raise StateSpaceCapExceeded(cap, "fragment enumeration")
                result.add(nxt[1])
                queue.append(nxt)
    return result
