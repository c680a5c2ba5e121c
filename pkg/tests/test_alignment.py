import json
from dataclasses import replace

import pytest

from fragalign.alignment import (
    AlignConfig, Move, MoveKind, align, build_spn, build_trace_net, format_alignment, move_cost,
    path_to_alignment, postprocess, search, validate_alignment,
)
from fragalign.auxiliary import baseline_markings, build_auxiliary_net
from fragalign.errors import MalformedPath, MethodNotApplicable, StateSpaceCapExceeded
from fragalign.nets import SKIP, Multiset
from fragalign.traces import TraceKind

M = Multiset
METHODS_NET = ["baseline", "filtered"]


def test_trace_net():
    tn = build_trace_net(["d", "g"])
    assert len(tn.places) == 3 and len(tn.transitions) == 2
    empty = build_trace_net([])
    assert len(empty.places) == 1 and empty.initial_marking == empty.final_marking
    assert len(build_trace_net(["b", "d", "f"]).places) == 4


def test_spn_sync_pairs(hand_net):
    aux = build_auxiliary_net(hand_net, baseline_markings(hand_net))
    spn = build_spn(aux.net, build_trace_net(["d", "g"]), aux.start_place)
    syncs = {(spn.move_class[t].log, spn.move_class[t].model) for t in spn.net.transitions
             if spn.move_class[t].kind is MoveKind.SYNCHRONOUS}
    assert syncs == {("d", "t4"), ("g", "t8")}
    empty = build_spn(hand_net, build_trace_net([]))
    assert {m.kind for m in empty.move_class.values()} <= {MoveKind.VISIBLE_MODEL, MoveKind.INVISIBLE_MODEL}
    unknown = build_spn(hand_net, build_trace_net(["z"]))
    assert not any(m.kind is MoveKind.SYNCHRONOUS for m in unknown.move_class.values())


def test_move_cost():
    assert move_cost(Move("d", "t4", MoveKind.SYNCHRONOUS)) == 0
    assert move_cost(Move("a", SKIP, MoveKind.LOG)) == 1
    assert move_cost(Move(SKIP, "t5", MoveKind.INVISIBLE_MODEL)) == 0
    assert move_cost(Move(SKIP, "t10", MoveKind.VISIBLE_MODEL)) == 1
    with pytest.raises(ValueError):
        Move(SKIP, SKIP, MoveKind.LOG)


def test_search_goals(hand_net):
    aux = build_auxiliary_net(hand_net, baseline_markings(hand_net))
    for trace, goal, cost in ((["d", "g"], "infix", 0), (["d", "g"], "postfix", 1), (["a", "d", "g"], "postfix", 2)):
        spn = build_spn(aux.net, build_trace_net(trace), aux.start_place)
        assert search(spn, goal).cost == cost


def test_search_cap(hand_net):
    spn = build_spn(hand_net, build_trace_net(["d", "a", "e", "h"]))
    with pytest.raises(StateSpaceCapExceeded):
        search(spn, "complete", cap=5)


def test_postprocess_fig4a(hand_net):
    aux = build_auxiliary_net(hand_net, baseline_markings(hand_net))
    spn = build_spn(aux.net, build_trace_net(["d", "g"]), aux.start_place)
    jump = next(t for t, m in aux.jump_transitions.items() if m == M(["p4", "p5"]))
    by_move = {(m.log, m.model): t for t, m in spn.move_class.items()}
    # t5 and t8 both consume from p6, so no silent move can sit between d and g
    path = [by_move[(SKIP, jump)], by_move[("d", "t4")], by_move[("g", "t8")]]
    from fragalign.alignment import SearchResult
    from fragalign.nets import fire_sequence

    final = fire_sequence(spn.net, spn.net.initial_marking, path)
    raw = path_to_alignment(SearchResult(path, 0, final, 0, 0), spn, "infix", aux.net)
    a = postprocess(raw, aux)
    assert [(m.log, m.model) for m in a.moves] == [("d", "t4"), ("g", "t8")]
    assert a.end_marking == M(["p11"])
    assert a.start_marking == M(["p4", "p5"])
    assert validate_alignment(a, hand_net, ["d", "g"]).ok
    assert postprocess(raw, None) is raw
    twice = replace(raw, moves=raw.moves[:1] + raw.moves)
    with pytest.raises(MalformedPath):
        postprocess(twice, aux)


def test_empty_infix_is_single_jump(hand_net):
    a = align(hand_net, [], "infix", "filtered")
    assert a.moves == () and a.cost == 0 and a.start_marking == hand_net.final_marking


@pytest.mark.parametrize("method", METHODS_NET)
def test_goldens_on_hand_net(hand_net, method):
    a = align(hand_net, ["d", "g"], "infix", method)
    assert a.cost == 0 and a.count("synchronous") == 2
    a = align(hand_net, ["b", "d", "f"], "infix", method)
    assert a.cost == 0 and [m.log for m in a.moves if m.kind is MoveKind.SYNCHRONOUS] == ["b", "d", "f"]
    assert align(hand_net, ["d", "g"], "postfix", method).cost == 1
    assert align(hand_net, ["a", "d", "g"], "postfix", method).cost == 2


def test_complete_golden(hand_net):
    a = align(hand_net, ["d", "a", "e", "h"])
    assert a.cost == 5
    counts = {k: a.count(k) for k in MoveKind}
    assert counts == {MoveKind.LOG: 1, MoveKind.VISIBLE_MODEL: 4, MoveKind.INVISIBLE_MODEL: 2,
                      MoveKind.SYNCHRONOUS: 3}
    assert a.start_marking == M(["p1"]) and a.end_marking == M(["p12"])
    assert align(hand_net, list("abcdgh")).cost == 0
    assert validate_alignment(a, hand_net, ["d", "a", "e", "h"]).ok


def test_prefix(hand_net):
    assert align(hand_net, ["a", "b"], "prefix").cost == 0
    assert align(hand_net, ["b"], "prefix").cost == 1


def test_tree_methods(example_tree, example_binding):
    for method in ("baseline", "filtered", "advanced"):
        a = align(example_binding, ["b", "d", "f"], "infix", method)
        assert a.cost == 0 and validate_alignment(a, trace=["b", "d", "f"]).ok
    assert align(example_tree, ["e", "f"], "infix", "advanced").cost == 0
    unrestricted = AlignConfig(restrict_submodel=False)
    assert align(example_tree, ["e", "f"], "infix", "advanced", unrestricted).cost == 0


def test_advanced_needs_tree(hand_net):
    with pytest.raises(MethodNotApplicable):
        align(hand_net, ["d"], "infix", "advanced")


def test_validity_violations(hand_net):
    a = align(hand_net, ["d", "g"], "postfix", "baseline")
    assert validate_alignment(a, hand_net, ["d", "g"]).ok
    assert "condition 1" in validate_alignment(a, hand_net, ["d"]).codes()
    moved = replace(a, end_marking=M(["p11"]))
    assert "condition 2" in validate_alignment(moved, hand_net, ["d", "g"]).codes()
    bad = Move("x", "t4", MoveKind.SYNCHRONOUS)
    object.__setattr__(bad, "log", SKIP)
    object.__setattr__(bad, "model", SKIP)
    broken = replace(a, moves=a.moves + (bad,))
    assert "condition 3" in validate_alignment(broken, hand_net, ["d", "g"]).codes()
    mistyped = replace(a, moves=tuple(replace(m, kind=MoveKind.LOG) if m.kind is MoveKind.SYNCHRONOUS else m
                                      for m in a.moves))
    assert "move type" in validate_alignment(mistyped, hand_net).codes()


def test_json_and_pretty(hand_net):
    a = align(hand_net, ["d", "g"], "infix", "filtered")
    doc = json.loads(json.dumps(a.to_json()))
    assert set(doc) == {"kind", "cost", "moves", "start_marking", "end_marking", "stats"}
    assert doc["start_marking"] == [["p4", 1], ["p5", 1]]
    assert {"log", "model_transition", "move_type"} == set(doc["moves"][0])
    text = format_alignment(a)
    assert "t4(d)" in text and "t8(g)" in text


def test_heuristic_hook(hand_net):
    calls = []

    def h(state, places):
        calls.append(1)
        return 0

    assert align(hand_net, ["d", "a", "e", "h"], config=AlignConfig(heuristic=h)).cost == 5 and calls


def test_kind_recorded(hand_net):
    assert align(hand_net, ["d"], "postfix", "filtered").kind is TraceKind.POSTFIX


from hypothesis import given, settings, strategies as st  # noqa: E402

from fragalign.oracle import brute_force_cost  # noqa: E402
from fragalign.tree import random_tree  # noqa: E402
from fragalign.tree_net import to_wfnet  # noqa: E402


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.lists(st.sampled_from("abcdz"), max_size=4))
def test_engine_matches_oracle(seed, fragment):
    import random

    binding = to_wfnet(random_tree(random.Random(seed), max_nodes=9, alphabet="abcd", duplicate_probability=0.3))
    for kind in ("complete", "prefix", "infix", "postfix"):
        expected = brute_force_cost(binding.net, fragment, kind)
        methods = ("baseline", "filtered", "advanced") if kind in ("infix", "postfix") else ("baseline",)
        for method in methods:
            a = align(binding, fragment, kind, method)
            assert a.cost == expected
            assert validate_alignment(a, trace=fragment).ok
