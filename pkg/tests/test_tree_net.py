import random

from hypothesis import given, settings, strategies as st

from fragalign.alignment import align
from fragalign.nets import Multiset, reachable_markings, validate_workflow_net
from fragalign.oracle import brute_force_complete_cost
from fragalign.traces import simulate_log
from fragalign.tree import parse_tree_text, random_tree
from fragalign.tree_net import to_wfnet


def test_single_leaf():
    b = to_wfnet(parse_tree_text("a"))
    assert b.net.places == {"source", "sink"}
    assert dict(b.net.labels) == {"t:n0": "a"}
    assert b.net.initial_marking == Multiset(["source"]) and b.net.final_marking == Multiset(["sink"])
    assert b.transition("n0") == "t:n0" and b.transition_to_leaf["t:n0"] == "n0"


def test_sequence():
    b = to_wfnet(parse_tree_text("->(a, b)"))
    assert len(b.net.places) == 3
    assert sorted(b.net.labels.values()) == ["a", "b"]
    assert len(reachable_markings(b.net)) == 3
    assert brute_force_complete_cost(b.net, ["a", "b"]) == 0
    assert brute_force_complete_cost(b.net, ["b", "a"]) == 2


def test_running_example_valid(example_binding):
    assert validate_workflow_net(example_binding.net).ok
    assert {example_binding.net.label(t) for t in example_binding.transition_to_leaf} == set("abcdefgh")


def test_running_example_behaves_like_hand_net(hand_net, example_binding):
    rng = random.Random(7)
    traces = [t.activities for t in simulate_log(hand_net, 10, seed=3, noise=0.5)]
    while len(traces) < 20:
        traces.append(tuple(rng.choice("abcdefghz") for _ in range(rng.randint(0, 7))))
    for trace in traces:
        assert align(example_binding, trace).cost == align(hand_net, trace).cost, trace


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_random_trees_give_sound_nets(seed):
    tree = random_tree(random.Random(seed), max_nodes=14, tau_probability=0.2, duplicate_probability=0.2)
    assert validate_workflow_net(to_wfnet(tree).net).ok
