import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import outcomes
from stratos.actions import (CompleteChoice, absorbing_tree, build_universe, joint_choices,
                             parse_tree)
from stratos.errors import IncompleteChoiceError, ModelReferenceError, SchemaError
from stratos.random_models import random_model
from stratos.world import (Event, Situation, Universe, WorldState, backwards_identical,
                           iter_bits, popcount, realizes)


def count_histories(model, state, steps):
    if steps == 0:
        return 1
    tree = model.trees.get(state) or absorbing_tree(state)
    nxt = {tree.next_state(j) for j in joint_choices(tree)}
    return sum(count_histories(model, s, steps - 1) for s in nxt)


@given(st.integers(0, 500))
def test_history_count_by_unrolling(seed):
    m = random_model(seed)
    u = m.universe
    initial = {h.trajectory[0] for h in u}
    assert len(u) == sum(count_histories(m, s, u.axis.t_max) for s in initial)


@given(st.integers(0, 500))
def test_histories_sorted_and_ext_consistent(seed):
    u = random_model(seed).universe
    trajs = [h.trajectory for h in u]
    assert trajs == sorted(trajs)
    for v in u.vertices:
        through = {h.index for h in u if h.trajectory[: v.cut + 1] == v.prefix}
        assert set(iter_bits(u.ext(v))) == through


@given(st.integers(0, 500))
def test_tree_outcomes_match_joint_enumeration(seed):
    m = random_model(seed)
    for s, tree in m.trees.items():
        for a in tree.owners:
            for c in tree.complete_choices(a):
                assert tree.outcomes(a, c.selection) == outcomes(m, s, a, c.selection)


def test_pennies_universe(load_fixture):
    u = load_fixture("pennies_simultaneous").universe
    assert len(u) == 4
    assert u.history(0).id == u.histories[0].id
    assert u.history(u.histories[2].trajectory).index == 2
    with pytest.raises(ModelReferenceError):
        u.history("nowhere")
    with pytest.raises(ModelReferenceError):
        u.vertex(0, 9)
    with pytest.raises(ModelReferenceError):
        u.as_vertex("s0>nowhere")


def test_universe_rejects_partial_histories():
    states = [WorldState("a"), WorldState("b")]
    with pytest.raises(SchemaError):
        Universe(states, 1, [("a",)])
    with pytest.raises(SchemaError):
        Universe(states, 1, [])
    with pytest.raises(ModelReferenceError):
        Universe(states, 0, [("c",)])


def test_backwards_identical_and_events():
    states = [WorldState("a", frozenset({"p"})), WorldState("b"), WorldState("c", frozenset({"p"}))]
    tree = parse_tree("a", {"agent": "x", "point": "k", "moves": {"l": "b", "r": "c"}})
    u = build_universe(states, {"a": tree}, ["a"], 2, ["p"])
    h, k = u.histories
    assert backwards_identical(u, h, k, 0)
    assert not backwards_identical(u, h, k, 1)
    ev = Event({1: Situation({"p": True})})
    assert ev.span == frozenset({1})
    assert [realizes(u, ev, x) for x in u] == [False, True]


def test_next_state_needs_complete_choice():
    tree = parse_tree("a", {"agent": "x", "point": "k", "moves": {"l": "b", "r": "c"}})
    with pytest.raises(IncompleteChoiceError):
        tree.next_state({})
    with pytest.raises(IncompleteChoiceError):
        tree.next_state({"x": CompleteChoice("x", (("k", "zz"),))})
    assert tree.next_state({"x": CompleteChoice("x", (("k", "r"),))}) == "c"


def test_build_universe_reference_errors():
    states = [WorldState("a")]
    with pytest.raises(ModelReferenceError):
        build_universe(states, {}, ["z"], 1)
    tree = parse_tree("a", {"agent": "x", "point": "k", "moves": {"l": "ghost"}})
    with pytest.raises(ModelReferenceError):
        build_universe(states, {"a": tree}, ["a"], 1)


@given(st.integers(0, 2**64))
def test_bit_helpers(n):
    assert popcount(n) == len(list(iter_bits(n)))
    assert sum(1 << i for i in iter_bits(n)) == n
