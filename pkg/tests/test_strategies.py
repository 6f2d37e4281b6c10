import copy
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import bits, future_potential
from stratos import fixture_path, from_dict
from stratos.errors import (EnumerationLimitError, IllFormedEnsembleError,
                            IncompleteStrategyError, ModelReferenceError, SchemaError)
from stratos.random_models import random_model
from stratos.strategies import (PlanState, PureStrategy, expectations_correct,
                                group_potential, info_potential, plan_state_potential,
                                potential_given_info, strategy_potential, what_if)
from stratos.world import iter_bits

seeds = st.integers(0, 3000)


def small(seed):
    return random_model(seed, max_strategies=256)


@given(seeds)
def test_potential_from_every_vertex_matches_oracle(seed):
    m = small(seed)
    for a in m.agents:
        space = m.space(a)
        for pi in space.strategies():
            assert space.potential(pi) == bits(future_potential(m, pi))
            for v in m.universe.vertices:
                assert space.potential(pi, v) == bits(future_potential(m, pi, v))


@given(seeds)
def test_potentials_cover_and_shrink(seed):
    m = small(seed)
    u = m.universe
    for a in m.agents:
        space = m.space(a)
        pots = [space.potential(pi) for pi in space.strategies()]
        union = 0
        for p in pots:
            assert p  # trees never block an agent outright
            union |= p
        assert union == u.all
        for pi in space.strategies():
            for v in u.vertices:
                # a later start constrains fewer steps
                assert space.potential(pi, v) & ~u.ext(v) == 0
                assert space.potential(pi) & u.ext(v) & ~space.potential(pi, v) == 0


@given(seeds)
def test_describe_match_roundtrip(seed):
    m = small(seed)
    for a in m.agents:
        space = m.space(a)
        for pi in space.strategies():
            assert space.match(space.describe(pi)) == [pi]
            assert space.resolve([space.describe(pi)]) == {pi}
        assert len(space.resolve("all")) == space.size
        assert space.match({}) == list(space.strategies())


def test_pennies_spaces(load_fixture):
    m = load_fixture("pennies_sequential")
    assert m.space("A").size == 4  # h/t at each of two cells
    assert m.space("B").size == 2
    blind = load_fixture("pennies_blind")
    assert blind.space("A").size == 2
    pi = blind.space("A").match({"A_blind": "h"})[0]
    assert blind.space("A").label(pi) == "A_blind:h"
    assert blind.space("A").match({"s0>bt": "h"}) == [pi]


def test_strategy_errors(load_fixture):
    space = load_fixture("pennies_sequential").space("A")
    with pytest.raises(IncompleteStrategyError):
        space.potential(PureStrategy("A", (0,)))
    with pytest.raises(IncompleteStrategyError):
        space.potential(PureStrategy("A", (0, 7)))
    with pytest.raises(ModelReferenceError):
        space.potential(PureStrategy("B", (0, 0)))
    with pytest.raises(SchemaError):
        space.match({"s0": "h"})  # A has no choice at the root
    with pytest.raises(SchemaError):
        space.match({"s0>bh": "sideways"})
    with pytest.raises(SchemaError):
        PlanState("A", frozenset())


def test_cap(monkeypatch, load_fixture):
    space = load_fixture("pennies_sequential").space("A")
    monkeypatch.setenv("STRATOS_STRATEGY_CAP", "3")
    with pytest.raises(EnumerationLimitError):
        list(space.strategies())
    assert len(list(space.strategies(cap=4))) == 4


def test_non_uniform_cell_is_ill_formed():
    data = json.loads(fixture_path("pennies_blind").read_text())
    bad = copy.deepcopy(data)
    bad["trees"]["bt"] = {"agent": "A", "moves": {"x": "s_th", "y": "s_tt"}}
    with pytest.raises(IllFormedEnsembleError):
        from_dict(bad)


def test_plan_state_potentials(load_fixture):
    m = load_fixture("henry_sue")
    u = m.universe
    root = u.vertices[0]
    henry = m.plan_state("Henry", root)
    sue = m.plan_state("Sue", root)
    assert u.ids(plan_state_potential(m, henry)) == ["s0>tl", "s0>tt"]
    assert u.ids(group_potential(m, {"Henry": henry, "Sue": sue})) == ["s0>tt"]
    info = m.ensembles["Henry"].cell_of(root)
    assert info_potential(m, henry, info) == plan_state_potential(m, henry, root)
    pi = next(iter(henry))
    assert potential_given_info(m, pi, info) == strategy_potential(m, pi)
    assert expectations_correct(m, strategy_potential(m, pi), pi)
    assert not expectations_correct(m, 0, pi)


def test_what_if(load_fixture):
    m = load_fixture("henry_sue")
    root = m.universe.vertices[0]
    tour = m.space("Henry").match({"s0": "tournament"})
    lib = m.space("Henry").match({"s0": "library"})
    assert m.universe.ids(what_if(m, "Henry", tour, root)) == ["s0>tt"]
    # the candidate conflicts with Henry's own plan
    assert what_if(m, "Henry", lib, root) == 0
    with pytest.raises(SchemaError):
        what_if(m, "Henry", [], root)


@given(st.integers(0, 500))
def test_random_attitudes_are_consistent(seed):
    m = random_model(seed, max_strategies=256, attitudes=True)
    u = m.universe
    for a in m.agents:
        for v in u.vertices:
            plan = m.plan_state(a, v)
            assert plan.strategies <= m.repertoire(a)
            pot = plan_state_potential(m, plan, v)
            assert set(iter_bits(pot)) == set().union(
                *(future_potential(m, pi, v) for pi in plan))
