import json
import math
import warnings

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import formulas, future_potential, sat_set
from stratos import fixture_path, from_dict
from stratos.ability import s_can
from stratos.errors import (ConsistencyError, EmptyDomainWarning, MissingIntentionError,
                            UndefinedConditionalError)
from stratos.intention import (co_plans, group_plans, plan_domain, plan_probability, plans,
                               plans_p, plans_u, will)
from stratos.random_models import random_model
from stratos.world import iter_bits


def oracle_domain(m, agent, h, t):
    u = m.universe
    cell = m.ensembles[agent].cell_of(u.vertex(h, t))
    out = set()
    for v in cell:
        for pi in m.plan_state(agent, v):
            out |= future_potential(m, pi, v)
    return out


def drawn(data):
    m = random_model(data.draw(st.integers(0, 3000)), max_strategies=512, attitudes=True)
    u = m.universe
    f = data.draw(formulas(sorted(u.propositions), (), u.axis.t_max, depth=2))
    return m, f, data.draw(st.sampled_from(u.histories)), data.draw(st.integers(0, u.axis.t_max))


@given(st.data())
def test_plans_match_oracle(data):
    m, f, h, t = drawn(data)
    good = sat_set(m, f, t)
    for a in m.agents:
        dom = oracle_domain(m, a, h, t)
        assert set(iter_bits(plan_domain(m, a, h, t))) == dom
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", EmptyDomainWarning)
            assert plans(m, a, f, h, t) == (dom <= good)
        if dom:
            mass = math.fsum(m.prior[i] for i in dom)
            want = math.fsum(m.prior[i] for i in dom & good) / mass
            assert math.isclose(plan_probability(m, a, f, h, t), want, abs_tol=1e-12)
            assert plans_p(m, a, f, want, h, t)


@given(st.data())
def test_plans_imply_s_can(data):
    m, f, h, t = drawn(data)
    for a in m.agents:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", EmptyDomainWarning)
            if plans(m, a, f, h, t):
                assert s_can(m, a, f, h, t)
            if plans(m, a, f, h, t):
                assert co_plans(m, a, f, h, t)
                assert group_plans(m, m.agents, f, h, t)


@given(st.data())
def test_plans_u_thresholds(data):
    m, f, h, t = drawn(data)
    for a in m.agents:
        uts = m.utility(a)
        top = max(uts) + 1
        assert plans_u(m, a, f, top, h, t)  # nothing planned is worth that much
        dom = oracle_domain(m, a, h, t)
        lo = min(uts) - 1
        assert plans_u(m, a, f, lo, h, t) == (dom <= sat_set(m, f, t))


def test_henry_sue(load_fixture):
    m = load_fixture("henry_sue")
    assert plans(m, "Henry", "F henry_tour", 0, 0)
    assert will(m, "Henry", "Sue", "F sue_tour", 0, 0)
    assert not plans(m, "Sue", "F meet", 0, 0)
    assert co_plans(m, "Henry", "F meet", 0, 0)
    assert group_plans(m, ["Henry", "Sue"], "F meet", 0, 0)
    assert plan_probability(m, "Sue", "F meet", 0, 0) == 0.5
    with pytest.raises(MissingIntentionError):
        will(m, "Sue", "Henry", "F henry_tour", 0, 0)


def test_plan_state_must_be_uniform_in_a_cell():
    data = json.loads(fixture_path("pennies_blind").read_text())
    data["plan_states"] = {"A": {"default": [{"A_blind": "h"}],
                                 "at": [{"vertices": ["s0>bt"], "strategies": [{"A_blind": "t"}]}]}}
    m = from_dict(data)
    with pytest.raises(ConsistencyError):
        plans(m, "A", "F match", m.universe.history("s0>bt>s_tt"), 1)


def test_zero_mass_plan():
    data = json.loads(fixture_path("henry_sue").read_text())
    data["prior"] = {"s0>tt": 0.0, "s0>tl": 0.0, "s0>lt": 0.5, "s0>ll": 0.5}
    m = from_dict(data)
    with pytest.raises(UndefinedConditionalError):
        plan_probability(m, "Henry", "F meet", 0, 0)
