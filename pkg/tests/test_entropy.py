import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import entropy as scipy_entropy

from stratos.entropy import (conditional_control_entropy, control_entropy, distribution,
                             entropy, state_entropy, strategic_entropy)
from stratos.errors import DomainError
from stratos.random_models import random_model

weights = st.lists(st.floats(0, 1e3, allow_nan=False), min_size=1, max_size=12).filter(
    lambda w: sum(w) > 1e-6)


@given(weights)
def test_against_scipy(w):
    total = math.fsum(w)
    p = [x / total for x in w]
    assert math.isclose(entropy(p), scipy_entropy(p, base=2), abs_tol=1e-9)


@pytest.mark.parametrize("n", [1, 2, 4, 8])
def test_uniform_exact(n):
    assert state_entropy(range(n)) == math.log2(n)
    assert control_entropy([f"pi{i}" for i in range(n)]) == math.log2(n)


def test_zero_is_never_negative():
    assert math.copysign(1, entropy([1.0])) == 1.0
    assert entropy([1.0, 0.0]) == 0.0


@given(st.integers(0, 10**6))
def test_conditional_at_most_unconditional(seed):
    rng = random.Random(seed)
    a, b = ["a0", "a1", "a2"], ["b0", "b1", "b2"]
    raw = {(x, y): rng.random() for x in a for y in b}
    if rng.random() < 0.3:
        raw[("a1", "b1")] = 0.0
    total = math.fsum(raw.values())
    joint = {k: v / total for k, v in raw.items()}
    joint[("a2", "b2")] = 1.0 - math.fsum(v for k, v in joint.items() if k != ("a2", "b2"))
    marg = [math.fsum(joint[(x, y)] for x in a) for y in b]
    h = conditional_control_entropy(a, b, joint)
    assert h <= entropy(marg) + 1e-9
    rows = [[joint[(x, y)] for y in b] for x in a]
    want = math.fsum(math.fsum(r) * scipy_entropy(r, base=2) for r in rows if math.fsum(r) > 0)
    assert math.isclose(h, want, abs_tol=1e-9)


def test_conditional_independent_and_determined():
    a, b = ["x", "y"], ["u", "v"]
    ind = {(i, j): 0.25 for i in a for j in b}
    assert math.isclose(conditional_control_entropy(a, b, ind), 1.0)
    det = {("x", "u"): 0.5, ("x", "v"): 0.0, ("y", "u"): 0.0, ("y", "v"): 0.5}
    assert conditional_control_entropy(a, b, det) == 0.0


def test_distribution_checks():
    with pytest.raises(DomainError):
        distribution([])
    with pytest.raises(DomainError):
        distribution(["a"], {"b": 1.0})
    with pytest.raises(DomainError):
        distribution(["a", "b"], {"a": 1.5, "b": -0.5})
    with pytest.raises(DomainError):
        distribution(["a", "b"], {"a": 0.5, "b": 0.4})
    assert distribution(["a", "b"], {"a": 0.5, "b": 0.5 + 1e-12})["a"] == 0.5


def test_card_information_set(load_fixture):
    cell = load_fixture("cards").ensembles["Mary"].cell("I1")
    assert state_entropy(cell) == 1.0


@given(st.integers(0, 2000))
def test_strategic_entropy_bounds(seed):
    m = random_model(seed, max_strategies=256)
    for a in m.agents:
        space = m.space(a)
        for pi in space.strategies():
            h = strategic_entropy(m, pi)
            n = bin(space.potential(pi)).count("1")
            assert 0.0 <= h <= math.log2(n) + 1e-9
            assert math.isclose(h, math.log2(n), abs_tol=1e-9)  # uniform prior


SOLO = {
    "schema_version": "1", "t_max": 2, "agents": ["A"], "propositions": ["p"],
    "states": [{"id": "s"}, {"id": "l", "labels": ["p"]}, {"id": "r"}],
    "initial": ["s"],
    "trees": {
        "s": {"agent": "A", "moves": {"go_l": "l", "go_r": "r"}},
        "l": {"agent": "A", "moves": {"stay": "l", "flip": "r"}},
        "r": {"agent": "A", "moves": {"stay": "r", "flip": "l"}},
    },
}


def test_deterministic_strategy_has_zero_entropy():
    from stratos import from_dict
    m = from_dict(SOLO)
    space = m.space("A")
    assert space.size == 2 * 2 * 2
    for pi in space.strategies():
        assert bin(space.potential(pi)).count("1") == 1
        assert strategic_entropy(m, pi) == 0.0
