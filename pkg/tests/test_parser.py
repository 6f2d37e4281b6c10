import pytest

from stratos.errors import FormulaSyntaxError, RangeError, ResolutionError
from stratos.logic import parse
from stratos.logic.formula import (FALSE, TRUE, And, At, Atom, Box, Diamond, Future,
                                   Implies, Not, Or, Past, agents, atoms, depth,
                                   is_future_free, render, times)

p, q, r = Atom("p"), Atom("q"), Atom("r")


@pytest.mark.parametrize("text, expected", [
    ("p", p),
    ("true", TRUE),
    ("~p", Not(p)),
    ("!p", Not(p)),
    ("p & q | r", Or(And(p, q), r)),
    ("p | q & r", Or(p, And(q, r))),
    ("p -> q -> r", Implies(p, Implies(q, r))),
    ("F p@2", Future(At(p, 2))),
    ("(F p)@2", At(Future(p), 2)),
    ("P ~p", Past(Not(p))),
    ("[](A) p", Box("A", p)),
    ("[](A, 1) p", Box("A", p, 1)),
    ("<>(B) false", Diamond("B", FALSE)),
    ("□(A) p ∧ ◇(B) q", And(Box("A", p), Diamond("B", q))),
    ("¬p ∨ q → r", Implies(Or(Not(p), q), r)),
])
def test_grammar(text, expected):
    assert parse(text) == expected
    assert parse(render(expected)) == expected


@pytest.mark.parametrize("text, col", [
    ("p &", 4),
    ("(p", 1),  # points at the unclosed paren
    ("p q", 3),
    ("[](A p", 6),
    ("p @ x", 5),
    ("", 1),
])
def test_syntax_error_column(text, col):
    with pytest.raises(FormulaSyntaxError) as e:
        parse(text)
    assert e.value.column == col


def test_resolution():
    with pytest.raises(ResolutionError):
        parse("[](Z) p", agents_=["A"])
    with pytest.raises(ResolutionError):
        parse("zz", propositions=["p"])
    with pytest.raises(RangeError):
        parse("p@5", t_max=3)
    assert parse("p@3", t_max=3) == At(p, 3)


def test_queries():
    f = parse("[](A, 2) (p -> F q@1) & <>(B) r")
    assert atoms(f) == {"p", "q", "r"}
    assert agents(f) == {"A", "B"}
    assert times(f) == {1, 2}
    assert depth(f) >= 3
    assert not is_future_free(f)
    assert is_future_free(parse("P p & [](A) q"))
    assert not is_future_free(parse("p@1"))


def test_operator_sugar():
    assert (~p) == Not(p)
    assert (p & q) == And(p, q)
    assert (p | q) == Or(p, q)
    assert (p >> q) == Implies(p, q)
