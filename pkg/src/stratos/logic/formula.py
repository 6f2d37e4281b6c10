"""Formula AST for the temporal-modal query language.

``str(formula)`` prints the canonical concrete syntax accepted by
:func:`stratos.logic.parser.parse`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional


class Formula:
    prec = 9

    def children(self) -> tuple:
        return ()

    def walk(self) -> Iterator["Formula"]:
        yield self
        for c in self.children():
            yield from c.walk()

    def __str__(self):
        return render(self)

    # convenience constructors for building formulas in code
    def __invert__(self):
        return Not(self)

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __rshift__(self, other):
        return Implies(self, other)


@dataclass(frozen=True, eq=True)
class Const(Formula):
    value: bool
    prec = 9


@dataclass(frozen=True, eq=True)
class Atom(Formula):
    name: str
    prec = 9


@dataclass(frozen=True, eq=True)
class Not(Formula):
    sub: Formula
    prec = 4

    def children(self):
        return (self.sub,)


@dataclass(frozen=True, eq=True)
class And(Formula):
    left: Formula
    right: Formula
    prec = 3

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=True)
class Or(Formula):
    left: Formula
    right: Formula
    prec = 2

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=True)
class Implies(Formula):
    left: Formula
    right: Formula
    prec = 1

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=True)
class Past(Formula):
    """Strict past: the operand held at some earlier time."""

    sub: Formula
    prec = 4

    def children(self):
        return (self.sub,)


@dataclass(frozen=True, eq=True)
class Future(Formula):
    """Strict future: the operand holds at some later time."""

    sub: Formula
    prec = 4

    def children(self):
        return (self.sub,)


@dataclass(frozen=True, eq=True)
class Box(Formula):
    """Agent necessity. ``time=None`` is the tensed form; an int fixes the relation slice."""

    agent: str
    sub: Formula
    time: Optional[int] = None
    prec = 4

    def children(self):
        return (self.sub,)


@dataclass(frozen=True, eq=True)
class Diamond(Formula):
    agent: str
    sub: Formula
    time: Optional[int] = None
    prec = 4

    def children(self):
        return (self.sub,)


@dataclass(frozen=True, eq=True)
class At(Formula):
    """The operand evaluated at a fixed time, whatever the evaluation time."""

    sub: Formula
    time: int
    prec = 5

    def children(self):
        return (self.sub,)


TRUE = Const(True)
FALSE = Const(False)


def _wrap(f: Formula, min_prec: int) -> str:
    s = render(f)
    return f"({s})" if f.prec < min_prec else s


def _modal(tag, f):
    idx = f.agent if f.time is None else f"{f.agent},{f.time}"
    return f"{tag}({idx}) {_wrap(f.sub, 4)}"


def render(f: Formula) -> str:
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        return "~" + _wrap(f.sub, 4)
    if isinstance(f, Past):
        return "P " + _wrap(f.sub, 4)
    if isinstance(f, Future):
        return "F " + _wrap(f.sub, 4)
    if isinstance(f, Box):
        return _modal("[]", f)
    if isinstance(f, Diamond):
        return _modal("<>", f)
    if isinstance(f, At):
        return f"{_wrap(f.sub, 9)}@{f.time}"
    if isinstance(f, (And, Or)):
        op = " & " if isinstance(f, And) else " | "
        return _wrap(f.left, f.prec) + op + _wrap(f.right, f.prec + 1)
    if isinstance(f, Implies):
        return _wrap(f.left, 2) + " -> " + _wrap(f.right, 1)
    raise TypeError(f"not a formula: {f!r}")


def is_future_free(f: Formula) -> bool:
    """No F operator, no fixed-time evaluation and no time-indexed necessity.

    Such formulas depend only on the vertex they are evaluated at.
    """
    for g in f.walk():
        if isinstance(g, (Future, At)) or (isinstance(g, (Box, Diamond)) and g.time is not None):
            return False
    return True


def has_future(f: Formula) -> bool:
    return any(isinstance(g, Future) for g in f.walk())


def atoms(f: Formula) -> frozenset:
    return frozenset(g.name for g in f.walk() if isinstance(g, Atom))


def agents(f: Formula) -> frozenset:
    return frozenset(g.agent for g in f.walk() if isinstance(g, (Box, Diamond)))


def times(f: Formula) -> frozenset:
    out = set()
    for g in f.walk():
        if isinstance(g, At) or (isinstance(g, (Box, Diamond)) and g.time is not None):
            out.add(g.time)
    return frozenset(out)


def depth(f: Formula) -> int:
    kids = f.children()
    return 0 if not kids else 1 + max(depth(c) for c in kids)
