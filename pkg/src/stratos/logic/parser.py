"""Recursive-descent parser for formula text.

Grammar (EBNF)::

    formula     = implication ;
    implication = disjunction [ "->" implication ] ;
    disjunction = conjunction { "|" conjunction } ;
    conjunction = unary { "&" unary } ;
    unary       = ( "~" | "!" ) unary
                | ( "P" | "F" ) unary
                | ( "[]" | "<>" ) "(" agent [ "," int ] ")" unary
                | postfix ;
    postfix     = primary [ "@" int ] ;
    primary     = "true" | "false" | ident | "(" formula ")" ;

Unicode spellings ``¬ ∧ ∨ → □ ◇`` are accepted as well.
"""

from __future__ import annotations

import re
from typing import Iterable, Optional

from ..errors import FormulaSyntaxError, RangeError, ResolutionError
from .formula import (FALSE, TRUE, And, At, Atom, Box, Diamond, Formula, Future,
                      Implies, Not, Or, Past, agents, atoms, times)

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<arrow>->|→)
  | (?P<box>\[\]|□)
  | (?P<dia><>|◇)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<sym>[~!¬&∧|∨()@,])
""", re.VERBOSE)

_CANON = {"¬": "~", "!": "~", "∧": "&", "∨": "|", "→": "->", "□": "[]", "◇": "<>"}
KEYWORDS = {"P", "F", "true", "false"}


def tokenize(text: str) -> list:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            val = m.group()
            if kind in ("sym", "arrow", "box", "dia"):
                val = _CANON.get(val, val)
                kind = "sym"
            out.append((kind, val, pos))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.open_parens: list[int] = []

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def at(self, val) -> bool:
        tok = self.peek()
        return tok is not None and tok[0] in ("sym", "ident") and tok[1] == val

    def fail(self, what):
        tok = self.peek()
        if tok is None:
            if self.open_parens:
                raise FormulaSyntaxError("unclosed '('", self.text, self.open_parens[-1])
            raise FormulaSyntaxError(f"expected {what}, got end of input", self.text, len(self.text))
        raise FormulaSyntaxError(f"expected {what}, got {tok[1]!r}", self.text, tok[2])

    def expect(self, val):
        if not self.at(val):
            self.fail(repr(val))
        self.i += 1

    def integer(self) -> int:
        tok = self.peek()
        if tok is None or tok[0] != "int":
            self.fail("a time")
        self.i += 1
        return int(tok[1])

    def parse(self) -> Formula:
        f = self.implication()
        if self.peek() is not None:
            self.fail("end of input")
        return f

    def implication(self):
        left = self.disjunction()
        if self.at("->"):
            self.i += 1
            return Implies(left, self.implication())
        return left

    def disjunction(self):
        f = self.conjunction()
        while self.at("|"):
            self.i += 1
            f = Or(f, self.conjunction())
        return f

    def conjunction(self):
        f = self.unary()
        while self.at("&"):
            self.i += 1
            f = And(f, self.unary())
        return f

    def unary(self):
        if self.at("~"):
            self.i += 1
            return Not(self.unary())
        if self.at("P"):
            self.i += 1
            return Past(self.unary())
        if self.at("F"):
            self.i += 1
            return Future(self.unary())
        if self.at("[]") or self.at("<>"):
            cls = Box if self.at("[]") else Diamond
            self.i += 1
            self.expect("(")
            tok = self.peek()
            if tok is None or tok[0] != "ident":
                self.fail("an agent name")
            self.i += 1
            time = None
            if self.at(","):
                self.i += 1
                time = self.integer()
            self.expect(")")
            return cls(tok[1], self.unary(), time)
        return self.postfix()

    def postfix(self):
        f = self.primary()
        if self.at("@"):
            self.i += 1
            f = At(f, self.integer())
        return f

    def primary(self):
        tok = self.peek()
        if tok is None:
            self.fail("a formula")
        kind, val, pos = tok
        if kind == "ident" and val not in ("P", "F"):
            self.i += 1
            if val == "true":
                return TRUE
            if val == "false":
                return FALSE
            return Atom(val)
        if self.at("("):
            self.open_parens.append(pos)
            self.i += 1
            f = self.implication()
            self.expect(")")
            self.open_parens.pop()
            return f
        self.fail("a formula")


def parse(text: str, *, agents_: Optional[Iterable[str]] = None,
          propositions: Optional[Iterable[str]] = None,
          t_max: Optional[int] = None) -> Formula:
    """Parse ``text``; optionally resolve names against a model's declarations."""
    f = _Parser(text).parse()
    resolve(f, agents_=agents_, propositions=propositions, t_max=t_max)
    return f


def resolve(f: Formula, *, agents_=None, propositions=None, t_max=None) -> Formula:
    if agents_ is not None:
        unknown = agents(f) - set(agents_)
        if unknown:
            raise ResolutionError(f"unknown agent(s) {sorted(unknown)}")
    if propositions is not None:
        unknown = atoms(f) - set(propositions)
        if unknown:
            raise ResolutionError(f"unknown proposition(s) {sorted(unknown)}")
    if t_max is not None:
        bad = [t for t in times(f) if not 0 <= t <= t_max]
        if bad:
            raise RangeError(f"time(s) {sorted(bad)} outside 0..{t_max}")
    return f
