"""Bounded instance checks of the nondiminishing- and perfect-information schemata.

Instances are generated in a fixed order: atoms (sorted, at most
``MAX_ATOMS``), then unary operators ``~ P F [](B)`` over atoms together with
pairwise ``&``/``|``, then unary operators over that level together with
``atom -> level1``. Instances whose schema verdict is fully determined by
the same satisfaction sets are checked once; the first failing instance in
generation order is reported as the witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..information import has_ndi, has_perfect_info
from .evaluate import Evaluator
from .formula import (And, At, Atom, Box, Formula, Future, Implies, Not, Or, Past,
                      has_future, is_future_free)

MAX_ATOMS = 3
TENSED_RESTRICTION = "alpha contains no F operator"
FUTURE_FREE = "alpha is future-free: no F, no @t, no time-indexed necessity"


@dataclass
class SchemaReport:
    schema: str
    agent: str
    condition: str
    condition_holds: bool
    instances: int
    distinct: int
    valid: bool
    counterexample: Optional[dict] = None
    restriction: str = ""

    def as_dict(self) -> dict:
        return {
            "schema": self.schema,
            "agent": self.agent,
            "condition": self.condition,
            "condition_holds": self.condition_holds,
            "instances": self.instances,
            "distinct": self.distinct,
            "valid": self.valid,
            "counterexample": self.counterexample,
            "restriction": self.restriction,
        }


def instance_pool(propositions, agents, max_atoms: int = MAX_ATOMS) -> list[Formula]:
    """Depth <= 2 formulas over the first ``max_atoms`` propositions, deterministic order."""
    level0 = [Atom(p) for p in sorted(propositions)[:max_atoms]]

    def unary(f):
        return [Not(f), Past(f), Future(f)] + [Box(b, f) for b in sorted(agents)]

    level1 = [g for a in level0 for g in unary(a)]
    for i, a in enumerate(level0):
        for b in level0[i + 1:]:
            level1 += [And(a, b), Or(a, b)]
    level2 = [g for f in level1 for g in unary(f)]
    level2 += [Implies(a, f) for a in level0 for f in level1]
    seen, out = set(), []
    for f in level0 + level1 + level2:
        if f not in seen:
            seen.add(f)
            out.append(f)
    return out


def _first_failure(ev: Evaluator, f: Formula):
    ok, wit = ev.valid(f)
    return None if ok else {"formula": str(f), "history": wit[0], "time": wit[1]}


def _check(ev, schema, agent, condition, holds, instances, restriction=""):
    """``instances`` yields ``(key, formula)``; formulas sharing a key share a verdict."""
    seen, n, cex = set(), 0, None
    for key, f in instances:
        n += 1
        if key in seen:
            continue
        seen.add(key)
        if cex is None:
            cex = _first_failure(ev, f)
    return SchemaReport(schema, agent, condition, holds, n, len(seen), cex is None, cex, restriction)


def _times(ev):
    return list(ev.universe.axis.times)


def ndi_indexed(ev: Evaluator, agent: str, pool) -> SchemaReport:
    """``[](A,t) a@t'' -> [](A,t') a@t''`` for t <= t'."""
    ts = _times(ev)

    def gen():
        for a in pool:
            sat = ev.sat(a)
            for t2 in ts:
                for t in ts:
                    for t1 in ts:
                        if t <= t1:
                            x = At(a, t2)
                            yield (sat[t2], t, t1), Implies(Box(agent, x, t), Box(agent, x, t1))

    return _check(ev, "ndi-indexed", agent, "nondiminishing information",
                  has_ndi(ev.ensembles[agent]), gen())


def ndi_tensed(ev: Evaluator, agent: str, pool) -> SchemaReport:
    """``P [](A) a -> [](A) P a`` for F-free ``a``."""
    def gen():
        for a in pool:
            if not has_future(a):
                yield ev.sat(a), Implies(Past(Box(agent, a)), Box(agent, Past(a)))

    return _check(ev, "ndi-tensed", agent, "nondiminishing information",
                  has_ndi(ev.ensembles[agent]), gen(), TENSED_RESTRICTION)


def pi_indexed(ev: Evaluator, agent: str, pool) -> SchemaReport:
    """``a@t -> [](A,t') a@t`` for t <= t' and future-free ``a``."""
    ts = _times(ev)

    def gen():
        for a in pool:
            if not is_future_free(a):
                continue
            sat = ev.sat(a)
            for t in ts:
                for t1 in ts:
                    if t <= t1:
                        x = At(a, t)
                        yield (sat[t], t, t1), Implies(x, Box(agent, x, t1))

    return _check(ev, "pi-indexed", agent, "perfect information",
                  has_perfect_info(ev.ensembles[agent]), gen(), FUTURE_FREE)


def pi_tensed(ev: Evaluator, agent: str, pool) -> SchemaReport:
    """``a -> [](A) a`` for future-free ``a``."""
    def gen():
        for a in pool:
            if is_future_free(a):
                yield ev.sat(a), Implies(a, Box(agent, a))

    return _check(ev, "pi-tensed", agent, "perfect information",
                  has_perfect_info(ev.ensembles[agent]), gen(), FUTURE_FREE)


def _pool(ev, propositions, agents):
    props = propositions if propositions is not None else sorted(ev.universe.propositions)
    ags = agents if agents is not None else sorted(ev.ensembles)
    return instance_pool(props, ags)


def check_ndi_axioms(ev: Evaluator, propositions=None, agents=None) -> list[SchemaReport]:
    pool = _pool(ev, propositions, agents)
    out = []
    for a in sorted(ev.ensembles):
        out += [ndi_indexed(ev, a, pool), ndi_tensed(ev, a, pool)]
    return out


def check_pi_axioms(ev: Evaluator, propositions=None, agents=None) -> list[SchemaReport]:
    pool = _pool(ev, propositions, agents)
    out = []
    for a in sorted(ev.ensembles):
        out += [pi_indexed(ev, a, pool), pi_tensed(ev, a, pool)]
    return out
