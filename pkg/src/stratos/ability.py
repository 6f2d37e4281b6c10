"""Ability operators: forcing searches over strategy spaces.

Every operator is posed at a vertex ``H^t``. A strategy's forcing domain is
its potential from that vertex: the histories through ``H^t`` that follow
the strategy from ``t`` on. ``space`` selects the full strategy space
(``"pi"``) or the declared repertoire (``"delta"``).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Optional

from . import kernels
from .errors import (EmptyDomainWarning, EnumerationLimitError, SchemaError,
                     UndefinedConditionalError)
from .strategies import PureStrategy, nested_group_potential, strategy_cap

TOL = 1e-9
SPACES = ("pi", "delta")


@dataclass
class _Source:
    """Kernel factors for one agent plus a decoder back to strategies."""

    agent: str
    factors: list
    explicit: Optional[list] = None  # strategies when the space is a single explicit factor

    def decode(self, idx) -> PureStrategy:
        if self.explicit is not None:
            return self.explicit[idx[0]]
        return PureStrategy(self.agent, tuple(idx))


def _source(model, agent, v, space) -> _Source:
    if space not in SPACES:
        raise SchemaError(f"unknown strategy space {space!r}; use one of {SPACES}")
    sp = model.space(agent)
    if space == "pi" or not model.has_repertoire(agent):
        return _Source(agent, sp.factors(v.cut))
    delta = sorted(model.repertoire(agent))
    return _Source(agent, [[sp.potential(pi, v) for pi in delta]], delta)


def _sources(model, agents, v, space) -> list:
    out = [_source(model, a, v, space) for a in agents]
    size = math.prod(kernels.space_size(s.factors) for s in out)
    cap = strategy_cap()
    if size > cap:
        raise EnumerationLimitError(f"{size} strategy combinations, above the cap of {cap}")
    return out


def _split(sources, idx) -> tuple:
    out, pos = [], 0
    for s in sources:
        n = len(s.factors)
        out.append(s.decode(idx[pos:pos + n]))
        pos += n
    return tuple(out)


def _vertex(model, history, t):
    return model.universe.vertex(history, t)


def _warn_empty(what):
    warnings.warn(f"{what}: forcing domain is empty, claim holds vacuously",
                  EmptyDomainWarning, stacklevel=3)


def find_forcing(model, agents: Iterable[str], alpha, history, t: int, space="pi",
                 restrict: Optional[int] = None):
    """First strategy tuple (lexicographic) whose joint potential from
    ``H^t``, intersected with ``restrict``, lies inside ``alpha``; ``None`` if none."""
    agents = list(agents)
    v = _vertex(model, history, t)
    base = model.universe.ext(v)
    if restrict is not None:
        base &= restrict
    sources = _sources(model, agents, v, space)
    factors = [f for s in sources for f in s.factors]
    idx = kernels.first_forcing(factors, base, model.sat(alpha, t), len(model.universe))
    return None if idx is None else _split(sources, idx)


def forces(model, pi: PureStrategy, alpha, t: int = 0, vertex=None) -> bool:
    """Every history of ``pi*`` (from ``vertex`` when given) satisfies ``alpha`` at ``t``."""
    pot = model.space(pi.agent).potential(pi, vertex)
    return pot & ~model.sat(alpha, t) == 0


def o_can(model, agent, alpha, history, t) -> bool:
    return find_forcing(model, [agent], alpha, history, t, "pi") is not None


def s_can(model, agent, alpha, history, t) -> bool:
    return find_forcing(model, [agent], alpha, history, t, "delta") is not None


def nested_domain(model, holder, group, history, t) -> int:
    v = _vertex(model, history, t)
    info = model.ensembles[holder].cell_of(v)
    return nested_group_potential(model, holder, group, info)


def co_can(model, agent, alpha, history, t, group=None, space="delta") -> bool:
    """Forcing within what ``agent`` knows of the plans of ``group``
    (default: every agent it holds a nested plan state about)."""
    group = model.nested_subjects(agent) if group is None else group
    dom = nested_domain(model, agent, group, history, t) & model.universe.ext(_vertex(model, history, t))
    if not dom:
        _warn_empty(f"co-can for {agent}")
        return True
    return find_forcing(model, [agent], alpha, history, t, space, dom) is not None


def coop_can(model, group, alpha, history, t, space="delta") -> bool:
    return find_forcing(model, sorted(group), alpha, history, t, space) is not None


def co_coop_can(model, group, alpha, history, t, other, space="delta") -> bool:
    """Joint forcing by ``group`` within each member's knowledge of ``other``'s plans."""
    v = _vertex(model, history, t)
    dom = model.universe.ext(v)
    for a in sorted(group):
        dom &= nested_domain(model, a, other, history, t)
    if not dom:
        _warn_empty(f"co-coop-can for {sorted(group)}")
        return True
    return find_forcing(model, sorted(group), alpha, history, t, space, dom) is not None


def _scan(model, agent, alpha, history, t, space, weights, utils):
    v = _vertex(model, history, t)
    src = _sources(model, [agent], v, space)[0]
    return src, kernels.scan(src.factors, model.universe.ext(v), model.sat(alpha, t),
                             weights, utils, len(model.universe))


def u_can(model, agent, alpha, history, t, mode="pessimistic", space="pi") -> Optional[float]:
    """Best utility guarantee (``pessimistic``) or best hope (``optimistic``)
    over forcing strategies; ``None`` when nothing forces ``alpha``."""
    if mode not in ("pessimistic", "optimistic"):
        raise SchemaError(f"unknown utility mode {mode!r}")
    n = len(model.universe)
    _, res = _scan(model, agent, alpha, history, t, space, [1.0] * n, model.utility(agent))
    key = "umin" if mode == "pessimistic" else "umax"
    vals = [u for f, u in zip(res["forcing"], res[key]) if f]
    return max(vals) if vals else None


def _conditional(res):
    out = []
    for m, g, s in zip(res["mass"], res["good_mass"], res["usum"]):
        out.append(None if m <= 0 else (g / m, s / m))
    if all(x is None for x in out):
        raise UndefinedConditionalError("every strategy's potential has zero prior mass")
    return out


def p_can(model, agent, alpha, history, t, space="pi") -> float:
    """Highest conditional probability of ``alpha`` given a strategy's potential."""
    n = len(model.universe)
    _, res = _scan(model, agent, alpha, history, t, space, model.prior, [0.0] * n)
    return max(x[0] for x in _conditional(res) if x is not None)


def xu_can(model, agent, alpha, history, t, space="pi") -> tuple:
    """``(p, xu)``: among strategies attaining the best ``p``, the highest
    expected utility with the prior renormalized inside the potential."""
    _, res = _scan(model, agent, alpha, history, t, space, model.prior, model.utility(agent))
    pairs = [x for x in _conditional(res) if x is not None]
    best = max(p for p, _ in pairs)
    return best, max(xu for p, xu in pairs if p >= best - TOL)

