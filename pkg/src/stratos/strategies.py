"""Pure strategies, potentials and plan states.

A strategy space enumerates, for one agent, the information sets where the
agent has choice points ("acting cells") and the uniform alternatives at
each. A pure strategy is one alternative index per acting cell.

Potentials are history bitsets. The global potential ``pi*`` constrains
every step; the potential *from a vertex* ``v`` contains only histories
through ``v`` and constrains the steps at or after ``v``'s cut, which is
what ability and intention operators quantify over.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Optional

from .actions import Alternative, MicroTimeTree, absorbing_tree, alternatives, frontier_states
from .errors import (ConsistencyError, EnumerationLimitError, IncompleteStrategyError,
                     MissingIntentionError, ModelReferenceError, SchemaError)
from .information import InfoEnsemble, InfoSet, i_star
from .world import Universe, Vertex

DEFAULT_CAP = 10**6


def strategy_cap() -> int:
    raw = os.environ.get("STRATOS_STRATEGY_CAP")
    return int(raw) if raw else DEFAULT_CAP


@dataclass(frozen=True, order=True)
class PureStrategy:
    agent: str
    choices: tuple  # alternative index per acting cell


class StrategySpace:
    def __init__(self, universe: Universe, trees: Mapping[str, MicroTimeTree],
                 ensemble: InfoEnsemble):
        self.universe = universe
        self.trees = trees
        self.ensemble = ensemble
        self.agent = ensemble.agent
        cells, alts = [], []
        for i, cell in enumerate(ensemble.cells):
            states = frontier_states(universe, cell.members)
            options = alternatives(self._tree_map(states), self.agent, states)
            if options[0].selection:
                cells.append(i)
                alts.append(tuple(options))
        self.cell_indices = tuple(cells)
        self.alts = tuple(alts)
        self._pos = {c: p for p, c in enumerate(cells)}
        self._outcomes: dict = {}

    def _tree_map(self, states):
        return {s: self.tree(s) for s in states}

    def tree(self, state: str) -> MicroTimeTree:
        t = self.trees.get(state)
        return t if t is not None else absorbing_tree(state)

    @property
    def cells(self) -> tuple:
        return tuple(self.ensemble.cells[i] for i in self.cell_indices)

    @property
    def size(self) -> int:
        return math.prod(len(a) for a in self.alts)

    def __len__(self):
        return self.size

    def __iter__(self) -> Iterator[PureStrategy]:
        return self.strategies()

    def strategies(self, cap: Optional[int] = None) -> Iterator[PureStrategy]:
        cap = strategy_cap() if cap is None else cap
        if self.size > cap:
            raise EnumerationLimitError(
                f"{self.agent} has {self.size} strategies, above the cap of {cap}")
        for combo in itertools.product(*(range(len(a)) for a in self.alts)):
            yield PureStrategy(self.agent, combo)

    def check(self, pi: PureStrategy) -> PureStrategy:
        if pi.agent != self.agent:
            raise ModelReferenceError(f"strategy of {pi.agent} used in {self.agent}'s space")
        if len(pi.choices) != len(self.alts):
            raise IncompleteStrategyError(
                f"strategy assigns {len(pi.choices)} cells, {self.agent} acts at {len(self.alts)}")
        for c, opts in zip(pi.choices, self.alts):
            if not 0 <= c < len(opts):
                raise IncompleteStrategyError(f"alternative index {c} out of range")
        return pi

    def alternative(self, pi: PureStrategy, cell: InfoSet) -> Alternative:
        """``pi(I)``; the null alternative where the agent has no choice points."""
        idx = self.ensemble.cells.index(cell)
        pos = self._pos.get(idx)
        if pos is None:
            return Alternative(self.agent, ())
        return self.alts[pos][pi.choices[pos]]

    def outcomes(self, state: str, alt: Alternative) -> frozenset:
        key = (state, alt.selection)
        hit = self._outcomes.get(key)
        if hit is None:
            hit = self._outcomes[key] = self.tree(state).outcomes(self.agent, alt.selection)
        return hit

    def masks(self, t_from: int = 0) -> tuple:
        """``masks[p][a]``: histories whose steps at cuts >= ``t_from`` inside
        acting cell ``p`` agree with alternative ``a``."""
        return self._masks[t_from]

    @cached_property
    def _masks(self) -> list:
        u = self.universe
        t_max = u.axis.t_max
        # violations[t][p][a]: histories breaking alternative a at acting cell p at cut t
        viol = [[[0] * len(a) for a in self.alts] for _ in range(t_max + 1)]
        for h in u:
            bit = 1 << h.index
            for t in range(t_max):
                pos = self._pos.get(self.ensemble.index_of(Vertex(h.trajectory[: t + 1])))
                if pos is None:
                    continue
                nxt = h.trajectory[t + 1]
                for a, alt in enumerate(self.alts[pos]):
                    if nxt not in self.outcomes(h.trajectory[t], alt):
                        viol[t][pos][a] |= bit
        out = [None] * (t_max + 1)
        acc = [[0] * len(a) for a in self.alts]
        for t in reversed(range(t_max + 1)):
            for p in range(len(self.alts)):
                for a in range(len(self.alts[p])):
                    acc[p][a] |= viol[t][p][a]
            out[t] = tuple(tuple(u.all & ~acc[p][a] for a in range(len(self.alts[p])))
                           for p in range(len(self.alts)))
        return out

    def potential(self, pi: PureStrategy, vertex: Optional[Vertex] = None) -> int:
        self.check(pi)
        if vertex is None:
            t_from, bits = 0, self.universe.all
        else:
            t_from, bits = vertex.cut, self.universe.ext(vertex)
        for p, m in enumerate(self.masks(t_from)):
            bits &= m[pi.choices[p]]
        return bits

    def factors(self, t_from: int = 0) -> list:
        """Per-cell option bitsets for the kernels."""
        return [list(m) for m in self.masks(t_from)]

    # naming ---------------------------------------------------------------

    def describe(self, pi: PureStrategy) -> dict:
        return {self.ensemble.cells[c].name: self.alts[p][pi.choices[p]].name
                for p, c in enumerate(self.cell_indices)}

    def label(self, pi: PureStrategy) -> str:
        d = self.describe(pi)
        return ";".join(f"{k}:{v}" for k, v in d.items()) or "null"

    def _resolve_cell(self, ref: str) -> int:
        try:
            cell = self.ensemble.cell(ref)
        except ModelReferenceError:
            cell = self.ensemble.cell_of(self.universe.as_vertex(ref))
        idx = self.ensemble.cells.index(cell)
        if idx not in self._pos:
            raise SchemaError(f"{self.agent} has no choice at information set {cell.name}")
        return self._pos[idx]

    def match(self, pattern) -> list[PureStrategy]:
        """All strategies agreeing with a partial ``{cell ref: alternative name}``."""
        if pattern in ("all", "*"):
            return list(self.strategies())
        fixed = {}
        for ref, alt_name in pattern.items():
            p = self._resolve_cell(ref)
            names = [a.name for a in self.alts[p]]
            if alt_name not in names:
                raise SchemaError(f"{alt_name!r} is not an alternative at {ref!r}; options {names}")
            fixed[p] = names.index(alt_name)
        ranges = [[fixed[p]] if p in fixed else range(len(a)) for p, a in enumerate(self.alts)]
        return [PureStrategy(self.agent, combo) for combo in itertools.product(*ranges)]

    def resolve(self, spec) -> frozenset:
        """A plan-state spec: ``"all"``, a pattern, or a list of patterns."""
        if spec in ("all", "*"):
            return frozenset(self.strategies())
        if isinstance(spec, dict):
            spec = [spec]
        out = set()
        for pattern in spec:
            out.update(self.match(pattern))
        return frozenset(out)


@dataclass(frozen=True)
class PlanState:
    agent: str
    strategies: frozenset

    def __post_init__(self):
        if not self.strategies:
            raise SchemaError(f"plan state of {self.agent} is empty")
        if any(pi.agent != self.agent for pi in self.strategies):
            raise SchemaError(f"plan state of {self.agent} holds another agent's strategy")

    def __iter__(self):
        return iter(sorted(self.strategies))

    def __len__(self):
        return len(self.strategies)

    def __le__(self, other):
        return self.strategies <= other.strategies


@dataclass(frozen=True)
class Repertoire:
    agent: str
    strategies: frozenset

    def __post_init__(self):
        if not self.strategies:
            raise SchemaError(f"repertoire of {self.agent} is empty")

    def __iter__(self):
        return iter(sorted(self.strategies))

    def __len__(self):
        return len(self.strategies)


@dataclass
class VertexMap:
    """A value per vertex: a default plus per-vertex overrides."""

    default: object = None
    overrides: dict = field(default_factory=dict)

    def get(self, v: Vertex):
        return self.overrides.get(v, self.default)


@dataclass
class NestedPlanState:
    holder: str
    subject: str
    states: VertexMap

    def at(self, v: Vertex) -> PlanState:
        s = self.states.get(v)
        if s is None:
            raise MissingIntentionError(
                f"{self.holder} has no plan state about {self.subject} at {v}")
        return s


@dataclass(frozen=True)
class GroupPlanState:
    group: tuple
    members: Mapping[str, PlanState]

    def __post_init__(self):
        if set(self.group) != set(self.members):
            raise SchemaError("group plan state needs one plan state per member")


# operations over a model --------------------------------------------------


def strategy_potential(model, pi: PureStrategy, vertex: Optional[Vertex] = None) -> int:
    return model.space(pi.agent).potential(pi, vertex)


def potential_given_info(model, pi: PureStrategy, info: InfoSet) -> int:
    return strategy_potential(model, pi) & i_star(model.universe, info)


def plan_state_potential(model, plan: PlanState, vertex: Optional[Vertex] = None) -> int:
    space = model.space(plan.agent)
    out = 0
    for pi in plan.strategies:
        out |= space.potential(pi, vertex)
    return out


def info_potential(model, plan: PlanState, info: InfoSet) -> int:
    """Histories allowed by ``plan`` from any vertex the holder thinks possible."""
    out = 0
    for v in info:
        out |= plan_state_potential(model, plan, v)
    return out


def plan_state_at_info(model, holder: str, subject: str, info: InfoSet) -> PlanState:
    if holder == subject:
        states = {model.plan_state(holder, v) for v in info}
        if len(states) > 1:
            raise ConsistencyError(
                f"{holder}'s plan state varies inside its information set {info.name}")
        return states.pop()
    union = set()
    for v in info:
        union |= model.nested_plan_state(holder, subject, v).strategies
    return PlanState(subject, frozenset(union))


def group_potential(model, plans: Mapping[str, PlanState], vertex: Optional[Vertex] = None,
                    infos: Optional[Mapping[str, InfoSet]] = None) -> int:
    """Intersection of member potentials.

    With ``infos`` each member's potential is taken relative to its own
    information set; with ``vertex`` from that vertex; otherwise globally.
    """
    out = model.universe.all
    for agent, plan in sorted(plans.items()):
        if infos is not None:
            out &= info_potential(model, plan, infos[agent])
        else:
            out &= plan_state_potential(model, plan, vertex)
    return out


def nested_group_potential(model, holder: str, group: Iterable[str], info: InfoSet) -> int:
    out = model.universe.all
    for b in sorted(group):
        out &= info_potential(model, plan_state_at_info(model, holder, b, info), info)
    return out


def what_if(model, agent: str, candidate, vertex: Vertex, group=None) -> int:
    """Futures if ``agent`` adopts ``candidate``, given its own plan state and
    its knowledge of the other agents' plans."""
    strategies = frozenset(candidate.strategies if isinstance(candidate, PlanState) else candidate)
    if not strategies:
        raise SchemaError("what-if needs a nonempty candidate plan")
    cand = PlanState(agent, strategies)
    info = model.ensembles[agent].cell_of(vertex)
    own = plan_state_at_info(model, agent, agent, info)
    if group is None:
        group = model.nested_subjects(agent)
    return (info_potential(model, cand, info) & info_potential(model, own, info)
            & nested_group_potential(model, agent, group, info))


def expectations_correct(model, expected: int, pi: PureStrategy) -> bool:
    return strategy_potential(model, pi) & ~expected == 0
