"""Micro-time trees, complete choices and universe generation.

Each world state carries a tree of choice nodes. A node is owned by an agent
(``"world"`` is nature) and belongs to a named choice point; the same point
may label several nodes, which is how an agent's ignorance of earlier
micro-moves within one time step is written down. Every root-to-leaf path
crosses a choice point at most once, so any per-path selection extends to a
complete choice and the successors of a state are exactly its leaves.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Union

from .errors import (IllFormedEnsembleError, IncompleteChoiceError,
                     ModelReferenceError, SchemaError)
from .world import Universe, Vertex, WorldState

WORLD = "world"
NULL = "null"


@dataclass(frozen=True)
class ChoiceNode:
    agent: str
    point: str
    moves: tuple  # ((action, ChoiceNode | state id), ...)


Node = Union[ChoiceNode, str]


@dataclass(frozen=True)
class CompleteChoice:
    agent: str
    selection: tuple  # sorted ((point, action), ...)

    @property
    def name(self) -> str:
        return selection_name(self.selection)


@dataclass(frozen=True)
class Alternative:
    """A complete choice applied uniformly at every state of an information set."""

    agent: str
    selection: tuple

    @property
    def name(self) -> str:
        return selection_name(self.selection)

    def at(self, state: str) -> CompleteChoice:
        return CompleteChoice(self.agent, self.selection)


def selection_name(selection) -> str:
    if not selection:
        return NULL
    if len(selection) == 1:
        return selection[0][1]
    return ",".join(f"{p}={a}" for p, a in selection)


class MicroTimeTree:
    def __init__(self, state: str, root: Node):
        self.state = state
        self.root = root
        self._check(root, frozenset())

    def _check(self, node, seen):
        if isinstance(node, str):
            return
        if not node.moves:
            raise SchemaError(f"choice point {node.point!r} in tree of {self.state!r} has no moves")
        key = (node.agent, node.point)
        if key in seen:
            raise SchemaError(f"path in tree of {self.state!r} revisits choice point {node.point!r}")
        actions = [a for a, _ in node.moves]
        if len(set(actions)) != len(actions):
            raise SchemaError(f"duplicate action at choice point {node.point!r}")
        for _, child in node.moves:
            self._check(child, seen | {key})

    @cached_property
    def _points(self) -> dict:
        found: dict = {}

        def walk(node):
            if isinstance(node, str):
                return
            actions = tuple(a for a, _ in node.moves)
            prev = found.setdefault((node.agent, node.point), actions)
            if set(prev) != set(actions):
                raise SchemaError(
                    f"choice point {node.point!r} offers different actions at different nodes")
            for _, child in node.moves:
                walk(child)

        walk(self.root)
        return found

    def points(self, agent: str) -> dict:
        """``{point: actions}`` for the choice points owned by ``agent``."""
        return {p: acts for (a, p), acts in sorted(self._points.items()) if a == agent}

    @cached_property
    def owners(self) -> frozenset:
        return frozenset(a for a, _ in self._points)

    @cached_property
    def leaves(self) -> frozenset:
        out = set()

        def walk(node):
            if isinstance(node, str):
                out.add(node)
            else:
                for _, child in node.moves:
                    walk(child)

        walk(self.root)
        return frozenset(out)

    def complete_choices(self, agent: str) -> list:
        pts = self.points(agent)
        names = sorted(pts)
        return [CompleteChoice(agent, tuple(zip(names, combo)))
                for combo in itertools.product(*(pts[p] for p in names))]

    def next_state(self, joint: Mapping[str, CompleteChoice]) -> str:
        node = self.root
        while not isinstance(node, str):
            choice = joint.get(node.agent)
            sel = dict(choice.selection) if choice is not None else {}
            if node.point not in sel:
                raise IncompleteChoiceError(
                    f"no selection for {node.agent}'s choice point {node.point!r} in {self.state!r}")
            child = dict(node.moves).get(sel[node.point])
            if child is None:
                raise IncompleteChoiceError(
                    f"action {sel[node.point]!r} not available at {node.point!r}")
            node = child
        return node

    def outcomes(self, agent: str, selection) -> frozenset:
        """Leaves reachable when ``agent`` plays ``selection`` and everyone else varies."""
        sel = dict(selection)
        out = set()

        def walk(node):
            if isinstance(node, str):
                out.add(node)
                return
            if node.agent == agent:
                if node.point not in sel:
                    raise IncompleteChoiceError(
                        f"no selection for choice point {node.point!r} in {self.state!r}")
                walk(dict(node.moves)[sel[node.point]])
            else:
                for _, child in node.moves:
                    walk(child)

        walk(self.root)
        return frozenset(out)


def absorbing_tree(state: str) -> MicroTimeTree:
    return MicroTimeTree(state, state)


def next_state(tree: MicroTimeTree, joint: Mapping[str, CompleteChoice]) -> str:
    return tree.next_state(joint)


def joint_choices(tree: MicroTimeTree) -> list[dict]:
    """Every complete joint choice for the agents owning points in ``tree``."""
    agents = sorted(tree.owners)
    per_agent = [tree.complete_choices(a) for a in agents]
    return [dict(zip(agents, combo)) for combo in itertools.product(*per_agent)]


def structure(tree: MicroTimeTree, agent: str) -> tuple:
    return tuple((p, tuple(sorted(acts))) for p, acts in tree.points(agent).items())


def alternatives(trees: Mapping[str, MicroTimeTree], agent: str, states) -> list[Alternative]:
    """Uniform complete choices for ``agent`` across the given frontier states."""
    states = sorted(set(states))
    if not states:
        return [Alternative(agent, ())]
    shapes = {structure(trees[s], agent) for s in states}
    if len(shapes) > 1:
        raise IllFormedEnsembleError(
            f"{agent} has different choice points across states {states}")
    tree = trees[states[0]]
    return [Alternative(agent, c.selection) for c in tree.complete_choices(agent)]


def outcomes(trees: Mapping[str, MicroTimeTree], agent: str, alt: Alternative, state: str) -> frozenset:
    return trees[state].outcomes(agent, alt.selection)


def parse_tree(state: str, raw, path="") -> MicroTimeTree:
    return MicroTimeTree(state, _parse_node(raw, path or f"/trees/{state}"))


def _parse_node(raw, path) -> Node:
    if isinstance(raw, str):
        return raw
    if not isinstance(raw, dict) or "agent" not in raw or "moves" not in raw:
        raise SchemaError("tree node needs 'agent' and 'moves'", path)
    agent = raw["agent"]
    point = raw.get("point", agent)
    moves = tuple((str(a), _parse_node(child, f"{path}/moves/{a}"))
                  for a, child in raw["moves"].items())
    return ChoiceNode(agent, point, moves)


def build_universe(states, trees: Mapping[str, MicroTimeTree], initial, t_max: int,
                   propositions=()) -> Universe:
    """Unroll the trees from the initial states into every total history."""
    state_map = {s.id: s for s in states}
    for s in initial:
        if s not in state_map:
            raise ModelReferenceError(f"initial state {s!r} is not declared")
    for s, tree in trees.items():
        if s not in state_map:
            raise ModelReferenceError(f"tree attached to undeclared state {s!r}")
        for leaf in tree.leaves:
            if leaf not in state_map:
                raise ModelReferenceError(f"tree of {s!r} leads to undeclared state {leaf!r}")
    succ = {s: (sorted(trees[s].leaves) if s in trees else [s]) for s in state_map}
    paths = [(s,) for s in sorted(set(initial))]
    for _ in range(t_max):
        paths = [p + (n,) for p in paths for n in succ[p[-1]]]
    return Universe(state_map.values(), t_max, paths, propositions)


def frontier_states(universe: Universe, members) -> list[str]:
    """States at the members that still have a step to take."""
    return sorted({v.state for v in members if v.cut < universe.axis.t_max})


__all__ = [
    "WORLD", "NULL", "ChoiceNode", "CompleteChoice", "Alternative", "MicroTimeTree",
    "absorbing_tree", "next_state", "joint_choices", "alternatives", "outcomes",
    "parse_tree", "build_universe", "frontier_states", "WorldState", "Vertex",
]
