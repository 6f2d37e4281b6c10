"""Loaded models: universe, ensembles, strategy spaces and declared attitudes."""

from __future__ import annotations

import json
import math
from functools import cached_property
from pathlib import Path
from typing import Mapping, Optional

from . import schema
from .actions import WORLD, MicroTimeTree, build_universe, parse_tree
from .errors import (IllFormedEnsembleError, MissingIntentionError, ModelReferenceError,
                     PartitionViolationError, SchemaError, StratosError)
from .information import (InfoEnsemble, ensemble_from_cells, has_ndi, has_perfect_info,
                          is_straight, observation_ensemble, perfect_ensemble,
                          relation_backwards_consistent, relation_backwards_identical)
from .logic.evaluate import Evaluator
from .strategies import PlanState, StrategySpace, VertexMap, strategy_cap
from .world import Universe, Vertex, WorldState

TOL = 1e-9


class Model:
    """A validated model.

    ``ensembles`` are what the agents know and drive the necessity
    operators; strategy spaces are built from the ensembles the model was
    loaded with and do not change when knowledge is updated by messages.
    """

    def __init__(self, universe: Universe, trees: Mapping[str, MicroTimeTree], agents,
                 ensembles: Mapping[str, InfoEnsemble], raw: Optional[dict] = None,
                 name: str = ""):
        self.universe = universe
        self.trees = dict(trees)
        self.agents = tuple(agents)
        self.ensembles = dict(ensembles)
        self.base_ensembles = dict(ensembles)
        self.raw = raw or {}
        self.name = name
        self._spaces: dict = {}
        self._plans: dict = {}
        self._nested: dict = {}
        self._repertoires: dict = {}
        self._utils: dict = {}

    # construction ---------------------------------------------------------

    def with_ensemble(self, ensemble: InfoEnsemble) -> "Model":
        """Same model, with ``ensemble`` as what its agent knows."""
        m = Model.__new__(Model)
        m.__dict__.update({k: v for k, v in self.__dict__.items() if k != "evaluator"})
        m.ensembles = dict(self.ensembles)
        m.ensembles[ensemble.agent] = ensemble
        return m

    @cached_property
    def evaluator(self) -> Evaluator:
        return Evaluator(self.universe, self.ensembles)

    def formula(self, f):
        return self.evaluator.formula(f)

    def sat(self, f, t: int) -> int:
        return self.evaluator.sat(self.formula(f))[t]

    def vertex(self, ref, t: Optional[int] = None) -> Vertex:
        if t is None:
            return self.universe.as_vertex(ref)
        return self.universe.vertex(ref, t)

    def agent(self, name: str) -> str:
        if name not in self.agents:
            raise ModelReferenceError(f"unknown agent {name!r}; declared {list(self.agents)}")
        return name

    # strategies -----------------------------------------------------------

    def space(self, agent: str) -> StrategySpace:
        sp = self._spaces.get(agent)
        if sp is None:
            self.agent(agent)
            sp = self._spaces[agent] = StrategySpace(
                self.universe, self.trees, self.base_ensembles[agent])
        return sp

    def repertoire(self, agent: str) -> frozenset:
        """Delta_A; the whole strategy space when undeclared."""
        if agent not in self._repertoires:
            spec = self.raw.get("repertoires", {}).get(self.agent(agent), "all")
            self._repertoires[agent] = self._resolve(agent, spec, f"/repertoires/{agent}")
        return self._repertoires[agent]

    def has_repertoire(self, agent: str) -> bool:
        return agent in self.raw.get("repertoires", {})

    def _resolve(self, agent, spec, where) -> frozenset:
        try:
            out = self.space(agent).resolve(spec)
        except SchemaError as e:
            raise SchemaError(str(e), where) from None
        except ModelReferenceError as e:
            raise ModelReferenceError(f"{where}: {e}") from None
        if not out:
            raise SchemaError("strategy set is empty", where)
        return out

    def _vertex_map(self, agent, spec, where) -> VertexMap:
        if isinstance(spec, dict) and ("default" in spec or "at" in spec):
            default = spec.get("default")
            vm = VertexMap(None if default is None else
                           PlanState(agent, self._resolve(agent, default, where + "/default")))
            for i, entry in enumerate(spec.get("at", [])):
                ps = PlanState(agent, self._resolve(agent, entry["strategies"], f"{where}/at/{i}"))
                for ref in entry["vertices"]:
                    vm.overrides[self.universe.as_vertex(ref)] = ps
            return vm
        return VertexMap(PlanState(agent, self._resolve(agent, spec, where)))

    def plan_state(self, agent: str, v: Vertex) -> PlanState:
        """``S_A(H^t)``."""
        if agent not in self._plans:
            spec = self.raw.get("plan_states", {}).get(self.agent(agent))
            if spec is None:
                raise MissingIntentionError(f"no plan state declared for {agent}")
            self._plans[agent] = self._vertex_map(agent, spec, f"/plan_states/{agent}")
        ps = self._plans[agent].get(v)
        if ps is None:
            raise MissingIntentionError(f"{agent} has no plan state at {v}")
        return ps

    def set_plan_state(self, agent: str, plan: PlanState, v: Optional[Vertex] = None) -> "Model":
        m = self.with_ensemble(self.ensembles[agent])
        m._plans = dict(self._plans)
        old = self._plans.get(agent) or VertexMap()
        vm = VertexMap(old.default, dict(old.overrides))
        if v is None:
            vm = VertexMap(plan)
        else:
            vm.overrides[v] = plan
        m._plans[agent] = vm
        return m

    def nested_subjects(self, holder: str) -> tuple:
        return tuple(sorted(self.raw.get("nested_plan_states", {}).get(holder, {})))

    def nested_plan_state(self, holder: str, subject: str, v: Vertex) -> PlanState:
        """``S_A^B(H^t)``."""
        key = (holder, subject)
        if key not in self._nested:
            spec = self.raw.get("nested_plan_states", {}).get(holder, {}).get(subject)
            if spec is None:
                raise MissingIntentionError(f"{holder} has no plan state about {subject}")
            self._nested[key] = self._vertex_map(
                subject, spec, f"/nested_plan_states/{holder}/{subject}")
        ps = self._nested[key].get(v)
        if ps is None:
            raise MissingIntentionError(f"{holder} has no plan state about {subject} at {v}")
        return ps

    # probabilities and utilities ------------------------------------------

    def _history_map(self, table, where, default=0.0) -> list:
        out = [float(table.get("*", default))] * len(self.universe)
        for key, val in table.items():
            if key == "*":
                continue
            try:
                out[self.universe.history(key).index] = float(val)
            except ModelReferenceError:
                raise ModelReferenceError(f"{where}/{key}: unknown history") from None
        return out

    @cached_property
    def prior(self) -> list:
        """Probability per history index; uniform when undeclared."""
        spec = self.raw.get("prior", "uniform")
        n = len(self.universe)
        if spec == "uniform":
            return [1.0 / n] * n
        p = self._history_map(spec, "/prior")
        if any(x < 0 for x in p):
            raise SchemaError("prior has a negative probability", "/prior")
        if abs(math.fsum(p) - 1.0) > TOL:
            raise SchemaError(f"prior sums to {math.fsum(p)!r}, not 1", "/prior")
        return p

    def utility(self, agent: str) -> list:
        """U_A per history index; 0 where undeclared."""
        if agent not in self._utils:
            table = self.raw.get("utilities", {}).get(self.agent(agent), {})
            self._utils[agent] = self._history_map(table, f"/utilities/{agent}")
        return self._utils[agent]

    def profile(self, agent: str) -> dict:
        return self.raw.get("pragmatics_profiles", {}).get(agent, {})

    # validation -------------------------------------------------------------

    def report(self) -> dict:
        """Every information-condition verdict plus strategy-space sizes."""
        agents = {}
        warnings = []
        cap = strategy_cap()
        for a in self.agents:
            ens = self.ensembles[a]
            space = self.space(a)
            if space.size > cap:
                warnings.append(f"{a} has {space.size} strategies, above the cap of {cap}")
            agents[a] = {
                "cells": len(ens),
                "straight_cells": sum(is_straight(c) for c in ens.cells),
                "slanted_cells": sum(not is_straight(c) for c in ens.cells),
                "thin": True,
                "ndi": has_ndi(ens),
                "perfect_information": has_perfect_info(ens),
                "relation_backwards_consistent": relation_backwards_consistent(ens),
                "relation_backwards_identical": relation_backwards_identical(ens),
                "acting_cells": len(space.alts),
                "strategies": space.size,
            }
        return {
            "model": self.name,
            "histories": len(self.universe),
            "vertices": len(self.universe.vertices),
            "t_max": self.universe.axis.t_max,
            "agents": agents,
            "warnings": warnings,
        }


# loading ----------------------------------------------------------------------


def _ensemble(universe, agent, spec, where) -> InfoEnsemble:
    try:
        if spec == "perfect":
            return perfect_ensemble(universe, agent)
        if isinstance(spec, dict):
            return observation_ensemble(universe, agent, spec["observe"], spec.get("recall", True))
        return ensemble_from_cells(universe, agent, spec)
    except PartitionViolationError as e:
        raise PartitionViolationError(f"{where}: {e}", vertex=e.vertex) from None
    except ModelReferenceError as e:
        raise ModelReferenceError(f"{where}: {e}") from None


def from_dict(data: dict, name: str = "") -> Model:
    schema.validate(data)
    props = data.get("propositions")
    states = []
    seen = set()
    for i, raw in enumerate(data["states"]):
        sid = raw["id"]
        if sid in seen:
            raise SchemaError(f"duplicate state id {sid!r}", f"/states/{i}/id")
        seen.add(sid)
        labels = frozenset(raw.get("labels", ()))
        if props is not None and not labels <= set(props):
            raise SchemaError(f"labels {sorted(labels - set(props))} not declared as propositions",
                              f"/states/{i}/labels")
        states.append(WorldState(sid, labels))
    if props is None:
        props = sorted({p for s in states for p in s.labels})
    agents = data["agents"]
    if WORLD in agents:
        raise SchemaError(f"{WORLD!r} is reserved for nature", "/agents")

    trees = {}
    for sid, raw in data.get("trees", {}).items():
        if sid not in seen:
            raise ModelReferenceError(f"/trees/{sid}: undeclared state")
        tree = parse_tree(sid, raw)
        for owner in tree.owners:
            if owner != WORLD and owner not in agents:
                raise ModelReferenceError(f"/trees/{sid}: undeclared agent {owner!r}")
        trees[sid] = tree
    universe = build_universe(states, trees, data["initial"], data["t_max"], props)

    ens_spec = data.get("ensembles", {})
    for a in ens_spec:
        if a not in agents:
            raise ModelReferenceError(f"/ensembles/{a}: undeclared agent")
    ensembles = {a: _ensemble(universe, a, ens_spec.get(a, "perfect"), f"/ensembles/{a}")
                 for a in agents}
    model = Model(universe, trees, agents, ensembles, data, name or data.get("name", ""))

    for section in ("repertoires", "plan_states", "utilities", "pragmatics_profiles"):
        for a in data.get(section, {}):
            if a not in agents:
                raise ModelReferenceError(f"/{section}/{a}: undeclared agent")
    for holder, subjects in data.get("nested_plan_states", {}).items():
        for b in [holder, *subjects]:
            if b not in agents:
                raise ModelReferenceError(f"/nested_plan_states/{holder}: undeclared agent {b!r}")
    try:
        for a in agents:
            model.space(a)
    except IllFormedEnsembleError as e:
        raise IllFormedEnsembleError(f"/ensembles: {e}") from None
    # resolve declared attitudes eagerly so reference errors surface at load
    cap = strategy_cap()
    for a in agents:
        if model.space(a).size > cap:
            continue
        if a in data.get("repertoires", {}):
            model.repertoire(a)
        if a in data.get("plan_states", {}):
            try:
                model.plan_state(a, universe.vertices[0])
            except MissingIntentionError:
                pass
        for b in data.get("nested_plan_states", {}).get(a, {}):
            if model.space(b).size <= cap:
                try:
                    model.nested_plan_state(a, b, universe.vertices[0])
                except MissingIntentionError:
                    pass
    model.prior
    for a in data.get("utilities", {}):
        model.utility(a)
    return model


def load(path) -> Model:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise SchemaError(f"not valid JSON: {e.msg} (line {e.lineno})") from None
    except OSError as e:
        raise StratosError(f"cannot read {path}: {e.strerror}") from None
    return from_dict(data, data.get("name", path.stem) if isinstance(data, dict) else path.stem)
