"""Seeded random desk-scale models for property tests.

A model has at most four states, ``t_max`` at most three, one or two agents
plus nature, and uniform choice structure: every tree has the same shape
for a given agent, only the leaf placement varies. Ensembles are drawn from
perfect, observation-with-recall, observation-without-recall and random
thin partitions, so every information condition occurs in the corpus.
"""

from __future__ import annotations

import random
from typing import Optional

from .errors import IllFormedEnsembleError
from .model import Model, from_dict

PROPS = ("p", "q", "r")
ENSEMBLE_KINDS = ("perfect", "recall", "forget", "random")


def _random_partition(rng: random.Random, vertices_by_cut) -> list:
    """Random cells, one cut each, so every cell is thin."""
    cells = []
    for cut, verts in enumerate(vertices_by_cut):
        verts = list(verts)
        rng.shuffle(verts)
        k = rng.randint(1, len(verts))
        groups = [[] for _ in range(k)]
        for i, v in enumerate(verts):
            groups[i % k if i < k else rng.randrange(k)].append(v)
        cells += [sorted(g) for g in groups]
    return cells


def _prefixes(states, succ, initial, t_max):
    out = [[(s,) for s in initial]]
    for _ in range(t_max):
        out.append(sorted({p + (n,) for p in out[-1] for n in succ[p[-1]]}))
    return out


def random_model_dict(seed: int, max_states: int = 4, max_t: int = 3,
                      kinds: Optional[tuple] = None) -> dict:
    rng = random.Random(seed)
    n_states = rng.randint(1, max_states)
    t_max = rng.randint(1, max_t)
    agents = ["a", "b"][: rng.randint(1, 2)]
    props = list(PROPS[: rng.randint(1, len(PROPS))])
    states = [f"s{i}" for i in range(n_states)]
    labels = {s: sorted(p for p in props if rng.random() < 0.5) for s in states}

    # one fixed shape per agent: a choice point with 1..2 moves, nature last
    shape = [(a, [f"m{i}" for i in range(rng.randint(1, 2))]) for a in agents]
    shape.append(("world", [f"w{i}" for i in range(rng.randint(1, 2))]))
    simultaneous = rng.random() < 0.5

    def build(level, path):
        if level == len(shape):
            return rng.choice(states)
        agent, moves = shape[level]
        node = {"agent": agent, "moves": {m: build(level + 1, path + (m,)) for m in moves}}
        if simultaneous:
            node["point"] = agent  # same point everywhere: later movers do not see earlier ones
        else:
            node["point"] = agent + "".join(path)
        return node

    trees = {}
    for s in states:
        if rng.random() < 0.15:
            continue  # absorbing
        trees[s] = build(0, ())

    def leaves(node):
        if isinstance(node, str):
            return {node}
        return set().union(*(leaves(c) for c in node["moves"].values()))

    succ = {s: sorted(leaves(trees[s])) if s in trees else [s] for s in states}
    initial = sorted(rng.sample(states, rng.randint(1, min(2, n_states))))
    by_cut = _prefixes(states, succ, initial, t_max)

    ensembles = {}
    kinds = kinds or ENSEMBLE_KINDS
    for a in agents:
        kind = rng.choice(kinds)
        if kind == "perfect":
            ensembles[a] = "perfect"
        elif kind in ("recall", "forget"):
            observed = sorted(p for p in props if rng.random() < 0.5)
            ensembles[a] = {"observe": observed, "recall": kind == "recall"}
        else:
            ensembles[a] = [[">".join(v) for v in cell]
                            for cell in _random_partition(rng, by_cut)]

    data = {
        "schema_version": "1",
        "name": f"random-{seed}",
        "t_max": t_max,
        "propositions": props,
        "agents": agents,
        "states": [{"id": s, "labels": labels[s]} for s in states],
        "initial": initial,
        "trees": trees,
        "ensembles": ensembles,
    }
    histories = [">".join(p) for p in by_cut[-1]]
    data["utilities"] = {a: {h: rng.randint(-3, 3) for h in histories} for a in agents}
    return data


def _subset(rng, items, within=None):
    items = sorted(items if within is None else within)
    k = rng.randint(1, len(items))
    return sorted(rng.sample(items, k))


def _attitudes(rng: random.Random, data: dict, model: Model) -> dict:
    """Repertoires, plan states inside them, nested plan states and a prior."""
    data = dict(data)
    reps, plans, nested = {}, {}, {}
    for a in model.agents:
        space = model.space(a)
        delta = _subset(rng, space.strategies())
        plan = _subset(rng, delta)
        reps[a] = [space.describe(pi) for pi in delta]
        plans[a] = [space.describe(pi) for pi in plan]
    for a in model.agents:
        nested[a] = {}
        for b in model.agents:
            if b != a:
                space = model.space(b)
                nested[a][b] = [space.describe(pi) for pi in _subset(rng, space.strategies())]
    data["repertoires"] = reps
    data["plan_states"] = plans
    data["nested_plan_states"] = nested
    weights = [rng.randint(1, 5) for _ in model.universe]
    total = sum(weights)
    prior = {h.id: w / total for h, w in zip(model.universe, weights)}
    # absorb rounding into the last entry so the sum is 1 within tolerance
    last = model.universe.histories[-1].id
    prior[last] = 1.0 - sum(v for k, v in prior.items() if k != last)
    data["prior"] = prior
    return data


def random_model(seed: int, max_strategies: Optional[int] = None, attitudes: bool = False,
                 **kw) -> Model:
    """Random model for ``seed``.

    Draws whose ensembles break choice uniformity, or whose strategy spaces
    exceed ``max_strategies`` in total, are redrawn from a derived seed.
    With ``attitudes`` the model also carries repertoires, plan states
    (inside the repertoires), nested plan states and a full-support prior.
    """
    for attempt in range(1000):
        data = random_model_dict(seed * 1000 + attempt, **kw)
        data["name"] = f"random-{seed}"
        try:
            model = from_dict(data)
        except IllFormedEnsembleError:
            continue
        if max_strategies is not None:
            total = 1
            for a in model.agents:
                total *= model.space(a).size
            if total > max_strategies:
                continue
        if attitudes:
            rng = random.Random(f"attitudes-{seed}-{attempt}")
            model = from_dict(_attitudes(rng, data, model))
        return model
    raise RuntimeError(f"no well-formed model for seed {seed}")
