"""Independent reference implementations used as test oracles.

Nothing here calls the package's bitset evaluator, masks or kernels: truth
is computed by direct recursion over histories, outcomes by enumerating
joint choices, and ability by brute force over strategy tuples.
"""

import itertools
import math

from stratos.actions import absorbing_tree, joint_choices
from stratos.logic.formula import (And, At, Atom, Box, Const, Diamond, Future, Implies,
                                   Not, Or, Past)


def relation(model, agent, h, t):
    """Histories K with K in I(H^t)*, by scanning every vertex of the cell."""
    u = model.universe
    ens = model.ensembles[agent]
    cell = ens.cell_of(u.vertex(h, t))
    out = set()
    for k in u:
        for v in cell.members:
            if k.trajectory[: v.cut + 1] == v.prefix:
                out.add(k.index)
    return out


def truth(model, f, h, t):
    u = model.universe
    h = u.history(h)
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Atom):
        return f.name in u.states[h.trajectory[t]].labels
    if isinstance(f, Not):
        return not truth(model, f.sub, h, t)
    if isinstance(f, And):
        return truth(model, f.left, h, t) and truth(model, f.right, h, t)
    if isinstance(f, Or):
        return truth(model, f.left, h, t) or truth(model, f.right, h, t)
    if isinstance(f, Implies):
        return (not truth(model, f.left, h, t)) or truth(model, f.right, h, t)
    if isinstance(f, Past):
        return any(truth(model, f.sub, h, s) for s in range(t))
    if isinstance(f, Future):
        return any(truth(model, f.sub, h, s) for s in range(t + 1, u.axis.t_max + 1))
    if isinstance(f, At):
        return truth(model, f.sub, h, f.time)
    if isinstance(f, (Box, Diamond)):
        slice_t = t if f.time is None else f.time
        ks = relation(model, f.agent, h, slice_t)
        vals = [truth(model, f.sub, u.histories[k], t) for k in ks]
        return all(vals) if isinstance(f, Box) else any(vals)
    raise TypeError(f)


def outcomes(model, state, agent, selection):
    tree = model.trees.get(state) or absorbing_tree(state)
    out = set()
    for joint in joint_choices(tree):
        if agent in joint and joint[agent].selection != selection:
            continue
        out.add(tree.next_state(joint))
    return out


def future_potential(model, pi, vertex=None):
    """Histories through ``vertex`` following ``pi`` at every step from its cut."""
    u = model.universe
    space = model.space(pi.agent)
    ens = model.base_ensembles[pi.agent]
    start = 0 if vertex is None else vertex.cut
    out = set()
    for h in u:
        if vertex is not None and h.trajectory[: vertex.cut + 1] != vertex.prefix:
            continue
        ok = True
        for t in range(start, u.axis.t_max):
            cell = ens.cell_of(u.vertex(h, t))
            alt = space.alternative(pi, cell)
            if h.trajectory[t + 1] not in outcomes(model, h.trajectory[t], pi.agent, alt.selection):
                ok = False
                break
        if ok:
            out.add(h.index)
    return out


def bits(s):
    return sum(1 << i for i in s)


def sat_set(model, f, t):
    return {h.index for h in model.universe if truth(model, f, h, t)}


def brute_can(model, agents, f, h, t, space="pi", restrict=None):
    u = model.universe
    v = u.vertex(h, t)
    f = model.formula(f)
    good = sat_set(model, f, t)
    per_agent = []
    for a in agents:
        if space == "pi":
            per_agent.append(list(model.space(a).strategies()))
        else:
            per_agent.append(sorted(model.repertoire(a)))
    for combo in itertools.product(*per_agent):
        dom = set.intersection(*[future_potential(model, pi, v) for pi in combo]) if combo else \
            {k.index for k in u if k.trajectory[: t + 1] == v.prefix}
        if restrict is not None:
            dom &= restrict
        if dom <= good:
            return True
    return False


def brute_stats(model, agent, f, h, t, weights, utils):
    """Per-strategy (forcing, mass, good mass, min U, max U, sum wU)."""
    u = model.universe
    v = u.vertex(h, t)
    good = sat_set(model, model.formula(f), t)
    out = []
    for pi in model.space(agent).strategies():
        pot = future_potential(model, pi, v)
        out.append((pot <= good,
                    math.fsum(weights[i] for i in pot),
                    math.fsum(weights[i] for i in pot & good),
                    min(utils[i] for i in pot),
                    max(utils[i] for i in pot),
                    math.fsum(weights[i] * utils[i] for i in pot)))
    return out


def formulas(props, agents, t_max, depth=3):
    """Hypothesis strategy for formulas over the given vocabulary."""
    from hypothesis import strategies as st

    leaf = st.one_of(st.sampled_from([Atom(p) for p in props]),
                     st.sampled_from([Const(True), Const(False)]))
    times = st.integers(0, t_max)

    def grow(sub):
        ops = [sub.map(Not), sub.map(Past), sub.map(Future),
               st.builds(And, sub, sub), st.builds(Or, sub, sub), st.builds(Implies, sub, sub),
               st.builds(At, sub, times)]
        if agents:
            ags = st.sampled_from(sorted(agents))
            when = st.one_of(st.none(), times)
            ops += [st.builds(Box, ags, sub, when), st.builds(Diamond, ags, sub, when)]
        return st.one_of(*ops)

    return st.recursive(leaf, grow, max_leaves=2 ** depth)
