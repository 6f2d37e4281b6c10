"""Intention operators over plan states.

The histories an agent's plans allow at ``H^t`` are the futures, from every
vertex of its information set ``I_A(H^t)``, of every strategy in its plan
state there. ``alpha`` is evaluated at the query time ``t`` on each.
"""

from __future__ import annotations

import math
import warnings
from typing import Iterable, Optional

from .errors import EmptyDomainWarning, UndefinedConditionalError
from .strategies import info_potential, nested_group_potential, plan_state_at_info

TOL = 1e-9


def _info(model, agent, history, t):
    return model.ensembles[agent].cell_of(model.universe.vertex(history, t))


def plan_domain(model, agent, history, t) -> int:
    info = _info(model, agent, history, t)
    return info_potential(model, plan_state_at_info(model, agent, agent, info), info)


def _holds(model, dom, alpha, t, what) -> bool:
    if not dom:
        warnings.warn(f"{what}: planned potential is empty, claim holds vacuously",
                      EmptyDomainWarning, stacklevel=3)
    return dom & ~model.sat(alpha, t) == 0


def plans(model, agent, alpha, history, t) -> bool:
    return _holds(model, plan_domain(model, agent, history, t), alpha, t, f"plans of {agent}")


def co_plans(model, agent, alpha, history, t, group: Optional[Iterable[str]] = None) -> bool:
    """Plans, narrowed by what ``agent`` knows of ``group``'s plans."""
    group = model.nested_subjects(agent) if group is None else group
    info = _info(model, agent, history, t)
    dom = plan_domain(model, agent, history, t) & nested_group_potential(model, agent, group, info)
    return _holds(model, dom, alpha, t, f"co-plans of {agent}")


def group_plans(model, group, alpha, history, t) -> bool:
    dom = model.universe.all
    for a in sorted(group):
        dom &= plan_domain(model, a, history, t)
    return _holds(model, dom, alpha, t, f"group plans of {sorted(group)}")


def will(model, holder, subject, alpha, history, t) -> bool:
    """From ``holder``'s knowledge of ``subject``'s plans, ``alpha`` results."""
    info = _info(model, holder, history, t)
    dom = info_potential(model, plan_state_at_info(model, holder, subject, info), info)
    return _holds(model, dom, alpha, t, f"{holder} on {subject}")


def plan_probability(model, agent, alpha, history, t) -> float:
    """Prior mass of ``alpha`` within the planned potential, renormalized."""
    dom = plan_domain(model, agent, history, t)
    good = dom & model.sat(alpha, t)
    p = model.prior
    mass = math.fsum(p[i] for i in range(len(p)) if dom >> i & 1)
    if mass <= 0:
        raise UndefinedConditionalError(f"plans of {agent} have zero prior mass")
    return math.fsum(p[i] for i in range(len(p)) if good >> i & 1) / mass


def plans_p(model, agent, alpha, p: float, history, t) -> bool:
    return abs(plan_probability(model, agent, alpha, history, t) - p) <= TOL


def plans_u(model, agent, alpha, u: float, history, t) -> bool:
    """Every planned history worth at least ``u`` to ``agent`` satisfies ``alpha``."""
    dom = plan_domain(model, agent, history, t)
    sat = model.sat(alpha, t)
    util = model.utility(agent)
    return all(sat >> i & 1 for i in range(len(util)) if dom >> i & 1 and util[i] >= u)
