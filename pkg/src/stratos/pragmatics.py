"""Representational states and the pragmatic operators of messages.

An assertion filters the addressee's information set and splits its cell
in the knowledge ensemble; a directive filters its plan state to the
strategies that force the goal; an evaluative message adds a utility delta.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional, Sequence

from .errors import RejectedDirectiveError, RejectedMessageError, SchemaError
from .information import InfoSet
from .strategies import PlanState

FORCES = ("assertive", "directive", "evaluative")
FOCUS = {"assertive": "info", "directive": "plan", "evaluative": "values"}


@dataclass(frozen=True)
class RepresentationalState:
    agent: str
    info: InfoSet
    plan: PlanState
    values: tuple  # utility per history index

    def __post_init__(self):
        if not len(self.info):
            raise SchemaError("information set is empty")
        if self.plan.agent != self.agent:
            raise SchemaError("plan state belongs to another agent")


@dataclass(frozen=True)
class Message:
    force: Optional[str] = None
    content: object = None  # formula text, or {history id: delta}
    speaker: str = ""
    addressee: str = ""
    token: Optional[str] = None
    record_receipt: bool = False

    def __post_init__(self):
        if self.force is not None and self.force not in FORCES:
            raise SchemaError(f"unknown force {self.force!r}")
        if self.force == "evaluative" and not isinstance(self.content, Mapping):
            raise SchemaError("evaluative content must map histories to utility deltas")
        if self.force in ("assertive", "directive") and not isinstance(self.content, str):
            raise SchemaError(f"{self.force} content must be a formula")

    @classmethod
    def from_dict(cls, raw: dict) -> "Message":
        return cls(raw.get("force"), raw.get("content"), raw.get("speaker", ""),
                   raw.get("addressee", ""), raw.get("token"), raw.get("record_receipt", False))

    @property
    def label(self) -> str:
        return self.token or (self.content if isinstance(self.content, str) else self.force)


@dataclass
class ChangeReport:
    force: str
    primary: str
    changed: list
    secondary: list = field(default_factory=list)
    sizes: dict = field(default_factory=dict)
    rejected: bool = False

    def as_dict(self) -> dict:
        return {"force": self.force, "primary": self.primary, "changed": self.changed,
                "secondary": self.secondary, "sizes": self.sizes, "rejected": self.rejected}


@dataclass
class PragResult:
    state: RepresentationalState
    report: ChangeReport
    model: object


def initial_state(model, agent, vertex, plan=None) -> RepresentationalState:
    v = model.universe.as_vertex(vertex)
    info = model.ensembles[agent].cell_of(v)
    if plan is None:
        plan = PlanState(agent, frozenset(model.space(agent).strategies()))
    elif not isinstance(plan, PlanState):
        plan = PlanState(agent, frozenset(model.space(agent).resolve(plan)))
    return RepresentationalState(agent, info, plan, tuple(model.utility(agent)))


def interpret(model, m: Message, agent: str) -> Message:
    """Read ``m`` through ``agent``'s pragmatics profile.

    The lookup key is the token or, failing that, the content text; a miss
    leaves an explicit message unchanged.
    """
    profile = model.profile(agent)
    key = m.token if m.token is not None else (m.content if isinstance(m.content, str) else None)
    if key is not None and key in profile:
        entry = profile[key]
        return replace(m, force=entry["force"], content=entry["content"], token=m.token)
    if m.force is None:
        raise RejectedMessageError(f"{agent} cannot interpret {key!r}")
    return m


def _sizes(r: RepresentationalState) -> dict:
    return {"info": len(r.info), "plan": len(r.plan)}


def _forces_from_info(model, pi, info, alpha) -> bool:
    space = model.space(pi.agent)
    f = model.formula(alpha)
    sat = model.evaluator.sat(f)
    return all(space.potential(pi, v) & ~sat[v.cut] == 0 for v in info)


def prag_apply(model, r: RepresentationalState, m: Message, lenient: bool = False) -> PragResult:
    return _apply_read(model, r, interpret(model, m, r.agent), lenient)


def _apply_read(model, r, m, lenient=False) -> PragResult:
    """Apply a message whose force and content are already fixed."""
    report = ChangeReport(m.force, FOCUS[m.force], [])
    try:
        new = _apply(model, r, m)
    except RejectedMessageError as e:
        if not lenient:
            raise
        warnings.warn(f"message ignored: {e}", UserWarning, stacklevel=2)
        report.rejected = True
        report.sizes = _sizes(r)
        return PragResult(r, report, model)
    if new.info != r.info:
        report.changed.append("info")
    if new.plan != r.plan:
        report.changed.append("plan")
    if new.values != r.values:
        report.changed.append("values")
    if m.force == "directive" and m.record_receipt:
        report.secondary.append("info")
    report.sizes = _sizes(new)
    out_model = model
    if new.info != r.info:
        ens = model.ensembles[r.agent]
        # split every cell the old information set touches
        for cell in {ens.cell_of(v) for v in r.info}:
            ens = ens.split(cell, new.info.members)
        out_model = model.with_ensemble(ens)
        cell = ens.cell_of(min(new.info.members, key=str))
        if cell.members == new.info.members:
            new = replace(new, info=cell)
    return PragResult(new, report, out_model)


def _apply(model, r, m) -> RepresentationalState:
    if m.force == "assertive":
        sat = model.evaluator.sat(model.formula(m.content))
        keep = frozenset(v for v in r.info if model.universe.ext(v) & sat[v.cut])
        if not keep:
            raise RejectedMessageError(f"{m.label!r} contradicts everything {r.agent} thinks possible")
        if keep == r.info.members:
            return r
        return replace(r, info=InfoSet(keep, r.info.name + "+"))
    if m.force == "directive":
        keep = frozenset(pi for pi in r.plan.strategies
                         if _forces_from_info(model, pi, r.info, m.content))
        if not keep:
            raise RejectedDirectiveError(f"{r.agent} has no strategy that brings about {m.label!r}")
        return replace(r, plan=PlanState(r.agent, keep))
    vals = list(r.values)
    for key, delta in m.content.items():
        if key == "*":
            vals = [x + delta for x in vals]
        else:
            vals[model.universe.history(key).index] += delta
    return replace(r, values=tuple(vals))


def force_of(model, m: Message, r: Optional[RepresentationalState] = None,
             agent: Optional[str] = None) -> dict:
    """Declared force, primary focus and, given ``r``, the components that change."""
    who = r.agent if r is not None else (agent or m.addressee)
    if who:
        m = interpret(model, m, who)
    out = {"force": m.force, "primary": FOCUS[m.force],
           "secondary": ["info"] if m.force == "directive" and m.record_receipt else []}
    if r is not None:
        out["focus"] = prag_apply(model, r, m).report.changed
    return out


def apply_sequence(model, r: RepresentationalState, messages: Sequence[Message],
                   lenient: bool = False) -> PragResult:
    """Apply a written chain ``m1 m2 ... mk R``: ``mk`` first, ``m1`` last."""
    res = PragResult(r, ChangeReport("none", "none", []), model)
    for i in reversed(range(len(messages))):
        try:
            res = prag_apply(res.model, res.state, messages[i], lenient)
        except RejectedMessageError as e:
            cls = type(e)
            raise cls(f"message {i}: {e}", index=i) from None
    return res


def prag_divergence(model, agent_a: str, agent_b: str, m: Message,
                    r: RepresentationalState) -> bool:
    """Do the two agents' profiles make ``m`` act differently on ``r``?"""
    def under(agent):
        try:
            return _apply_read(model, r, interpret(model, m, agent)).state
        except RejectedMessageError as e:
            return type(e).__name__
    return under(agent_a) != under(agent_b)


def simulate(model, scenario: dict, lenient: bool = False) -> list:
    """Replay a scenario's messages in order; one dump per step, step 0 initial."""
    agent = scenario["agent"]
    r = initial_state(model, agent, scenario["vertex"], scenario.get("plan"))
    steps = [_dump(model, r, None, None)]
    for i, raw in enumerate(scenario["messages"]):
        m = Message.from_dict(raw)
        try:
            res = prag_apply(model, r, m, lenient)
        except RejectedMessageError as e:
            raise type(e)(f"message {i}: {e}", index=i) from None
        model, r = res.model, res.state
        steps.append(_dump(model, r, m, res.report))
    return steps


def _dump(model, r, m, report) -> dict:
    space = model.space(r.agent)
    return {
        "message": None if m is None else m.label,
        "report": None if report is None else report.as_dict(),
        "info": sorted(str(v) for v in r.info),
        "plan": sorted(space.label(pi) for pi in r.plan),
        "plan_size": len(r.plan),
        "values": {h.id: r.values[h.index] for h in model.universe},
    }
