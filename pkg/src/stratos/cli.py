"""Command-line query surface.

Exit codes: 0 the query was answered, 1 a boolean query answered false
under ``--strict``, 2 a usage or model error.
"""

from __future__ import annotations

import argparse
import difflib
import json
import re
import sys
import time
import warnings
from typing import Optional

from . import ability, entropy, intention, pragmatics, strategies
from .errors import StratosError
from .logic.axioms import check_ndi_axioms, check_pi_axioms
from .model import load

VERBS = ("validate", "eval", "valid", "axioms", "can", "plans", "entropy", "simulate", "what-if")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Raises instead of exiting and suggests the closest verb or flag."""

    def error(self, message):
        hint = ""
        m = re.search(r"invalid choice: '([^']*)'", message)
        if m:
            close = difflib.get_close_matches(m.group(1), VERBS + _CHOICES, n=1)
            hint = f" (did you mean {close[0]!r}?)" if close else ""
        flags = {o for a in self._actions for o in a.option_strings}
        for sub in _SUBPARSERS.values():
            flags |= {o for a in sub._actions for o in a.option_strings}
        for tok in _ARGV:
            name = tok.split("=", 1)[0]
            if name.startswith("--") and name not in flags:
                close = difflib.get_close_matches(name, sorted(flags), n=1)
                if close:
                    hint += f" (unknown flag {name!r}; did you mean {close[0]!r}?)"
                    break
        raise UsageError(f"{self.prog}: {message}{hint}")


_SUBPARSERS: dict = {}
_ARGV: list = []
_CHOICES = ("o", "s", "co", "coop", "cocoop", "bool", "pess", "opt", "prob", "xu",
            "state", "control", "conditional", "strategic")


def _common(p):
    p.add_argument("model", help="model file (JSON)")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--strict", action="store_true", help="exit 1 when a boolean answer is false")
    p.add_argument("--timing", action="store_true", help="add elapsed milliseconds to the output")


def _at(p):
    p.add_argument("--at", help="query vertex as s0>s1>..., default the first root")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stratos", description="Query finite multi-agent possible-world models.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        _common(p)
        _SUBPARSERS[name] = p
        return p

    add("validate", "load a model and report every information condition")

    p = add("eval", "truth of a formula at a history and time")
    p.add_argument("formula")
    p.add_argument("--history", required=True)
    p.add_argument("--time", type=int, required=True)

    p = add("valid", "truth at every history and time, with a counterexample")
    p.add_argument("formula")

    p = add("axioms", "bounded instance checks of the information schemata")
    p.add_argument("--kind", choices=("ndi", "pi", "all"), default="all")

    p = add("can", "ability operators")
    p.add_argument("formula")
    who = p.add_mutually_exclusive_group(required=True)
    who.add_argument("--agent")
    who.add_argument("--group", help="comma-separated agents")
    p.add_argument("--form", choices=("o", "s", "co", "coop", "cocoop"), default="o")
    p.add_argument("--mode", choices=("bool", "pess", "opt", "prob", "xu"), default="bool")
    p.add_argument("--other", help="comma-separated agents whose plans are known (co, cocoop)")
    p.add_argument("--space", choices=("pi", "delta"),
                   help="strategy space; default pi for o, delta for the others")
    _at(p)

    p = add("plans", "intention operators")
    p.add_argument("formula")
    p.add_argument("--agent")
    p.add_argument("--group", help="comma-separated agents (group plans)")
    p.add_argument("--kind", choices=("plans", "co", "group", "will", "prob", "util"), default="plans")
    p.add_argument("--subject", help="agent whose plans the holder knows (will)")
    p.add_argument("--other", help="comma-separated agents (co)")
    p.add_argument("--p", type=float, help="probability to test (prob)")
    p.add_argument("--u", type=float, help="utility threshold (util)")
    _at(p)

    p = add("entropy", "state, control, conditional and strategic entropy in bits")
    p.add_argument("--kind", choices=("state", "control", "conditional", "strategic"), required=True)
    p.add_argument("--agent", required=True)
    p.add_argument("--other", help="second agent (conditional)")
    p.add_argument("--strategy", help="JSON pattern naming one strategy (strategic)")
    p.add_argument("--probs", help="JSON object of probabilities keyed by member label")
    _at(p)

    p = add("simulate", "replay a scenario's messages")
    p.add_argument("--scenario", required=True)
    p.add_argument("--lenient", action="store_true", help="ignore rejected messages with a warning")

    p = add("what-if", "futures if an agent adopts a candidate plan")
    p.add_argument("--agent", required=True)
    p.add_argument("--candidate", required=True, help='JSON pattern or list of patterns, or "all"')
    _at(p)
    return parser


# helpers ----------------------------------------------------------------------


def _csv(s) -> list:
    return [x.strip() for x in s.split(",") if x.strip()] if s else []


def _query_point(model, at) -> tuple:
    """``(history id, t, vertex)`` for ``--at``; the first history through it."""
    v = model.universe.vertices[0] if at is None else model.universe.as_vertex(at)
    hist = model.universe.ids(model.universe.ext(v))[0]
    return hist, v.cut, v


def _json_arg(raw, what):
    if raw in ("all", "*"):
        return raw
    try:
        return json.loads(raw)
    except json.JSONDecodeError as e:
        raise UsageError(f"{what} is not valid JSON: {e.msg}") from None


def _bool_result(value: bool, extra: Optional[dict] = None) -> dict:
    out = {"verdict": bool(value)}
    out.update(extra or {})
    return out


# verbs ------------------------------------------------------------------------


def cmd_validate(model, args):
    return {"verdict": True, "report": model.report()}


def cmd_eval(model, args):
    f = model.formula(args.formula)
    h = model.universe.history(args.history)
    return _bool_result(model.evaluator.eval(f, h, args.time),
                        {"formula": str(f), "history": h.id, "time": args.time})


def cmd_valid(model, args):
    f = model.formula(args.formula)
    ok, wit = model.evaluator.valid(f)
    cex = None if ok else {"history": wit[0], "time": wit[1]}
    return _bool_result(ok, {"formula": str(f), "counterexample": cex})


def cmd_axioms(model, args):
    reports = []
    if args.kind in ("ndi", "all"):
        reports += check_ndi_axioms(model.evaluator)
    if args.kind in ("pi", "all"):
        reports += check_pi_axioms(model.evaluator)
    consistent = all(r.valid for r in reports if r.condition_holds)
    return {"verdict": consistent, "schemata": [r.as_dict() for r in reports]}


def cmd_can(model, args):
    hist, t, v = _query_point(model, args.at)
    f = args.formula
    base = {"formula": str(model.formula(f)), "vertex": str(v), "form": args.form, "mode": args.mode}
    group = _csv(args.group) if args.group else [model.agent(args.agent)]
    for a in group:
        model.agent(a)
    other = _csv(args.other) if args.other else None
    space = args.space or ("pi" if args.form == "o" else "delta")
    if args.mode != "bool":
        if len(group) != 1 or args.form not in ("o", "s"):
            raise UsageError("--mode pess/opt/prob/xu applies to a single agent with --form o or s")
        a = group[0]
        if args.form == "s" and not args.space:
            space = "delta"
        if args.mode in ("pess", "opt"):
            u = ability.u_can(model, a, f, hist, t,
                              "pessimistic" if args.mode == "pess" else "optimistic", space)
            return {**base, "value": u, "verdict": u is not None}
        if args.mode == "prob":
            return {**base, "value": ability.p_can(model, a, f, hist, t, space)}
        p, xu = ability.xu_can(model, a, f, hist, t, space)
        return {**base, "value": {"p": p, "xu": xu}}
    if args.form in ("o", "s"):
        if len(group) != 1:
            raise UsageError(f"--form {args.form} takes --agent")
        wit = ability.find_forcing(model, group, f, hist, t, space)
    elif args.form == "co":
        if len(group) != 1:
            raise UsageError("--form co takes --agent")
        ok = ability.co_can(model, group[0], f, hist, t, other, space)
        return {**base, "verdict": ok}
    elif args.form == "coop":
        wit = ability.find_forcing(model, group, f, hist, t, space)
    else:
        if not other:
            raise UsageError("--form cocoop needs --other")
        ok = ability.co_coop_can(model, group, f, hist, t, other, space)
        return {**base, "verdict": ok}
    witness = None
    if wit is not None:
        witness = {pi.agent: model.space(pi.agent).describe(pi) for pi in wit}
    return {**base, "verdict": wit is not None, "witness": witness}


def cmd_plans(model, args):
    hist, t, v = _query_point(model, args.at)
    f = args.formula
    base = {"formula": str(model.formula(f)), "vertex": str(v), "kind": args.kind}
    if args.kind == "group":
        group = _csv(args.group)
        if not group:
            raise UsageError("--kind group needs --group")
        return {**base, "verdict": intention.group_plans(model, group, f, hist, t)}
    if not args.agent:
        raise UsageError(f"--kind {args.kind} needs --agent")
    a = model.agent(args.agent)
    if args.kind == "plans":
        return {**base, "verdict": intention.plans(model, a, f, hist, t)}
    if args.kind == "co":
        return {**base, "verdict": intention.co_plans(model, a, f, hist, t, _csv(args.other) or None)}
    if args.kind == "will":
        if not args.subject:
            raise UsageError("--kind will needs --subject")
        return {**base, "verdict": intention.will(model, a, model.agent(args.subject), f, hist, t)}
    if args.kind == "prob":
        value = intention.plan_probability(model, a, f, hist, t)
        out = {**base, "value": value}
        if args.p is not None:
            out["verdict"] = abs(value - args.p) <= intention.TOL
        return out
    if args.u is None:
        raise UsageError("--kind util needs --u")
    return {**base, "verdict": intention.plans_u(model, a, f, args.u, hist, t)}


def cmd_entropy(model, args):
    hist, t, v = _query_point(model, args.at)
    a = model.agent(args.agent)
    probs = _json_arg(args.probs, "--probs") if args.probs else None
    space = model.space(a)
    out = {"kind": args.kind, "agent": a, "vertex": str(v), "unit": "bits"}
    if args.kind == "state":
        info = model.ensembles[a].cell_of(v)
        labels = {str(m): m for m in info}
        p = None if probs is None else {labels.get(k, k): x for k, x in probs.items()}
        out["support"] = sorted(labels)
        out["value"] = entropy.state_entropy(info, p)
    elif args.kind == "control":
        plan = strategies.plan_state_at_info(model, a, a, model.ensembles[a].cell_of(v))
        labels = {space.label(pi): pi for pi in plan}
        p = None if probs is None else {labels.get(k, k): x for k, x in probs.items()}
        out["support"] = sorted(labels)
        out["value"] = entropy.control_entropy(plan, p)
    elif args.kind == "conditional":
        b = model.agent(args.other) if args.other else None
        if b is None:
            raise UsageError("--kind conditional needs --other")
        sa = strategies.plan_state_at_info(model, a, a, model.ensembles[a].cell_of(v))
        sb = strategies.plan_state_at_info(model, b, b, model.ensembles[b].cell_of(v))
        la = {space.label(pi): pi for pi in sa}
        lb = {model.space(b).label(pi): pi for pi in sb}
        joint = None
        if probs is not None:
            joint = {}
            for k, x in probs.items():
                ka, _, kb = k.partition("|")
                joint[(la.get(ka, ka), lb.get(kb, kb))] = x
        out["other"] = b
        out["value"] = entropy.conditional_control_entropy(list(sa), list(sb), joint)
    else:
        if not args.strategy:
            raise UsageError("--kind strategic needs --strategy")
        matches = space.match(_json_arg(args.strategy, "--strategy"))
        if len(matches) != 1:
            raise UsageError(f"--strategy matches {len(matches)} strategies; name every cell")
        pi = matches[0]
        out["strategy"] = space.describe(pi)
        out["value"] = entropy.strategic_entropy(model, pi, v)
    return out


def cmd_simulate(model, args):
    scen = model.raw.get("scenarios", {}).get(args.scenario)
    if scen is None:
        names = sorted(model.raw.get("scenarios", {}))
        close = difflib.get_close_matches(args.scenario, names, n=1)
        hint = f" (did you mean {close[0]!r}?)" if close else f"; scenarios: {names}"
        raise UsageError(f"no scenario {args.scenario!r}{hint}")
    steps = pragmatics.simulate(model, scen, args.lenient)
    return {"scenario": args.scenario, "plan_sizes": [s["plan_size"] for s in steps], "steps": steps}


def cmd_what_if(model, args):
    hist, t, v = _query_point(model, args.at)
    a = model.agent(args.agent)
    cand = model.space(a).resolve(_json_arg(args.candidate, "--candidate"))
    pot = strategies.what_if(model, a, cand, v)
    return {"agent": a, "vertex": str(v), "candidate": sorted(model.space(a).label(pi) for pi in cand),
            "histories": model.universe.ids(pot)}


COMMANDS = {
    "validate": cmd_validate, "eval": cmd_eval, "valid": cmd_valid, "axioms": cmd_axioms,
    "can": cmd_can, "plans": cmd_plans, "entropy": cmd_entropy, "simulate": cmd_simulate,
    "what-if": cmd_what_if,
}


# output -----------------------------------------------------------------------


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list) and any(isinstance(x, (dict, list)) for x in obj):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj


def render(result: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(result, indent=2, ensure_ascii=False)
    rows = list(_flatten(result))
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k.ljust(width)}  {json.dumps(v, ensure_ascii=False)}" for k, v in rows)


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    _ARGV[:] = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(str(e), file=err)
        return 2
    except SystemExit as e:  # --help
        return int(e.code or 0)
    start = time.perf_counter()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            model = load(args.model)
            body = COMMANDS[args.verb](model, args)
        except (UsageError, StratosError) as e:
            kind = "usage" if isinstance(e, UsageError) else type(e).__name__
            result = {"command": args.verb, "error": {"type": kind, "message": str(e)}}
            print(render(result, args.format), file=out)
            return 2
    result = {"command": args.verb, "model": model.name, **body,
              "warnings": [str(w.message) for w in caught]}
    if args.timing:
        result["timing_ms"] = round((time.perf_counter() - start) * 1000, 3)
    print(render(result, args.format), file=out)
    if args.strict and result.get("verdict") is False:
        return 1
    return 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
