"""Shannon entropies of information sets, plan states and strategies, in bits."""

from __future__ import annotations

import math
from typing import Hashable, Iterable, Mapping, Optional

from .errors import DomainError
from .world import iter_bits

TOL = 1e-9


def entropy(weights: Iterable[float]) -> float:
    """``-sum p log2 p`` with ``0 log 0 = 0``."""
    h = -math.fsum(p * math.log2(p) for p in weights if p > 0)
    return h + 0.0  # normalize -0.0


def distribution(support: Iterable[Hashable], p: Optional[Mapping] = None) -> dict:
    """Validate ``p`` against ``support``; uniform when ``p`` is ``None``."""
    keys = list(dict.fromkeys(support))
    if not keys:
        raise DomainError("empty support")
    if p is None:
        return {k: 1.0 / len(keys) for k in keys}
    if set(p) != set(keys):
        extra = sorted(map(str, set(p) - set(keys)))
        missing = sorted(map(str, set(keys) - set(p)))
        raise DomainError(f"support mismatch: extra {extra}, missing {missing}")
    if any(p[k] < 0 for k in keys):
        raise DomainError("negative probability")
    total = math.fsum(p[k] for k in keys)
    if abs(total - 1.0) > TOL:
        raise DomainError(f"probabilities sum to {total!r}, not 1")
    return {k: float(p[k]) for k in keys}


def state_entropy(info, p: Optional[Mapping] = None) -> float:
    """Entropy over the members of an information set (uniform: ``log2 |I|``)."""
    return entropy(distribution(info, p).values())


def control_entropy(plan, p: Optional[Mapping] = None) -> float:
    return entropy(distribution(plan, p).values())


def conditional_control_entropy(s_a, s_b, joint: Optional[Mapping] = None) -> float:
    """``H_{S_A}(S_B) = sum_pi p(pi) H(S_B | pi)`` from a joint over pairs.

    Terms with zero marginal are skipped.
    """
    s_a, s_b = list(dict.fromkeys(s_a)), list(dict.fromkeys(s_b))
    joint = distribution([(a, b) for a in s_a for b in s_b], joint)
    out = []
    for a in s_a:
        row = [joint[(a, b)] for b in s_b]
        m = math.fsum(row)
        if m > 0:
            out.append(m * entropy(x / m for x in row))
    return math.fsum(out)


def strategic_entropy(model, pi, vertex=None, prior: Optional[list] = None) -> float:
    """Entropy of the prior renormalized over ``pi*``."""
    pot = model.space(pi.agent).potential(pi, vertex)
    p = model.prior if prior is None else prior
    mass = [p[i] for i in iter_bits(pot)]
    total = math.fsum(mass)
    if total <= 0:
        raise DomainError("strategy potential has zero prior mass")
    return entropy(m / total for m in mass)
