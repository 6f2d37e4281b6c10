"""Pure-Python strategy-product kernels over int bitsets.

A search space is a list of *factors*; each factor is a list of option
bitsets. A combination picks one option per factor and its potential is
``base & AND(chosen options)``. Combinations are visited in lexicographic
order of option indices, last factor fastest.
"""

from __future__ import annotations

import math


def first_forcing(factors, base: int, good: int):
    """Index tuple of the first combination whose potential lies inside ``good``.

    Returns ``None`` when no combination forces. A prefix whose partial
    potential already lies inside ``good`` is completed with zeros, which is
    the lexicographically first completion.
    """
    n = len(factors)
    bad = ~good
    if any(len(f) == 0 for f in factors):
        return None
    idx = [0] * n
    partial = [0] * (n + 1)
    partial[0] = base
    depth = 0
    while True:
        if partial[depth] & bad == 0:
            return tuple(idx[:depth]) + (0,) * (n - depth)
        if depth == n:
            # backtrack
            depth -= 1
            while depth >= 0:
                idx[depth] += 1
                if idx[depth] < len(factors[depth]):
                    break
                idx[depth] = 0
                depth -= 1
            if depth < 0:
                return None
        partial[depth + 1] = partial[depth] & factors[depth][idx[depth]]
        depth += 1


def _next(idx, factors):
    i = len(idx) - 1
    while i >= 0:
        idx[i] += 1
        if idx[i] < len(factors[i]):
            return i
        idx[i] = 0
        i -= 1
    return -1


def scan(factors, base: int, good: int, weights, utils):
    """Per-combination statistics in lexicographic order.

    Returns a dict of lists: ``forcing`` (potential inside ``good``),
    ``mass`` and ``good_mass`` (sum of ``weights`` over the potential and
    over its ``good`` part), ``umin``/``umax`` (extremes of ``utils`` over
    the potential, NaN if empty) and ``usum`` (weight-times-utility sum).
    """
    total = math.prod(len(f) for f in factors)
    out = {k: [] for k in ("forcing", "mass", "good_mass", "umin", "umax", "usum")}
    if total == 0:
        return out
    n = len(factors)
    idx = [0] * n
    partial = [0] * (n + 1)
    partial[0] = base
    start = 0
    while True:
        for d in range(start, n):
            partial[d + 1] = partial[d] & factors[d][idx[d]]
        pot = partial[n]
        mass = gmass = usum = 0.0
        umin, umax = math.inf, -math.inf
        bits = pot
        while bits:
            low = bits & -bits
            i = low.bit_length() - 1
            bits ^= low
            w = weights[i]
            u = utils[i]
            mass += w
            usum += w * u
            if good >> i & 1:
                gmass += w
            if u < umin:
                umin = u
            if u > umax:
                umax = u
        if not pot:
            umin = umax = math.nan
        out["forcing"].append(pot & ~good == 0)
        out["mass"].append(mass)
        out["good_mass"].append(gmass)
        out["umin"].append(umin)
        out["umax"].append(umax)
        out["usum"].append(usum)
        start = _next(idx, factors)
        if start < 0:
            return out


def potentials(factors, base: int):
    """All combination potentials, lexicographic order."""
    out = []
    if any(len(f) == 0 for f in factors):
        return out
    n = len(factors)
    idx = [0] * n
    partial = [0] * (n + 1)
    partial[0] = base
    start = 0
    while True:
        for d in range(start, n):
            partial[d + 1] = partial[d] & factors[d][idx[d]]
        out.append(partial[n])
        start = _next(idx, factors)
        if start < 0:
            return out
