"""Truth of formulas over a universe under agents' information relations.

Evaluation is by satisfaction sets: for each subformula and each time the
set of histories where it holds, as a bitset. ``eval`` and ``valid`` are bit
tests on those sets.
"""

from __future__ import annotations

from typing import Mapping, Optional

from ..errors import RangeError, ResolutionError
from ..information import InfoEnsemble
from ..world import Universe, iter_bits
from .formula import (And, At, Atom, Box, Const, Diamond, Formula, Future, Implies,
                      Not, Or, Past)
from .parser import parse


class Evaluator:
    def __init__(self, universe: Universe, ensembles: Mapping[str, InfoEnsemble]):
        self.universe = universe
        self.ensembles = dict(ensembles)
        self._cache: dict = {}
        self._labels: dict = {}
        self._times = tuple(universe.axis.times)
        self._by_cut = [[] for _ in self._times]
        for v in universe.vertices:
            self._by_cut[v.cut].append((v, universe.ext(v)))

    def with_ensemble(self, ensemble: InfoEnsemble) -> "Evaluator":
        ens = dict(self.ensembles)
        ens[ensemble.agent] = ensemble
        return Evaluator(self.universe, ens)

    def _label_bits(self, p: str) -> tuple:
        if p not in self._labels:
            u = self.universe
            per_t = []
            for t in self._times:
                bits = 0
                for h in u:
                    if p in u.states[h.trajectory[t]].labels:
                        bits |= 1 << h.index
                per_t.append(bits)
            self._labels[p] = tuple(per_t)
        return self._labels[p]

    def sat(self, f: Formula) -> tuple:
        """Per-time bitsets of the histories where ``f`` holds."""
        hit = self._cache.get(f)
        if hit is None:
            hit = self._cache[f] = self._sat(f)
        return hit

    def _sat(self, f: Formula) -> tuple:
        full = self.universe.all
        n = len(self._times)
        if isinstance(f, Const):
            return (full if f.value else 0,) * n
        if isinstance(f, Atom):
            if self.universe.propositions and f.name not in self.universe.propositions:
                raise ResolutionError(f"unknown proposition {f.name!r}")
            return self._label_bits(f.name)
        if isinstance(f, Not):
            return tuple(full & ~s for s in self.sat(f.sub))
        if isinstance(f, And):
            return tuple(a & b for a, b in zip(self.sat(f.left), self.sat(f.right)))
        if isinstance(f, Or):
            return tuple(a | b for a, b in zip(self.sat(f.left), self.sat(f.right)))
        if isinstance(f, Implies):
            return tuple((full & ~a) | b for a, b in zip(self.sat(f.left), self.sat(f.right)))
        if isinstance(f, Past):
            sub, out, acc = self.sat(f.sub), [], 0
            for t in range(n):
                out.append(acc)
                acc |= sub[t]
            return tuple(out)
        if isinstance(f, Future):
            sub, out, acc = self.sat(f.sub), [0] * n, 0
            for t in reversed(range(n)):
                out[t] = acc
                acc |= sub[t]
            return tuple(out)
        if isinstance(f, At):
            if f.time not in self.universe.axis:
                raise RangeError(f"time {f.time} outside 0..{self.universe.axis.t_max}")
            return (self.sat(f.sub)[f.time],) * n
        if isinstance(f, (Box, Diamond)):
            return self._modal(f)
        raise TypeError(f"not a formula: {f!r}")

    def _modal(self, f) -> tuple:
        ens = self.ensembles.get(f.agent)
        if ens is None:
            raise ResolutionError(f"no information ensemble for agent {f.agent!r}")
        if f.time is not None and f.time not in self.universe.axis:
            raise RangeError(f"time {f.time} outside 0..{self.universe.axis.t_max}")
        sub = self.sat(f.sub)
        is_box = isinstance(f, Box)
        out = []
        for t in self._times:
            slice_t = t if f.time is None else f.time
            target = sub[t]
            bits = 0
            for v, ext in self._by_cut[slice_t]:
                star = ens.stars[ens.index_of(v)]
                ok = (star & ~target) == 0 if is_box else (star & target) != 0
                if ok:
                    bits |= ext
            out.append(bits)
        return tuple(out)

    def formula(self, f) -> Formula:
        if isinstance(f, str):
            return parse(f, agents_=self.ensembles, t_max=self.universe.axis.t_max)
        return f

    def eval(self, f, history, t: int) -> bool:
        f = self.formula(f)
        h = self.universe.history(history)
        if t not in self.universe.axis:
            raise RangeError(f"time {t} outside 0..{self.universe.axis.t_max}")
        return bool(self.sat(f)[t] >> h.index & 1)

    def valid(self, f) -> tuple[bool, Optional[tuple]]:
        """``(True, None)`` or ``(False, (history id, t))`` for the first failure."""
        f = self.formula(f)
        for t, bits in enumerate(self.sat(f)):
            missing = self.universe.all & ~bits
            if missing:
                first = next(iter_bits(missing))
                return False, (self.universe.histories[first].id, t)
        return True, None

    def holds_on(self, f, bits: int, t: int) -> bool:
        """True iff ``f`` holds at time ``t`` in every history of ``bits``."""
        return (bits & ~self.sat(self.formula(f))[t]) == 0
