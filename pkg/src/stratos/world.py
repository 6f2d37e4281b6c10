"""Times, states, histories, vertices, situations and events.

A :class:`Universe` is the finite set of total histories over a discrete
time axis ``0..t_max``. Histories are stored as state-id tuples and indexed
by position; sets of histories are Python ints used as bitsets (bit ``i`` set
means history ``i`` is a member). A vertex is a history prefix and two
vertices are equal iff their prefixes are equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .errors import ModelReferenceError, SchemaError

HISTORY_SEP = ">"


@dataclass(frozen=True)
class TimeAxis:
    t_max: int

    def __post_init__(self):
        if self.t_max < 0:
            raise SchemaError("t_max must be nonnegative")

    @property
    def times(self) -> range:
        return range(self.t_max + 1)

    def __contains__(self, t) -> bool:
        return isinstance(t, int) and 0 <= t <= self.t_max

    def __len__(self) -> int:
        return self.t_max + 1


@dataclass(frozen=True)
class WorldState:
    id: str
    labels: frozenset = frozenset()


@dataclass(frozen=True)
class History:
    index: int
    trajectory: tuple

    @property
    def id(self) -> str:
        return HISTORY_SEP.join(self.trajectory)

    def __getitem__(self, t: int) -> str:
        return self.trajectory[t]


@dataclass(frozen=True, order=True)
class Vertex:
    """A partial history ``H^t``, identified by its prefix ``H_0..H_t``."""

    prefix: tuple

    @property
    def cut(self) -> int:
        return len(self.prefix) - 1

    @property
    def state(self) -> str:
        return self.prefix[-1]

    def __str__(self):
        return HISTORY_SEP.join(self.prefix)


@dataclass(frozen=True)
class Situation:
    """Partial assignment of truth values to propositions."""

    assignment: Mapping[str, bool] = field(default_factory=dict)

    def agrees_with(self, labels: frozenset) -> bool:
        return all((p in labels) == v for p, v in self.assignment.items())


@dataclass(frozen=True)
class Event:
    content: Mapping[int, Situation] = field(default_factory=dict)

    @property
    def span(self) -> frozenset:
        return frozenset(self.content)


def iter_bits(bits: int) -> Iterator[int]:
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def popcount(bits: int) -> int:
    return bin(bits).count("1")


class Universe:
    """The materialized set of histories plus the vertex table.

    ``histories`` are sorted lexicographically by trajectory, so indices are
    stable for a given model.
    """

    def __init__(self, states: Iterable[WorldState], t_max: int,
                 trajectories: Iterable[tuple], propositions: Iterable[str] = ()):
        self.axis = TimeAxis(t_max)
        self.states = {s.id: s for s in states}
        self.propositions = frozenset(propositions)
        trajs = sorted(set(tuple(tr) for tr in trajectories))
        if not trajs:
            raise SchemaError("universe has no histories")
        for tr in trajs:
            if len(tr) != t_max + 1:
                raise SchemaError(f"history {tr} is not total over 0..{t_max}")
            for s in tr:
                if s not in self.states:
                    raise ModelReferenceError(f"unknown state {s!r}")
        self.histories = tuple(History(i, tr) for i, tr in enumerate(trajs))
        self._by_id = {h.id: h for h in self.histories}
        self.all = (1 << len(self.histories)) - 1

        # vertex -> bitset of histories through it
        self._ext: dict[tuple, int] = {}
        for h in self.histories:
            bit = 1 << h.index
            for t in self.axis.times:
                key = h.trajectory[: t + 1]
                self._ext[key] = self._ext.get(key, 0) | bit
        self.vertices = tuple(sorted((Vertex(p) for p in self._ext),
                                     key=lambda v: (v.cut, v.prefix)))

    def __len__(self):
        return len(self.histories)

    def __iter__(self):
        return iter(self.histories)

    def history(self, ref) -> History:
        """Resolve a history by index, id string or trajectory."""
        if isinstance(ref, History):
            return self.histories[ref.index]
        if isinstance(ref, int):
            if 0 <= ref < len(self.histories):
                return self.histories[ref]
        elif isinstance(ref, str):
            if ref in self._by_id:
                return self._by_id[ref]
        elif isinstance(ref, (tuple, list)):
            h = self._by_id.get(HISTORY_SEP.join(ref))
            if h is not None:
                return h
        raise ModelReferenceError(f"unknown history {ref!r}")

    def vertex(self, history, t: int) -> Vertex:
        h = self.history(history)
        if t not in self.axis:
            raise ModelReferenceError(f"time {t} outside 0..{self.axis.t_max}")
        return Vertex(h.trajectory[: t + 1])

    def as_vertex(self, ref) -> Vertex:
        """Accept a Vertex, a prefix tuple/list, or a ``a>b>c`` string."""
        if isinstance(ref, Vertex):
            prefix = ref.prefix
        elif isinstance(ref, str):
            prefix = tuple(ref.split(HISTORY_SEP))
        else:
            prefix = tuple(ref)
        if prefix not in self._ext:
            raise ModelReferenceError(f"no history passes through {HISTORY_SEP.join(prefix)!r}")
        return Vertex(prefix)

    def ext(self, v: Vertex) -> int:
        """Bitset of histories extending ``v``."""
        try:
            return self._ext[v.prefix]
        except KeyError:
            raise ModelReferenceError(f"unknown vertex {v}") from None

    def labels(self, history, t: int) -> frozenset:
        return self.states[self.history(history).trajectory[t]].labels

    def ids(self, bits: int) -> list[str]:
        return [self.histories[i].id for i in iter_bits(bits)]

    def bits_of(self, refs: Iterable) -> int:
        out = 0
        for r in refs:
            out |= 1 << self.history(r).index
        return out


def vertex_equal(universe: Universe, v1: Vertex, v2: Vertex) -> bool:
    universe.ext(v1)
    universe.ext(v2)
    return v1.prefix == v2.prefix


def backwards_identical(universe: Universe, h, k, t: int) -> bool:
    """True iff ``h`` and ``k`` agree at every time up to and including ``t``."""
    hh, kk = universe.history(h), universe.history(k)
    if t not in universe.axis:
        raise ModelReferenceError(f"time {t} outside 0..{universe.axis.t_max}")
    return hh.trajectory[: t + 1] == kk.trajectory[: t + 1]


def realizes(universe: Universe, event: Event, history) -> bool:
    h = universe.history(history)
    for t, sit in event.content.items():
        if t not in universe.axis:
            raise SchemaError(f"event time {t} outside the time axis")
        unknown = set(sit.assignment) - universe.propositions
        if unknown:
            raise SchemaError(f"unknown propositions {sorted(unknown)}")
        if not sit.agrees_with(universe.states[h.trajectory[t]].labels):
            return False
    return True
