"""Information sets, ensembles and the information relation they generate."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .errors import ModelReferenceError, PartitionViolationError
from .world import HISTORY_SEP, Universe, Vertex


def _default_name(members) -> str:
    return "{" + "|".join(str(v) for v in sorted(members)) + "}"


@dataclass(frozen=True)
class InfoSet:
    members: frozenset
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.members:
            raise PartitionViolationError("information set is empty")
        if not self.name:
            object.__setattr__(self, "name", _default_name(self.members))
        if not is_thin(self):
            raise PartitionViolationError(f"information set {self.name} is not thin")

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self):
        return len(self.members)

    def __contains__(self, v):
        return v in self.members

    @property
    def cuts(self) -> frozenset:
        return frozenset(v.cut for v in self.members)


def is_thin(info: InfoSet) -> bool:
    """No history passes through two members at different cuts."""
    by_cut = sorted(info.members, key=lambda v: v.cut)
    for i, v in enumerate(by_cut):
        for w in by_cut[i + 1:]:
            if w.cut > v.cut and w.prefix[: v.cut + 1] == v.prefix:
                return False
    return True


def is_straight(info: InfoSet) -> bool:
    return len(info.cuts) == 1


def is_slanted(info: InfoSet) -> bool:
    return not is_straight(info)


def i_star(universe: Universe, info: InfoSet) -> int:
    """Bitset of histories passing through some member of ``info``."""
    out = 0
    for v in info.members:
        out |= universe.ext(v)
    return out


@dataclass(frozen=True)
class InfoRelationSlice:
    time: int
    pairs: frozenset  # {(history index, history index)}


class InfoEnsemble:
    """One agent's partition of all vertices into information sets."""

    def __init__(self, universe: Universe, agent: str, cells: Iterable[InfoSet]):
        self.universe = universe
        self.agent = agent
        self.cells = tuple(sorted(cells, key=lambda c: (min(c.cuts), c.name)))
        self._cell_of: dict = {}
        known = set(universe.vertices)
        for i, cell in enumerate(self.cells):
            for v in cell.members:
                if v not in known:
                    raise ModelReferenceError(f"{agent}: cell {cell.name} names unknown vertex {v}")
                if v in self._cell_of:
                    raise PartitionViolationError(
                        f"{agent}: vertex {v} lies in more than one cell", vertex=v)
                self._cell_of[v] = i
        missing = [v for v in universe.vertices if v not in self._cell_of]
        if missing:
            raise PartitionViolationError(
                f"{agent}: vertex {missing[0]} lies in no cell", vertex=missing[0])
        names = [c.name for c in self.cells]
        if len(set(names)) != len(names):
            raise PartitionViolationError(f"{agent}: duplicate cell names")
        self._by_name = {c.name: i for i, c in enumerate(self.cells)}

    def __iter__(self):
        return iter(self.cells)

    def __len__(self):
        return len(self.cells)

    def index_of(self, v: Vertex) -> int:
        try:
            return self._cell_of[v]
        except KeyError:
            raise PartitionViolationError(f"{self.agent}: vertex {v} lies in no cell", vertex=v) from None

    def cell_of(self, v: Vertex) -> InfoSet:
        return self.cells[self.index_of(v)]

    def cell(self, name: str) -> InfoSet:
        try:
            return self.cells[self._by_name[name]]
        except KeyError:
            raise ModelReferenceError(f"{self.agent} has no information set {name!r}") from None

    def cell_at(self, history, t: int) -> InfoSet:
        return self.cell_of(self.universe.vertex(history, t))

    @cached_property
    def stars(self) -> tuple:
        return tuple(i_star(self.universe, c) for c in self.cells)

    def star_at(self, history, t: int) -> int:
        """``I(H^t)*`` as a bitset."""
        return self.stars[self.index_of(self.universe.vertex(history, t))]

    def split(self, cell: InfoSet, keep) -> "InfoEnsemble":
        """Replace ``cell`` by the parts inside and outside ``keep``."""
        keep = frozenset(keep) & cell.members
        rest = cell.members - keep
        if not keep or not rest:
            return self
        cells = [c for c in self.cells if c != cell]
        cells += [InfoSet(keep, f"{cell.name}+"), InfoSet(rest, f"{cell.name}-")]
        return InfoEnsemble(self.universe, self.agent, cells)


def cell_of(ensemble: InfoEnsemble, v: Vertex) -> InfoSet:
    return ensemble.cell_of(v)


def has_ndi(ensemble: InfoEnsemble) -> bool:
    """Nondiminishing information: ``I(H^t')* <= I(H^t)*`` whenever t <= t'.

    Checking consecutive cuts suffices since subset is transitive.
    """
    u = ensemble.universe
    for h in u:
        prev = None
        for t in u.axis.times:
            cur = ensemble.star_at(h, t)
            if prev is not None and cur & ~prev:
                return False
            prev = cur
    return True


def has_perfect_info(ensemble: InfoEnsemble) -> bool:
    return all(len(c) == 1 for c in ensemble.cells)


def relation_row(ensemble: InfoEnsemble, history, t: int) -> int:
    """Histories K with ``H R_t K``, as a bitset."""
    return ensemble.star_at(history, t)


def info_relation(ensemble: InfoEnsemble, t: int) -> InfoRelationSlice:
    from .world import iter_bits
    pairs = set()
    for h in ensemble.universe:
        for k in iter_bits(relation_row(ensemble, h, t)):
            pairs.add((h.index, k))
    return InfoRelationSlice(t, frozenset(pairs))


def relation_backwards_consistent(ensemble: InfoEnsemble) -> bool:
    """``H R_t' K`` implies ``H R_t K`` for every t <= t'."""
    u = ensemble.universe
    times = list(u.axis.times)
    for h in u:
        rows = [relation_row(ensemble, h, t) for t in times]
        for i, t in enumerate(times):
            for j in range(i, len(times)):
                if rows[j] & ~rows[i]:
                    return False
    return True


def relation_backwards_identical(ensemble: InfoEnsemble) -> bool:
    """``H R_t K`` iff H and K agree up to and including t."""
    u = ensemble.universe
    for h in u:
        for t in u.axis.times:
            if relation_row(ensemble, h, t) != u.ext(u.vertex(h, t)):
                return False
    return True


def perfect_ensemble(universe: Universe, agent: str) -> InfoEnsemble:
    return InfoEnsemble(universe, agent, (InfoSet(frozenset([v])) for v in universe.vertices))


def observation_ensemble(universe: Universe, agent: str, observed: Iterable[str],
                         recall: bool = True) -> InfoEnsemble:
    """Lump vertices whose observable labels agree.

    With ``recall`` the whole observed prefix must agree (yielding an NDI
    ensemble); without it only the current cut and current observation count,
    which typically makes the agent forget.
    """
    observed = frozenset(observed)

    def view(v: Vertex):
        obs = [tuple(sorted(universe.states[s].labels & observed)) for s in v.prefix]
        return (v.cut, tuple(obs) if recall else obs[-1])

    groups: dict = {}
    for v in universe.vertices:
        groups.setdefault(view(v), set()).add(v)
    return InfoEnsemble(universe, agent, (InfoSet(frozenset(g)) for g in groups.values()))


def ensemble_from_cells(universe: Universe, agent: str, raw_cells) -> InfoEnsemble:
    """Build an ensemble from ``[{"name":..., "vertices": [prefix, ...]}, ...]``.

    Plain lists of prefixes are accepted as unnamed cells. A prefix is a list
    of state ids or a ``s0>s1`` string.
    """
    cells = []
    for i, raw in enumerate(raw_cells):
        if isinstance(raw, dict):
            name = raw.get("name", "")
            verts = raw["vertices"]
        else:
            name, verts = "", raw
        members = set()
        for ref in verts:
            v = universe.as_vertex(ref)
            if v in members:
                raise PartitionViolationError(f"{agent}: vertex {v} listed twice in a cell", vertex=v)
            members.add(v)
        cells.append(InfoSet(frozenset(members), name))
    return InfoEnsemble(universe, agent, cells)


__all__ = [
    "InfoSet", "InfoEnsemble", "InfoRelationSlice", "i_star", "cell_of", "is_straight",
    "is_slanted", "is_thin", "has_ndi", "has_perfect_info", "info_relation", "relation_row",
    "relation_backwards_consistent", "relation_backwards_identical", "perfect_ensemble",
    "observation_ensemble", "ensemble_from_cells", "HISTORY_SEP",
]
