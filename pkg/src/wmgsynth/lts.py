"""Labelled transition systems, Parikh vectors and the behavioural checks
that every reachability graph of a weighted marked graph must pass."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, reduce
from math import gcd
from typing import Iterable, Mapping, Optional, Sequence

import networkx as nx

from .errors import (
    CycleBudgetExceeded,
    EmptyWord,
    InconsistentDistances,
    NotDeterministic,
    NotTotallyReachable,
    PreconditionViolated,
)

DEFAULT_CYCLE_BUDGET = 10**6


@dataclass(frozen=True)
class Verdict:
    """A yes/no answer with an optional witness; truthy iff ``ok``."""

    ok: bool
    witness: object = None

    def __bool__(self):
        return self.ok


def parse_word(text: str) -> tuple[str, ...]:
    """Single-character labels by default; comma-separated for longer ones."""
    text = text.strip()
    if "," in text:
        word = tuple(part.strip() for part in text.split(","))
        if any(not part for part in word):
            raise EmptyWord("empty label in comma-separated word")
        return word
    return tuple(text)


def format_word(word: Sequence[str]) -> str:
    if all(len(x) == 1 for x in word):
        return "".join(word)
    return ",".join(word)


# ---------------------------------------------------------------------------
# Parikh vectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ParikhVector:
    """Finite map label -> positive count (zero entries are dropped)."""

    items: tuple[tuple[str, int], ...] = ()

    @classmethod
    def of(cls, counts: Mapping[str, int] | Iterable[tuple[str, int]]) -> "ParikhVector":
        pairs = counts.items() if isinstance(counts, Mapping) else counts
        merged: dict[str, int] = {}
        for label, c in pairs:
            if c < 0:
                raise ValueError(f"negative count for {label}")
            merged[label] = merged.get(label, 0) + c
        return cls(tuple(sorted((k, v) for k, v in merged.items() if v)))

    @classmethod
    def of_word(cls, word: Iterable[str]) -> "ParikhVector":
        return cls.of((x, 1) for x in word)

    @classmethod
    def unit(cls, label: str) -> "ParikhVector":
        return cls(((label, 1),))

    def __getitem__(self, label: str) -> int:
        return dict(self.items).get(label, 0)

    def __add__(self, other: "ParikhVector") -> "ParikhVector":
        return ParikhVector.of(self.items + other.items)

    def as_dict(self) -> dict[str, int]:
        return dict(self.items)

    @property
    def support(self) -> frozenset[str]:
        return frozenset(k for k, _ in self.items)

    @property
    def total(self) -> int:
        return sum(v for _, v in self.items)

    def gcd(self) -> int:
        return reduce(gcd, (v for _, v in self.items), 0)

    @property
    def prime(self) -> bool:
        return self.gcd() == 1

    def __le__(self, other: "ParikhVector") -> bool:  # type: ignore[override]
        return all(v <= other[k] for k, v in self.items)

    def __lt__(self, other: "ParikhVector") -> bool:  # type: ignore[override]
        return self <= other and self != other

    def __ge__(self, other):  # type: ignore[override]
        return other <= self

    def __gt__(self, other):  # type: ignore[override]
        return other < self

    def __str__(self):
        return "(" + ",".join(f"{k}:{v}" for k, v in self.items) + ")"


# ---------------------------------------------------------------------------
# LTS
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Lts:
    states: frozenset
    labels: tuple
    arcs: frozenset
    initial: str

    def __post_init__(self):
        if self.initial not in self.states:
            raise ValueError(f"initial state {self.initial!r} is not a state")
        if list(self.labels) != sorted(set(self.labels)):
            raise ValueError("labels must be sorted and distinct")
        for src, label, dst in self.arcs:
            if src not in self.states or dst not in self.states:
                raise ValueError(f"arc {(src, label, dst)} has an unknown endpoint")
            if label not in self.labels:
                raise ValueError(f"arc {(src, label, dst)} has an unknown label")

    @classmethod
    def build(cls, initial, arcs, states=(), labels=()) -> "Lts":
        arcs = [tuple(a) for a in arcs]
        seen = set()
        for arc in arcs:
            if arc in seen:
                raise ValueError(f"duplicate arc {arc}")
            seen.add(arc)
        all_states = {initial, *states}
        all_states.update(a[0] for a in arcs)
        all_states.update(a[2] for a in arcs)
        all_labels = set(labels) | {a[1] for a in arcs}
        return cls(frozenset(all_states), tuple(sorted(all_labels)), frozenset(arcs), initial)

    @cached_property
    def succ(self) -> dict[str, dict[str, list[str]]]:
        out: dict[str, dict[str, list[str]]] = {s: {} for s in self.states}
        for src, label, dst in sorted(self.arcs):
            out[src].setdefault(label, []).append(dst)
        return out

    @cached_property
    def pred(self) -> dict[str, dict[str, list[str]]]:
        out: dict[str, dict[str, list[str]]] = {s: {} for s in self.states}
        for src, label, dst in sorted(self.arcs):
            out[dst].setdefault(label, []).append(src)
        return out

    def sorted_states(self) -> list[str]:
        return sorted(self.states)

    def enabled(self, state: str) -> list[str]:
        return sorted(self.succ[state])

    def target(self, state: str, label: str) -> Optional[str]:
        """Unique successor under ``label`` (forward-deterministic LTS)."""
        dsts = self.succ[state].get(label)
        if not dsts:
            return None
        if len(dsts) > 1:
            raise NotDeterministic(f"state {state} has several {label}-successors")
        return dsts[0]

    def reachable(self) -> set[str]:
        seen = {self.initial}
        todo = deque([self.initial])
        while todo:
            s = todo.popleft()
            for dsts in self.succ[s].values():
                for d in dsts:
                    if d not in seen:
                        seen.add(d)
                        todo.append(d)
        return seen

    def is_acyclic(self) -> bool:
        return nx.is_directed_acyclic_graph(self._digraph())

    def _digraph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.states)
        for src, label, dst in self.arcs:
            if g.has_edge(src, dst):
                g[src][dst]["labels"].add(label)
            else:
                g.add_edge(src, dst, labels={label})
        return g

    def relabel_states(self, mapping: Mapping[str, str]) -> "Lts":
        return Lts(
            frozenset(mapping[s] for s in self.states),
            self.labels,
            frozenset((mapping[a], t, mapping[b]) for a, t, b in self.arcs),
            mapping[self.initial],
        )


def circular_lts_from_word(word: Sequence[str]) -> Lts:
    """The single-cycle LTS s0 -w1-> s1 -w2-> ... -wk-> s0."""
    word = tuple(word)
    if not word:
        raise EmptyWord("the word is empty")
    k = len(word)
    arcs = [(f"s{i}", word[i], f"s{(i + 1) % k}") for i in range(k)]
    return Lts.build("s0", arcs, states=[f"s{i}" for i in range(k)])


def path_lts(word: Sequence[str]) -> Lts:
    """Acyclic path LTS s0 -w1-> s1 ... -wk-> sk."""
    word = tuple(word)
    arcs = [(f"s{i}", word[i], f"s{i + 1}") for i in range(len(word))]
    return Lts.build("s0", arcs, states=[f"s{i}" for i in range(len(word) + 1)])


# ---------------------------------------------------------------------------
# property b
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PropertyReport:
    forward_deterministic: bool
    backward_deterministic: bool
    forward_persistent: bool
    backward_persistent: bool
    totally_reachable: bool
    witnesses: tuple = ()

    @property
    def property_b(self) -> bool:
        return (self.forward_deterministic and self.backward_deterministic
                and self.forward_persistent and self.backward_persistent
                and self.totally_reachable)


def check_basic_properties(lts: Lts) -> PropertyReport:
    """Exhaustively check determinism, persistence (diamonds) and reachability.

    Only the first offending configuration, in sorted state/label order, is
    kept as the witness of each failed property.
    """
    witnesses = []
    states = lts.sorted_states()

    def first(name, found):
        if found is not None:
            witnesses.append((name, found))
        return found is None

    def nondet(index):
        for s in states:
            for label, others in sorted(index[s].items()):
                if len(others) > 1:
                    return (s, label)
        return None

    fd = first("forward_deterministic", nondet(lts.succ))
    bd = first("backward_deterministic", nondet(lts.pred))

    def diamond(index):
        for s in states:
            moves = sorted((lab, d) for lab, ds in index[s].items() for d in ds)
            for a, s1 in moves:
                for b, s2 in moves:
                    if a >= b:
                        continue
                    # forward: s1 -b-> x and s2 -a-> x; backward: x -b-> s1 and x -a-> s2
                    if not set(index[s1].get(b, ())) & set(index[s2].get(a, ())):
                        return (s, a, b)
        return None

    fp = first("forward_persistent", diamond(lts.succ))
    bp = first("backward_persistent", diamond(lts.pred))

    unreachable = sorted(lts.states - lts.reachable())
    tr = first("totally_reachable", tuple(unreachable) if unreachable else None)
    return PropertyReport(fd, bd, fp, bp, tr, tuple(witnesses))


# ---------------------------------------------------------------------------
# small cycles / property c
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmallCycle:
    vector: Optional[ParikhVector]
    minima: tuple[ParikhVector, ...]
    property_c: bool

    @property
    def ambiguous(self) -> bool:
        return len(self.minima) > 1


def elementary_cycle_vectors(lts: Lts, budget: int = DEFAULT_CYCLE_BUDGET) -> set[ParikhVector]:
    """Parikh vectors of all elementary cycles, parallel arcs expanded."""
    g = lts._digraph()
    vectors = set()
    count = 0
    for nodes in nx.simple_cycles(g):
        choices = [[]]
        for i, src in enumerate(nodes):
            dst = nodes[(i + 1) % len(nodes)]
            choices = [c + [lab] for c in choices for lab in sorted(g[src][dst]["labels"])]
            if count + len(choices) > budget:
                raise CycleBudgetExceeded(f"more than {budget} elementary cycles")
        count += len(choices)
        vectors.update(ParikhVector.of_word(c) for c in choices)
    return vectors


def small_cycle_parikh(lts: Lts, budget: int = DEFAULT_CYCLE_BUDGET) -> SmallCycle:
    """Minimal Parikh vector among the non-empty cycles.

    Every cycle decomposes into elementary ones, so the minimal vectors are
    found among elementary cycles.  When several incomparable minima exist the
    result is ambiguous and ``vector`` is None.
    """
    vectors = elementary_cycle_vectors(lts, budget)
    minima = tuple(sorted((v for v in vectors if not any(o < v for o in vectors)), key=lambda v: v.items))
    if len(minima) != 1:
        return SmallCycle(None, minima, False)
    v = minima[0]
    return SmallCycle(v, minima, v.prime and v.support == frozenset(lts.labels))


# ---------------------------------------------------------------------------
# Parikh distances from the initial state
# ---------------------------------------------------------------------------

def parikh_distances(lts: Lts) -> dict[str, ParikhVector]:
    """Delta_s: Parikh vector of any path from the initial state to s."""
    if not lts.is_acyclic():
        raise PreconditionViolated("LTS is not acyclic")
    unreachable = lts.states - lts.reachable()
    if unreachable:
        raise NotTotallyReachable(sorted(unreachable))
    for s in lts.states:
        for label, dsts in lts.succ[s].items():
            if len(dsts) > 1:
                raise PreconditionViolated(f"LTS is not forward deterministic at ({s}, {label})")

    dist = {lts.initial: ParikhVector()}
    todo = deque([lts.initial])
    while todo:
        s = todo.popleft()
        for label, (d,) in sorted(lts.succ[s].items()):
            v = dist[s] + ParikhVector.unit(label)
            if d not in dist:
                dist[d] = v
                todo.append(d)
            elif dist[d] != v:
                raise InconsistentDistances(d)
    return dist


# ---------------------------------------------------------------------------
# isomorphism
# ---------------------------------------------------------------------------

def lts_isomorphic(g1: Lts, g2: Lts) -> Optional[dict[str, str]]:
    """Rooted label-preserving isomorphism between deterministic LTSs.

    Determinism makes the candidate bijection unique: it is grown by a
    synchronised breadth-first walk from the two initial states.  Returns
    None on any mismatch.  Raises NotTotallyReachable when a state of either
    side is outside the walk, since no bijection can then be certified.
    """
    for g in (g1, g2):
        for s in g.states:
            for label, dsts in g.succ[s].items():
                if len(dsts) > 1:
                    raise NotDeterministic(f"state {s} has several {label}-successors")
    fwd = {g1.initial: g2.initial}
    bwd = {g2.initial: g1.initial}
    todo = deque([g1.initial])
    while todo:
        s1 = todo.popleft()
        s2 = fwd[s1]
        out1, out2 = g1.succ[s1], g2.succ[s2]
        if out1.keys() != out2.keys():
            return None
        for label in sorted(out1):
            (d1,), (d2,) = out1[label], out2[label]
            if d1 in fwd or d2 in bwd:
                if fwd.get(d1) != d2 or bwd.get(d2) != d1:
                    return None
                continue
            fwd[d1] = d2
            bwd[d2] = d1
            todo.append(d1)

    missing = sorted(g1.states - fwd.keys()) + sorted(g2.states - bwd.keys())
    if missing:
        raise NotTotallyReachable(missing)
    return fwd
