"""Weighted Petri nets: firing, reachability graphs, WMG structure and
T-semiflows."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Optional, Sequence

import networkx as nx

from ._exact import nullspace
from .errors import (
    BoundExceeded,
    DuplicatePlace,
    NoSemiflow,
    NotConnected,
    NotEnabled,
    NotWmg,
    SelfLoopPlace,
)
from .lts import Lts, ParikhVector, Verdict

DEFAULT_STATE_BOUND = 100_000


@dataclass(frozen=True)
class PlaceDescriptor:
    """A WMG place: at most one producer and one consumer transition."""

    input: Optional[str] = None
    output: Optional[str] = None
    in_weight: Optional[int] = None
    out_weight: Optional[int] = None
    initial_tokens: int = 0

    def __post_init__(self):
        if self.input is None and self.output is None:
            raise ValueError("a place needs an input or an output transition")
        if (self.input is None) != (self.in_weight is None):
            raise ValueError("in_weight must be given exactly when input is")
        if (self.output is None) != (self.out_weight is None):
            raise ValueError("out_weight must be given exactly when output is")
        for w in (self.in_weight, self.out_weight):
            if w is not None and w <= 0:
                raise ValueError("weights must be positive")
        if self.initial_tokens < 0:
            raise ValueError("negative initial marking")


@dataclass(frozen=True)
class WeightedNet:
    places: tuple[str, ...]
    transitions: tuple[str, ...]
    pre: Mapping[tuple[str, str], int] = field(default_factory=dict)   # (place, transition)
    post: Mapping[tuple[str, str], int] = field(default_factory=dict)  # (transition, place)

    def __post_init__(self):
        if len(set(self.places)) != len(self.places):
            raise DuplicatePlace("duplicate place name")
        if len(set(self.transitions)) != len(self.transitions):
            raise ValueError("duplicate transition name")
        if set(self.places) & set(self.transitions):
            raise ValueError("place and transition names must be disjoint")
        # drop zero weights so that structural equality ignores them
        object.__setattr__(self, "pre", {k: v for k, v in self.pre.items() if v})
        object.__setattr__(self, "post", {k: v for k, v in self.post.items() if v})
        for (p, t), w in self.pre.items():
            if p not in self.places or t not in self.transitions or w < 0:
                raise ValueError(f"bad arc {p} -> {t}")
        for (t, p), w in self.post.items():
            if p not in self.places or t not in self.transitions or w < 0:
                raise ValueError(f"bad arc {t} -> {p}")

    def W(self, src: str, dst: str) -> int:
        return self.pre.get((src, dst), 0) or self.post.get((src, dst), 0)

    def incidence(self, p: str, t: str) -> int:
        return self.post.get((t, p), 0) - self.pre.get((p, t), 0)

    def inputs_of_place(self, p: str) -> list[str]:
        return [t for t in self.transitions if (t, p) in self.post]

    def outputs_of_place(self, p: str) -> list[str]:
        return [t for t in self.transitions if (p, t) in self.pre]


@dataclass(frozen=True)
class System:
    net: WeightedNet
    initial: tuple[int, ...]

    def __post_init__(self):
        if len(self.initial) != len(self.net.places):
            raise ValueError("marking does not cover the place set")
        if any(v < 0 for v in self.initial):
            raise ValueError("negative marking")

    @classmethod
    def of(cls, net: WeightedNet, marking: Mapping[str, int]) -> "System":
        extra = set(marking) - set(net.places)
        if extra:
            raise ValueError(f"marking mentions unknown places {sorted(extra)}")
        return cls(net, tuple(marking.get(p, 0) for p in net.places))

    @property
    def marking(self) -> dict[str, int]:
        return dict(zip(self.net.places, self.initial))

    def with_marking(self, marking: Mapping[str, int]) -> "System":
        return System.of(self.net, marking)


def build_net(places: Iterable[tuple[str, PlaceDescriptor]], transitions: Sequence[str] = ()) -> WeightedNet:
    """Assemble a net from WMG place descriptors.

    ``transitions`` may list transitions not touched by any place; the
    resulting transition order is sorted.
    """
    return build_system(places, transitions).net


def build_system(places: Iterable[tuple[str, PlaceDescriptor]], transitions: Sequence[str] = ()) -> System:
    """Like build_net, keeping the descriptors' initial tokens as the marking."""
    names, pre, post, tokens = [], {}, {}, {}
    trans = set(transitions)
    for name, d in places:
        if name in tokens:
            raise DuplicatePlace(f"duplicate place {name}")
        if d.input is not None and d.input == d.output:
            raise SelfLoopPlace(f"place {name} has {d.input} as both input and output")
        names.append(name)
        tokens[name] = d.initial_tokens
        if d.input is not None:
            post[(d.input, name)] = d.in_weight
            trans.add(d.input)
        if d.output is not None:
            pre[(name, d.output)] = d.out_weight
            trans.add(d.output)
    net = WeightedNet(tuple(names), tuple(sorted(trans)), pre, post)
    return System.of(net, tokens)


def place_descriptor(net: WeightedNet, p: str, tokens: int = 0) -> PlaceDescriptor:
    """Inverse of build_net for one WMG place."""
    ins, outs = net.inputs_of_place(p), net.outputs_of_place(p)
    if len(ins) > 1 or len(outs) > 1:
        raise NotWmg(f"place {p} is not a WMG place")
    i = ins[0] if ins else None
    o = outs[0] if outs else None
    return PlaceDescriptor(i, o, net.post[(i, p)] if i else None, net.pre[(p, o)] if o else None, tokens)


# ---------------------------------------------------------------------------
# firing
# ---------------------------------------------------------------------------

class _Firing:
    """Index-based firing rule, shared by the explorers."""

    def __init__(self, net: WeightedNet):
        idx = {p: i for i, p in enumerate(net.places)}
        self.transitions = net.transitions
        self.need = {t: [] for t in net.transitions}
        self.delta = {t: [] for t in net.transitions}
        for (p, t), w in net.pre.items():
            self.need[t].append((idx[p], w))
        for t in net.transitions:
            for i, p in enumerate(net.places):
                c = net.incidence(p, t)
                if c:
                    self.delta[t].append((i, c))

    def blocking(self, m: Sequence[int], t: str) -> Optional[int]:
        for i, w in self.need[t]:
            if m[i] < w:
                return i
        return None

    def fire(self, m: Sequence[int], t: str) -> tuple[int, ...]:
        out = list(m)
        for i, c in self.delta[t]:
            out[i] += c
        return tuple(out)

    def successors(self, m):
        for t in self.transitions:
            if all(m[i] >= w for i, w in self.need[t]):
                yield t, self.fire(m, t)


def fire(net: WeightedNet, m: Mapping[str, int], t: str) -> dict[str, int]:
    """M'(p) = M(p) - W(p,t) + W(t,p); raises NotEnabled if some place is short."""
    if t not in net.transitions:
        raise ValueError(f"unknown transition {t}")
    for p in net.places:
        if m.get(p, 0) < net.pre.get((p, t), 0):
            raise NotEnabled(t, p)
    return {p: m.get(p, 0) - net.pre.get((p, t), 0) + net.post.get((t, p), 0) for p in net.places}


def enabled(net: WeightedNet, m: Mapping[str, int]) -> list[str]:
    return [t for t in net.transitions if all(m.get(p, 0) >= net.pre.get((p, t), 0) for p in net.places)]


def marking_name(places: Sequence[str], m: Sequence[int]) -> str:
    if not places:
        return "empty"
    return ";".join(f"{p}={v}" for p, v in zip(places, m))


# ---------------------------------------------------------------------------
# reachability
# ---------------------------------------------------------------------------

def explore(sys: System, state_bound: int = DEFAULT_STATE_BOUND, depth: Optional[int] = None):
    """Breadth-first closure of the initial marking.

    Returns the reachability graph and a map from state name to marking
    vector.  With ``depth`` only markings within that many firings are kept,
    and arcs are only expanded from markings strictly closer than ``depth``.
    """
    rule = _Firing(sys.net)
    places = sys.net.places
    seen = {sys.initial: 0}
    order = [sys.initial]
    arcs = []
    todo = deque([sys.initial])
    while todo:
        m = todo.popleft()
        d = seen[m]
        if depth is not None and d >= depth:
            continue
        for t, m2 in rule.successors(m):
            if m2 not in seen:
                if len(seen) >= state_bound:
                    raise BoundExceeded(state_bound)
                seen[m2] = d + 1
                order.append(m2)
                todo.append(m2)
            arcs.append((m, t, m2))
    names = {m: marking_name(places, m) for m in order}
    lts = Lts.build(
        names[sys.initial],
        [(names[a], t, names[b]) for a, t, b in arcs],
        states=names.values(),
        labels=sys.net.transitions,
    )
    return lts, {names[m]: m for m in order}


def reachability_graph(sys: System, state_bound: int = DEFAULT_STATE_BOUND) -> Lts:
    return explore(sys, state_bound)[0]


# ---------------------------------------------------------------------------
# structure
# ---------------------------------------------------------------------------

def is_wmg(net: WeightedNet) -> Verdict:
    """Every place has at most one input and at most one output transition."""
    for p in net.places:
        if len(net.inputs_of_place(p)) > 1 or len(net.outputs_of_place(p)) > 1:
            return Verdict(False, p)
    return Verdict(True)


def is_connected(net: WeightedNet) -> bool:
    g = nx.Graph()
    g.add_nodes_from(("p", p) for p in net.places)
    g.add_nodes_from(("t", t) for t in net.transitions)
    g.add_edges_from((("p", p), ("t", t)) for p, t in net.pre)
    g.add_edges_from((("t", t), ("p", p)) for t, p in net.post)
    return g.number_of_nodes() > 0 and nx.is_connected(g)


def minimal_t_semiflow(net: WeightedNet) -> ParikhVector:
    """The prime T-semiflow with full support of a connected WMG."""
    check = is_wmg(net)
    if not check:
        raise NotWmg(f"place {check.witness} has several inputs or outputs")
    if not net.transitions:
        raise NoSemiflow("no transitions")
    if not is_connected(net):
        raise NotConnected("net is not connected")
    matrix = [[Fraction(net.incidence(p, t)) for t in net.transitions] for p in net.places]
    basis = nullspace(matrix, len(net.transitions))
    if len(basis) != 1:
        raise NoSemiflow(f"kernel of the incidence matrix has dimension {len(basis)}")
    vec = basis[0]
    scale = lcm(*(x.denominator for x in vec))
    ints = [int(x * scale) for x in vec]
    if all(x <= 0 for x in ints):
        ints = [-x for x in ints]
    if any(x <= 0 for x in ints):
        raise NoSemiflow("no semiflow with full support")
    g = gcd(*ints)
    return ParikhVector.of(zip(net.transitions, (x // g for x in ints)))
