"""Bounded brute-force WMG search for finite LTSs, used as an oracle.

The search is over all WMGs whose arc weights are at most ``max_weight``
and whose places hold at most ``max_tokens`` tokens initially.  It does not
use lattice geometry.  Each candidate place is simulated along the LTS on
its own; a place is admissible when its token count is well defined, never
negative, and never blocks an arc of the LTS.  Adding admissible places can
only block more non-arcs and distinguish more states, so some bounded net
solves the LTS iff the net made of every admissible place (each with its
smallest admissible marking) does.  That net is then checked by computing
its reachability graph.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Optional

from .errors import BoundExceeded
from .lts import Lts, lts_isomorphic
from .net import PlaceDescriptor, System, build_system, explore


@dataclass(frozen=True)
class SearchResult:
    solvable: bool
    system: Optional[System]
    places_tried: int
    places_admissible: int


def _offsets(lts: Lts, d: PlaceDescriptor) -> Optional[dict[str, int]]:
    """Token count of the place at each state relative to the initial one,
    or None if two paths to a state disagree."""
    delta = {}
    if d.input is not None:
        delta[d.input] = delta.get(d.input, 0) + d.in_weight
    if d.output is not None:
        delta[d.output] = delta.get(d.output, 0) - d.out_weight
    off = {lts.initial: 0}
    todo = deque([lts.initial])
    while todo:
        s = todo.popleft()
        for label, dsts in lts.succ[s].items():
            for t in dsts:
                v = off[s] + delta.get(label, 0)
                if t not in off:
                    off[t] = v
                    todo.append(t)
                elif off[t] != v:
                    return None
    return off


def candidate_places(labels, max_weight: int):
    ends = [None] + list(labels)
    weights = range(1, max_weight + 1)
    for src, dst in itertools.product(ends, ends):
        if (src is None and dst is None) or (src is not None and src == dst):
            continue
        for wi in (weights if src is not None else [None]):
            for wo in (weights if dst is not None else [None]):
                yield src, dst, wi, wo


def bounded_net_search(lts: Lts, max_weight: int = 4, max_tokens: int = 8) -> SearchResult:
    if lts.reachable() != set(lts.states):
        return SearchResult(False, None, 0, 0)
    places = []
    tried = 0
    for src, dst, wi, wo in candidate_places(lts.labels, max_weight):
        tried += 1
        off = _offsets(lts, PlaceDescriptor(src, dst, wi, wo, 0))
        if off is None:
            continue
        need = max(-v for v in off.values())
        if dst is not None:
            need = max([need] + [wo - off[s] for s in lts.states if lts.succ[s].get(dst)])
        k = max(need, 0)
        if k <= max_tokens:
            places.append((f"q{len(places)}", PlaceDescriptor(src, dst, wi, wo, k)))
    system = build_system(places, transitions=lts.labels)
    try:
        rg, _ = explore(system, state_bound=len(lts.states) + 1)
    except BoundExceeded:
        return SearchResult(False, None, tried, len(places))
    ok = len(rg.states) == len(lts.states) and lts_isomorphic(rg, lts) is not None
    return SearchResult(ok, system if ok else None, tried, len(places))
