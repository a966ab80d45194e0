"""Geometric synthesis of WMGs from finite acyclic LTSs.

States are embedded in N^labels through their Parikh distance to the
initial state.  A solution exists iff the embedded set is lattice-convex and
cut out by half-spaces  k + h*x_u - l*x_t >= 0,  each of which is a place fed
by u with weight h, drained by t with weight l, holding k tokens.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, gcd
from typing import Optional, Sequence

from ._exact import in_convex_hull
from .errors import (
    CertificationFailed,
    InconsistentDistances,
    NoRegionExists,
    NonConvex,
    PreconditionViolated,
    PropertyBViolated,
)
from .lts import Lts, Verdict, check_basic_properties, lts_isomorphic, parikh_distances
from .net import PlaceDescriptor, System, build_system, explore


@dataclass(frozen=True)
class LatticePointSet:
    labels: tuple[str, ...]
    points: frozenset  # of integer tuples, one coordinate per label

    def __post_init__(self):
        for p in self.points:
            if len(p) != len(self.labels) or any(x < 0 for x in p):
                raise ValueError(f"bad lattice point {p}")

    @property
    def dimension(self) -> int:
        return len(self.labels)

    @property
    def has_origin(self) -> bool:
        return tuple([0] * self.dimension) in self.points


@dataclass(frozen=True)
class WmgRegion:
    """Half-space k + h*x[gain] - l*x[loss] >= 0."""

    gain_label: Optional[str]
    loss_label: str
    h: int
    l: int
    k: int

    def __post_init__(self):
        if self.l <= 0 or self.h < 0 or self.k < 0:
            raise ValueError("need l > 0, h >= 0, k >= 0")
        if self.gain_label is None and self.h:
            raise ValueError("h must be 0 without a gain label")
        if self.gain_label == self.loss_label:
            raise ValueError("gain and loss labels must differ")

    def value(self, labels: Sequence[str], point: Sequence[int]) -> int:
        x = dict(zip(labels, point))
        gain = self.h * x[self.gain_label] if self.gain_label is not None else 0
        return self.k + gain - self.l * x[self.loss_label]

    def descriptor(self) -> PlaceDescriptor:
        if self.gain_label is None or self.h == 0:
            return PlaceDescriptor(None, self.loss_label, None, self.l, self.k)
        return PlaceDescriptor(self.gain_label, self.loss_label, self.h, self.l, self.k)

    def __str__(self):
        gain = f" + {self.h}*{self.gain_label}" if self.gain_label is not None and self.h else ""
        return f"{self.k}{gain} - {self.l}*{self.loss_label} >= 0"


def embed(lts: Lts) -> tuple[LatticePointSet, dict[str, tuple[int, ...]]]:
    """Lattice embedding of the states; also returns the state -> point map."""
    dist = parikh_distances(lts)
    coords = {s: tuple(v[t] for t in lts.labels) for s, v in dist.items()}
    seen = {}
    for s, p in sorted(coords.items()):
        if p in seen:
            raise InconsistentDistances(s)
        seen[p] = s
    return LatticePointSet(lts.labels, frozenset(coords.values())), coords


def check_lattice_convex(ps: LatticePointSet) -> Verdict:
    """Every lattice point of the real convex hull belongs to the set.

    Candidates are the bounding-box points outside the set, scanned in
    lexicographic order; the first one inside the hull is the witness.
    """
    points = sorted(ps.points)
    if not points:
        return Verdict(True)
    lo = [min(p[i] for p in points) for i in range(ps.dimension)]
    hi = [max(p[i] for p in points) for i in range(ps.dimension)]
    for x in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if x not in ps.points and in_convex_hull(x, points):
            return Verdict(False, x)
    return Verdict(True)


# ---------------------------------------------------------------------------
# region search
# ---------------------------------------------------------------------------

def _envelope(constraints, h: Fraction) -> Fraction:
    """Smallest K >= 0 with K + a*h >= b for every (a, b)."""
    return max([Fraction(0)] + [b - a * h for a, b in constraints])


def _solve_gain(constraints, target: int, fa: int):
    """Find (K, H) rational, K, H >= 0, with K + a*H >= b for all (a, b) and
    K + fa*H < target.  Prefers the smallest denominator for H."""
    if fa == 0 and all(a == 0 for a, _ in constraints):
        return None
    breaks = {Fraction(0)}
    for (a1, b1), (a2, b2) in itertools.combinations(constraints, 2):
        if a1 != a2:
            h = Fraction(b1 - b2, a1 - a2)
            if h > 0:
                breaks.add(h)
    for a, b in constraints:
        if a > 0 and b > 0:
            breaks.add(Fraction(b, a))

    def cost(h):
        return _envelope(constraints, h) + fa * h

    best = min(sorted(breaks), key=cost)
    if cost(best) >= target:
        return None
    # the feasible set of H is an interval around `best`; take its simplest point
    q = 1
    while True:
        for p in sorted({floor(best * q), ceil(best * q)}):
            h = Fraction(p, q)
            if h >= 0 and cost(h) < target:
                return _envelope(constraints, h), h
        q += 1


def find_separating_region(
    ps: LatticePointSet,
    forbidden: tuple[tuple[int, ...], str],
    enabled_at: Optional[dict] = None,
) -> WmgRegion:
    """A WMG-region that holds on every point, allows ``label`` wherever it is
    enabled, and blocks it at the forbidden point.

    ``enabled_at`` maps each point to the labels enabled there; by default a
    label is enabled at x iff x + e_label is in the set.
    """
    point, label = forbidden
    labels = ps.labels
    t = labels.index(label)
    if enabled_at is None:
        enabled_at = {p: {lab for i, lab in enumerate(labels) if _step(p, i) in ps.points} for p in ps.points}
    if label in enabled_at.get(point, ()):
        raise PreconditionViolated(f"{label} is enabled at {point}")

    for gain in [None] + [u for u in labels if u != label]:
        need = {}
        for p in ps.points:
            a = p[labels.index(gain)] if gain is not None else 0
            b = p[t] + (1 if label in enabled_at[p] else 0)
            need[a] = max(need.get(a, b), b)
        constraints = sorted(need.items())
        target = point[t] + 1
        if gain is None:
            k = max([0] + [b for _, b in constraints])
            if k < target:
                return WmgRegion(None, label, 0, 1, k)
            continue
        fa = point[labels.index(gain)]
        found = _solve_gain(constraints, target, fa)
        if found is None:
            continue
        K, H = found
        scale = H.denominator * K.denominator // gcd(H.denominator, K.denominator)
        k, h, l = int(K * scale), int(H * scale), scale
        g = gcd(gcd(k, h), l)
        k, h, l = k // g, h // g, l // g
        if h == 0:
            return WmgRegion(None, label, 0, 1, -(-k // l))
        return WmgRegion(gain, label, h, l, k)
    raise NoRegionExists(point, label)


def _step(p, i):
    return p[:i] + (p[i] + 1,) + p[i + 1:]


# ---------------------------------------------------------------------------
# synthesis
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AcyclicSolution:
    system: System
    regions: tuple[WmgRegion, ...]
    counters: tuple[str, ...]
    points: LatticePointSet


def region_place_name(region: WmgRegion) -> str:
    return f"p({region.gain_label if region.gain_label else '*'},{region.loss_label})"


def synthesize_acyclic(lts: Lts) -> AcyclicSolution:
    """Synthesize and certify a WMG for a finite acyclic LTS.

    Steps: property b, embedding, lattice convexity, one region per unsolved
    event/state separation instance (scanned in sorted (state, label)
    order and reused when an earlier region already blocks the instance),
    counter places when two states would share a marking, and finally an
    isomorphism check of the reachability graph against the input.
    """
    report = check_basic_properties(lts)
    if not report.property_b:
        raise PropertyBViolated(report)
    if not lts.is_acyclic():
        raise PreconditionViolated("LTS is not acyclic")
    ps, coords = embed(lts)
    convex = check_lattice_convex(ps)
    if not convex:
        raise NonConvex(convex.witness)

    labels = lts.labels
    enabled_at = {coords[s]: set(lts.succ[s]) for s in lts.states}
    instances = [(coords[s], label) for s in lts.sorted_states() for label in labels
                 if label not in enabled_at[coords[s]]]
    regions: list[WmgRegion] = []
    for p, label in instances:
        if not any(_blocks(r, labels, p, label) for r in regions):
            regions.append(find_separating_region(ps, (p, label), enabled_at))
    regions = _prune(regions, labels, instances)

    counters = _counters_needed(labels, regions, list(coords.values()))
    places = []
    used = set()
    for r in regions:
        name = region_place_name(r)
        i = 2
        base = name
        while name in used:
            name = f"{base}.{i}"
            i += 1
        used.add(name)
        places.append((name, r.descriptor()))
    for label in counters:
        places.append((f"p({label},*)", PlaceDescriptor(label, None, 1, None, 0)))
    system = build_system(places, transitions=labels)

    certify_system(system, lts)
    return AcyclicSolution(system, tuple(regions), tuple(counters), ps)


def _blocks(region: WmgRegion, labels, point, label) -> bool:
    return region.loss_label == label and region.value(labels, point) < region.l


def _prune(regions, labels, instances):
    """Drop regions, latest first, whose instances are all blocked by others."""
    kept = list(regions)
    for r in reversed(regions):
        rest = [q for q in kept if q is not r]
        if all(any(_blocks(q, labels, p, t) for q in rest) for p, t in instances if _blocks(r, labels, p, t)):
            kept = rest
    return kept


def _counters_needed(labels, regions, points) -> list[str]:
    def classes(extra):
        seen = {}
        for p in points:
            key = tuple(r.value(labels, p) for r in regions) + tuple(p[labels.index(t)] for t in extra)
            seen.setdefault(key, []).append(p)
        return sum(len(v) - 1 for v in seen.values())

    chosen: list[str] = []
    for label in labels:
        clashes = classes(chosen)
        if not clashes:
            break
        if classes(chosen + [label]) < clashes:
            chosen.append(label)
    return chosen


def certify_system(system: System, lts: Lts) -> None:
    """Raise CertificationFailed unless RG(system) is isomorphic to ``lts``."""
    from .errors import BoundExceeded

    try:
        rg, _ = explore(system, state_bound=len(lts.states) + 1)
    except BoundExceeded as exc:
        raise CertificationFailed("the net has more reachable markings than the LTS has states") from exc
    if len(rg.states) != len(lts.states) or lts_isomorphic(rg, lts) is None:
        raise CertificationFailed("reachability graph is not isomorphic to the LTS")
