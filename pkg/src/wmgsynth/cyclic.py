"""Cyclic solvability of words over any number of labels.

Three routes: the pairwise projection condition (sufficient) with its
circuit-merging construction, the exact characterization for ternary words
whose Parikh vector has the shape (x, x, y), and an exhaustive search over
markings of the complete pairwise net skeleton.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from math import gcd, prod
from typing import Optional, Sequence

from .binary import place_name, solve_binary_cyclic
from .errors import (
    BoundExceeded,
    CertificationFailed,
    EmptyWord,
    LabelAbsent,
    NotARotation,
    NotPrimeParikh,
    OutOfTheoremScope,
    PairConditionFailed,
    SearchSpaceTooLarge,
)
from .lts import ParikhVector, circular_lts_from_word, format_word, lts_isomorphic
from .net import PlaceDescriptor, System, build_system, reachability_graph

DEFAULT_ORACLE_BUDGET = 10**8


class CyclicVerdict(enum.Enum):
    SOLVABLE_BY_THEOREM5 = "SolvableByTheorem5"
    SOLVABLE_BY_THEOREM6 = "SolvableByTheorem6"
    UNSOLVABLE_BY_THEOREM6 = "UnsolvableByTheorem6"
    ORACLE_SOLVABLE = "OracleSolvable"
    ORACLE_UNSOLVABLE = "OracleUnsolvable"
    INCONCLUSIVE = "Inconclusive"

    @property
    def solvable(self) -> Optional[bool]:
        if self.value.startswith("Solvable") or self is CyclicVerdict.ORACLE_SOLVABLE:
            return True
        if self is CyclicVerdict.INCONCLUSIVE:
            return None
        return False

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class PairDiagnostic:
    pair: tuple[str, str]
    root: tuple[str, ...]
    ok: bool
    reason: str = ""


@dataclass(frozen=True)
class CyclicDecision:
    verdict: CyclicVerdict
    system: Optional[System] = None
    pairs: tuple[PairDiagnostic, ...] = ()
    witness_pair: Optional[tuple[str, str]] = None
    note: str = ""
    extra: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# projections
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PairProjection:
    pair: tuple[str, str]
    word_u: tuple[str, ...]
    root_v: tuple[str, ...]
    ell: int
    contiguous: bool

    def __post_init__(self):
        if self.root_v * self.ell != self.word_u:
            raise ValueError("word_u must equal root_v repeated ell times")


def primitive_root(u: Sequence[str]) -> tuple[tuple[str, ...], int]:
    """(v, l) with u = v^l and l maximal.  The smallest period dividing |u|
    is found as the first non-trivial occurrence of u in uu."""
    u = tuple(u)
    if not u:
        raise EmptyWord("empty word has no primitive root")
    n = len(u)
    doubled = u + u
    for p in range(1, n + 1):
        if n % p == 0 and doubled[p:p + n] == u:
            return u[:p], n // p
    raise AssertionError("unreachable")


def contiguous_pairs(word: Sequence[str]) -> set[frozenset]:
    """Pairs of distinct labels adjacent in the cyclic word."""
    word = tuple(word)
    if not word:
        raise EmptyWord("the word is empty")
    return {frozenset((x, y)) for x, y in zip(word, word[1:] + word[:1]) if x != y}


def project(word: Sequence[str], pair) -> PairProjection:
    word = tuple(word)
    labels = tuple(sorted(pair))
    if len(labels) != 2:
        raise ValueError("a pair needs two distinct labels")
    missing = [x for x in labels if x not in word]
    if missing:
        raise LabelAbsent(f"label {missing[0]} does not occur in the word")
    u = tuple(x for x in word if x in labels)
    v, ell = primitive_root(u)
    return PairProjection(labels, u, v, ell, frozenset(labels) in contiguous_pairs(word))


def _sorted_pairs(word):
    return sorted(tuple(sorted(p)) for p in contiguous_pairs(word))


def pair_diagnostics(word: Sequence[str]) -> list[PairDiagnostic]:
    """Check every contiguous pair: the projection's root must have a prime
    Parikh vector and be solvable by a binary circuit."""
    out = []
    for pair in _sorted_pairs(word):
        v = project(word, pair).root_v
        try:
            solve_binary_cyclic(v)
        except NotPrimeParikh:
            pv = ParikhVector.of_word(v)
            out.append(PairDiagnostic(pair, v, False, f"root {format_word(v)} has non-prime Parikh vector {pv}"))
        except NotARotation as exc:
            out.append(PairDiagnostic(pair, v, False,
                                      f"root {format_word(v)} is not a rotation of {format_word(exc.canonical)}"))
        else:
            out.append(PairDiagnostic(pair, v, True))
    return out


def _require_prime(word):
    word = tuple(word)
    if not word:
        raise EmptyWord("the word is empty")
    pv = ParikhVector.of_word(word)
    if not pv.prime:
        raise NotPrimeParikh(f"Parikh vector {pv} is not prime")
    return word, pv


# ---------------------------------------------------------------------------
# merging
# ---------------------------------------------------------------------------

def merge_circuits(word: Sequence[str]) -> System:
    """Union of the binary circuits of every contiguous pair's projection
    root, glued along equally named transitions, then certified."""
    word = tuple(word)
    places = []
    for pair in _sorted_pairs(word):
        v = project(word, pair).root_v
        try:
            circuit = solve_binary_cyclic(v)
        except (NotPrimeParikh, NotARotation) as exc:
            raise PairConditionFailed(pair, str(exc)) from exc
        sys = circuit.system
        for p in sys.net.places:
            d = _descriptor(sys, p)
            places.append((p, d))
    system = build_system(places, transitions=sorted(set(word)))
    certify_cyclic(system, word)
    return system


def _descriptor(sys: System, p: str) -> PlaceDescriptor:
    net = sys.net
    (i,) = net.inputs_of_place(p)
    (o,) = net.outputs_of_place(p)
    return PlaceDescriptor(i, o, net.post[(i, p)], net.pre[(p, o)], sys.marking[p])


def certify_cyclic(system: System, word: Sequence[str]) -> None:
    try:
        rg = reachability_graph(system, state_bound=len(word) + 1)
    except BoundExceeded as exc:
        raise CertificationFailed("net has more reachable markings than the word has positions") from exc
    if lts_isomorphic(rg, circular_lts_from_word(word)) is None:
        raise CertificationFailed("reachability graph differs from the circular LTS of the word")


def theorem5_check(word: Sequence[str]) -> CyclicDecision:
    """Sufficient condition; failure is inconclusive."""
    word, _ = _require_prime(word)
    diags = tuple(pair_diagnostics(word))
    failed = [d for d in diags if not d.ok]
    if failed:
        return CyclicDecision(CyclicVerdict.INCONCLUSIVE, None, diags, failed[0].pair,
                              note=failed[0].reason)
    try:
        system = merge_circuits(word)
    except CertificationFailed as exc:
        return CyclicDecision(CyclicVerdict.INCONCLUSIVE, None, diags, note=f"certification failed: {exc}")
    return CyclicDecision(CyclicVerdict.SOLVABLE_BY_THEOREM5, system, diags)


# ---------------------------------------------------------------------------
# ternary words with Parikh vector (x, x, y)
# ---------------------------------------------------------------------------

def ternary_shape(word: Sequence[str]) -> Optional[tuple[int, int]]:
    """(x, y) if the counts are {x, x, y} with gcd(x, y) = 1, else None."""
    counts = sorted(ParikhVector.of_word(word).as_dict().values())
    if len(counts) != 3:
        return None
    if counts[0] == counts[1]:
        x, y = counts[0], counts[2]
    elif counts[1] == counts[2]:
        x, y = counts[1], counts[0]
    else:
        return None
    return (x, y) if gcd(x, y) == 1 else None


def ternary_decide(word: Sequence[str]) -> CyclicDecision:
    word = tuple(word)
    if len(set(word)) != 3:
        raise OutOfTheoremScope(f"expected 3 labels, got {len(set(word))}")
    if ternary_shape(word) is None:
        raise OutOfTheoremScope(f"Parikh vector {ParikhVector.of_word(word)} is not of shape (x,x,y) with gcd 1")
    diags = tuple(pair_diagnostics(word))
    failed = [d for d in diags if not d.ok]
    if failed:
        return CyclicDecision(CyclicVerdict.UNSOLVABLE_BY_THEOREM6, None, diags, failed[0].pair,
                              note=failed[0].reason)
    return CyclicDecision(CyclicVerdict.SOLVABLE_BY_THEOREM6, merge_circuits(word), diags)


# ---------------------------------------------------------------------------
# exhaustive oracle over the pairwise skeleton
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SkeletonPlace:
    name: str
    src: str
    dst: str
    in_weight: int
    out_weight: int
    cap: int


def pairwise_skeleton(word: Sequence[str], weight_cap: Optional[int] = None) -> list[SkeletonPlace]:
    """One place per ordered pair (u, v): fed by u with weight |w|_v / g,
    drained by v with weight |w|_u / g, g = gcd(|w|_u, |w|_v).

    Initial markings range over 0..cap with cap = out-weight * |w|_v: a
    place holding that much never blocks v during one cycle.  ``weight_cap``
    further bounds the marking range of every place.
    """
    counts = ParikhVector.of_word(word).as_dict()
    labels = sorted(counts)
    places = []
    for u, v in itertools.permutations(labels, 2):
        g = gcd(counts[u], counts[v])
        w_in, w_out = counts[v] // g, counts[u] // g
        cap = w_out * counts[v]
        if weight_cap is not None:
            cap = min(cap, weight_cap)
        places.append(SkeletonPlace(place_name(u, v), u, v, w_in, w_out, cap))
    return places


def _place_trace(word, place: SkeletonPlace, k: int) -> Optional[list[int]]:
    """Markings of one place before each position of the cyclic word, or
    None if the place blocks an occurrence of its output."""
    m, trace = k, []
    for x in word:
        trace.append(m)
        if x == place.dst:
            if m < place.out_weight:
                return None
            m -= place.out_weight
        if x == place.src:
            m += place.in_weight
    return trace if m == k else None


def brute_force_cyclic_oracle(
    word: Sequence[str],
    weight_cap: Optional[int] = None,
    budget: int = DEFAULT_ORACLE_BUDGET,
) -> CyclicDecision:
    """Search the initial markings of the pairwise skeleton for one whose
    reachability graph is the circular LTS of ``word``.

    The flat candidate space is the product of the per-place ranges.  It
    is walked group by group, one group per output
    transition: a transition's enabling depends only on the places it
    drains, so the lexicographically least solution of the product is the
    concatenation of the least solution of each group.  A candidate group
    is accepted when its places never block their transition along the
    word and jointly block it at every position where the word does not
    fire it next.  ``budget`` bounds the summed size of the group spaces.
    The assembled net is then certified by isomorphism.
    """
    word, _ = _require_prime(word)
    labels = sorted(set(word))
    if len(labels) > 5:
        raise OutOfTheoremScope("the oracle handles at most 5 labels")
    skeleton = pairwise_skeleton(word, weight_cap)
    flat = prod(p.cap + 1 for p in skeleton)
    work = sum(prod(p.cap + 1 for p in skeleton if p.dst == t) for t in labels)
    if work > budget:
        raise SearchSpaceTooLarge(f"{work} candidate group markings exceed the budget {budget}")

    n = len(word)
    nxt = word  # label fired at position i
    chosen: dict[str, int] = {}
    for t in labels:
        group = [p for p in skeleton if p.dst == t]
        options = []
        for p in group:
            traces = {k: _place_trace(word, p, k) for k in range(p.cap + 1)}
            options.append([(k, tr) for k, tr in traces.items() if tr is not None])
        found = None
        for combo in itertools.product(*options):
            if all(nxt[i] == t or any(tr[i] < p.out_weight for p, (_, tr) in zip(group, combo))
                   for i in range(n)):
                found = combo
                break
        if found is None:
            return CyclicDecision(CyclicVerdict.ORACLE_UNSOLVABLE,
                                  note=_unsolved_note(labels, t), extra={"blocked_label": t})
        for p, (k, _) in zip(group, found):
            chosen[p.name] = k

    system = build_system(
        [(p.name, PlaceDescriptor(p.src, p.dst, p.in_weight, p.out_weight, chosen[p.name])) for p in skeleton],
        transitions=labels,
    )
    try:
        certify_cyclic(system, word)
    except CertificationFailed as exc:
        return CyclicDecision(CyclicVerdict.ORACLE_UNSOLVABLE, note=f"skeleton marking does not certify: {exc}")
    return CyclicDecision(CyclicVerdict.ORACLE_SOLVABLE, system,
                          extra={"marking": dict(chosen), "flat_space": flat, "group_space": work})


def _unsolved_note(labels, t):
    scope = "" if len(labels) <= 3 else " within the searched family"
    return f"no marking of the places draining {t} confines it to its positions{scope}"


def decide_cyclic(word: Sequence[str], use_oracle: bool = False,
                  budget: int = DEFAULT_ORACLE_BUDGET) -> CyclicDecision:
    """Ternary characterization when in scope, then the sufficient pair
    condition, then (if asked, or if nothing else concluded) the oracle."""
    word, _ = _require_prime(word)
    if not use_oracle and len(set(word)) == 3 and ternary_shape(word) is not None:
        return ternary_decide(word)
    if len(set(word)) == 1:
        return theorem5_check(word)
    if not use_oracle:
        decision = theorem5_check(word)
        if decision.verdict is not CyclicVerdict.INCONCLUSIVE:
            return decision
        if len(set(word)) > 5:
            return decision
    return brute_force_cyclic_oracle(word, budget=budget)
