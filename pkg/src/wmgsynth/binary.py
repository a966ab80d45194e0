"""Two-label synthesis: cyclic binary words, reversible binary LTSs and the
single-place candidate for infinite binary behaviours."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import gcd
from typing import Optional, Sequence

from .errors import (
    BelowThreshold,
    CertificationFailed,
    EmptyWord,
    NoMarkingMatches,
    NoSolution,
    NotARotation,
    NotCoprime,
    NotEnabled,
    NotPrimeParikh,
    OrderViolated,
    PreconditionViolated,
    PropertyBViolated,
    PropertyCViolated,
)
from .lts import (
    Lts,
    ParikhVector,
    Verdict,
    check_basic_properties,
    circular_lts_from_word,
    lts_isomorphic,
    small_cycle_parikh,
)
from .net import PlaceDescriptor, System, build_system, explore, fire, reachability_graph


def place_name(src: str, dst: str) -> str:
    return f"p({src},{dst})"


@dataclass(frozen=True)
class QuotientProfile:
    n: int
    m: int
    quotients: tuple[int, ...]
    remainders: tuple[int, ...]

    def canonical_word(self, a: str = "a", b: str = "b") -> tuple[str, ...]:
        word = []
        for q in self.quotients:
            word.append(a)
            word.extend([b] * q)
        return tuple(word)


def quotient_sequence(n: int, m: int) -> QuotientProfile:
    """r_i + m = m_i * n + r_{i+1}, starting from r_0 = 0.

    The b-block lengths of the canonical word a b^{m_0} ... a b^{m_{n-1}}.
    """
    if n < 1 or m < 1:
        raise ValueError("counts must be positive")
    if n > m:
        raise OrderViolated(f"n={n} exceeds m={m}; swap the roles of the labels")
    if gcd(n, m) != 1:
        raise NotCoprime(f"gcd({n},{m}) = {gcd(n, m)}")
    r, quotients, remainders = 0, [], []
    for _ in range(n):
        remainders.append(r)
        q, r = divmod(r + m, n)
        quotients.append(q)
    assert r == 0
    return QuotientProfile(n, m, tuple(quotients), tuple(remainders))


@dataclass(frozen=True)
class BinaryCircuit:
    """The two-place circuit solving a binary cyclic word.

    ``a`` is the label with fewer occurrences (n of them), ``b`` the other
    (m occurrences).  Place p(a,b) receives m tokens from a and gives n to b;
    p(b,a) the reverse.  For a one-letter word ``b`` is None and the net has
    no places.
    """

    system: System
    a: str
    b: Optional[str]
    n: int
    m: int
    canonical: tuple[str, ...] = ()
    offset: int = 0

    @property
    def tokens_total(self) -> int:
        return sum(self.system.initial)


def roles(word: Sequence[str]) -> tuple[str, str, int, int]:
    """(a, b, n, m) with n <= m; ties go to the lexicographically smaller label."""
    counts = ParikhVector.of_word(word).as_dict()
    if len(counts) != 2:
        raise PreconditionViolated(f"expected exactly two labels, got {sorted(counts)}")
    (x, cx), (y, cy) = sorted(counts.items(), key=lambda kv: (kv[1], kv[0]))
    return x, y, cx, cy


def circuit_system(a: str, b: str, n: int, m: int, tokens_ab: int, tokens_ba: int) -> System:
    return build_system([
        (place_name(a, b), PlaceDescriptor(a, b, m, n, tokens_ab)),
        (place_name(b, a), PlaceDescriptor(b, a, n, m, tokens_ba)),
    ])


def solve_binary_cyclic(word: Sequence[str]) -> BinaryCircuit:
    """Decide and build a circuit whose reachability graph is the circular
    LTS of ``word``.

    Accepts iff the Parikh vector is coprime and the word is a rotation of the
    canonical word built from the quotient sequence.  The initial marking is
    obtained by replaying the rotated prefix from the canonical start
    (p(a,b) empty, p(b,a) holding all m+n-1 tokens).
    """
    word = tuple(word)
    if not word:
        raise EmptyWord("the word is empty")
    labels = sorted(set(word))
    if len(labels) == 1:
        if len(word) != 1:
            raise NotPrimeParikh(f"Parikh vector ({len(word)}) is not prime")
        sys = build_system([], transitions=labels)
        return _certified(BinaryCircuit(sys, labels[0], None, 1, 0, word, 0), word)
    a, b, n, m = roles(word)
    if gcd(n, m) != 1:
        raise NotPrimeParikh(f"Parikh vector ({a}:{n},{b}:{m}) is not prime")
    canonical = quotient_sequence(n, m).canonical_word(a, b)
    # rotation test on the doubled canonical word, labels mapped to one char
    enc = {a: "a", b: "b"}
    offset = ("".join(enc[x] for x in canonical) * 2).find("".join(enc[x] for x in word))
    if offset < 0 or offset >= len(word):
        raise NotARotation(word, canonical)
    sys = circuit_system(a, b, n, m, 0, m + n - 1)
    marking = sys.marking
    for t in canonical[:offset]:
        marking = fire(sys.net, marking, t)
    return _certified(BinaryCircuit(sys.with_marking(marking), a, b, n, m, canonical, offset), word)


def _certified(circuit: BinaryCircuit, word) -> BinaryCircuit:
    rg = reachability_graph(circuit.system, state_bound=len(word) + 1)
    if lts_isomorphic(rg, circular_lts_from_word(word)) is None:
        raise CertificationFailed("reachability graph differs from the circular LTS")
    return circuit


def predict_state_count(n: int, m: int, k: int) -> int:
    """Number of reachable markings of the circuit holding k tokens."""
    if gcd(n, m) != 1:
        raise NotCoprime(f"gcd({n},{m}) = {gcd(n, m)}")
    if k < m + n - 1:
        raise BelowThreshold(f"{k} tokens is below m+n-1 = {m + n - 1}")
    return k + 1


def reversible_binary_lts(n: int, m: int, k: int, a: str = "a", b: str = "b") -> Lts:
    """The unique (up to isomorphism and initial state) WMG-solvable LTS with
    k states, properties b and c, and small cycle (a:n, b:m)."""
    if gcd(n, m) != 1:
        raise NotCoprime(f"gcd({n},{m}) = {gcd(n, m)}")
    if k < n + m:
        raise NoSolution(f"{k} states cannot close a cycle with Parikh vector ({n},{m})")
    return reachability_graph(circuit_system(a, b, n, m, 0, k - 1), state_bound=k + 1)


def synthesize_reversible_binary(lts: Lts) -> BinaryCircuit:
    """Find the circuit (with |S|-1 tokens) solving a finite binary LTS."""
    if len(lts.labels) != 2:
        raise PreconditionViolated("expected a two-label LTS")
    report = check_basic_properties(lts)
    if not report.property_b:
        raise PropertyBViolated(report)
    small = small_cycle_parikh(lts)
    if not small.property_c:
        raise PropertyCViolated(
            "no unique small cycle" if small.vector is None
            else f"small cycle {small.vector} is not prime with full support")
    mu = small.vector
    (a, n), (b, m) = sorted(mu.items, key=lambda kv: (kv[1], kv[0]))
    size = len(lts.states)
    if size < n + m:
        raise NoSolution(f"{size} states cannot close a cycle with Parikh vector {mu}")
    for i in range(size):
        sys = circuit_system(a, b, n, m, i, size - 1 - i)
        rg = reachability_graph(sys, state_bound=size + 1)
        if len(rg.states) == size and lts_isomorphic(rg, lts) is not None:
            return BinaryCircuit(sys, a, b, n, m)
    raise NoMarkingMatches(f"no distribution of {size - 1} tokens reproduces the LTS")


# ---------------------------------------------------------------------------
# infinite binary behaviours
# ---------------------------------------------------------------------------

def bezout_block(n: int, m: int) -> tuple[int, int]:
    """(-k, l) with k*m + l*n = 1 and l >= 0 >= k.

    Firing a^{-k} b^{l} removes exactly one token from the place fed by a with
    weight m and drained by b with weight n.
    """
    if n < 1 or m < 1:
        raise ValueError("counts must be positive")
    if gcd(n, m) != 1:
        raise NotCoprime(f"gcd({n},{m}) = {gcd(n, m)}")
    k = pow(m, -1, n) if n > 1 else 0      # k*m = 1 (mod n), 0 <= k < n
    l = (1 - k * m) // n
    while k > 0:                           # add -n*m + m*n = 0 until signs fit
        k, l = k - n, l + m
    assert k * m + l * n == 1 and l >= 0 >= k
    return -k, l


def infinite_binary_candidate(n: int, m: int, i0: int, a: str = "a", b: str = "b") -> System:
    """Single place fed by a (weight m) and drained by b (weight n)."""
    if gcd(n, m) != 1:
        raise NotCoprime(f"gcd({n},{m}) = {gcd(n, m)}")
    if i0 < 0:
        raise ValueError("negative initial marking")
    return build_system([(place_name(a, b), PlaceDescriptor(a, b, m, n, i0))])


def max_block_repetitions(sys: System, block: Sequence[str], limit: int = 10**6) -> int:
    """How many times ``block`` can be fired back to back from the initial marking."""
    marking, count = sys.marking, 0
    while count < limit:
        try:
            for t in block:
                marking = fire(sys.net, marking, t)
        except NotEnabled:
            return count
        count += 1
    return count


def truncated_lts(lts: Lts, depth: int) -> Lts:
    """States within ``depth`` steps of the initial state; arcs leaving the
    states strictly closer than ``depth``."""
    dist = {lts.initial: 0}
    todo = deque([lts.initial])
    arcs = []
    while todo:
        s = todo.popleft()
        if dist[s] >= depth:
            continue
        for label, dsts in sorted(lts.succ[s].items()):
            for d in dsts:
                arcs.append((s, label, d))
                if d not in dist:
                    dist[d] = dist[s] + 1
                    todo.append(d)
    return Lts.build(lts.initial, arcs, states=dist.keys(), labels=lts.labels)


def verify_infinite_binary(sys: System, lts: Lts, depth: int) -> Verdict:
    """Compare the net's behaviour with ``lts`` up to ``depth`` firings.

    The witness of a failure is a dict describing the first divergence met
    in breadth-first order: the LTS state, the net marking reached by the
    same firing sequence, and the labels enabled on either side.
    """
    if depth < 1:
        raise ValueError("depth must be positive")
    rg, markings = explore(sys, depth=depth)
    left = truncated_lts(lts, depth)
    fwd = {left.initial: rg.initial}
    bwd = {rg.initial: left.initial}
    dist = {left.initial: 0}
    todo = deque([left.initial])
    while todo:
        s = todo.popleft()
        m = fwd[s]
        if dist[s] >= depth:
            continue
        ls, ms = set(left.succ[s]), set(rg.succ[m])
        if ls != ms:
            return Verdict(False, {
                "state": s, "marking": m, "depth": dist[s],
                "lts_only": sorted(ls - ms), "net_only": sorted(ms - ls),
            })
        for label in sorted(ls):
            ds, = left.succ[s][label]
            dm, = rg.succ[m][label]
            if ds in fwd or dm in bwd:
                if fwd.get(ds) != dm or bwd.get(dm) != ds:
                    return Verdict(False, {
                        "state": s, "marking": m, "depth": dist[s], "label": label,
                        "conflict": (ds, dm),
                    })
                continue
            fwd[ds], bwd[dm] = dm, ds
            dist[ds] = dist[s] + 1
            todo.append(ds)
    return Verdict(True)
