"""Exact rational linear algebra for the tiny systems met here.

Floating point is avoided on purpose: primality of semiflows and lattice
membership are decided on exact values.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def rref(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : A x = 0} over the rationals."""
    m, pivots = rref([[Fraction(x) for x in r] for r in rows], ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(m, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def feasible_equalities(A: Sequence[Sequence[int]], b: Sequence[int]) -> bool:
    """Is there x >= 0 with A x = b?  Phase one of the simplex method with
    Bland's rule, in exact arithmetic."""
    m, n = len(A), len(A[0]) if A else 0
    rows = []
    for i in range(m):
        sign = -1 if b[i] < 0 else 1
        rows.append([Fraction(sign * a) for a in A[i]] + [Fraction(1 if j == i else 0) for j in range(m)]
                    + [Fraction(sign * b[i])])
    basis = [n + i for i in range(m)]
    width = n + m
    # objective: minimise the sum of artificials; reduced costs row
    cost = [-sum(r[j] for r in rows) for j in range(n)] + [Fraction(0)] * m + [-sum(r[-1] for r in rows)]
    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        best, leave = None, None
        for i, r in enumerate(rows):
            if r[enter] > 0:
                ratio = r[-1] / r[enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:  # cannot happen in phase one (bounded below by zero)
            break
        piv = rows[leave][enter]
        rows[leave] = [x / piv for x in rows[leave]]
        for i in range(m):
            if i != leave and rows[i][enter] != 0:
                f = rows[i][enter]
                rows[i] = [a - f * c for a, c in zip(rows[i], rows[leave])]
        f = cost[enter]
        cost = [a - f * c for a, c in zip(cost, rows[leave])]
        basis[leave] = enter
    return cost[-1] == 0


def in_convex_hull(x: Sequence[int], points: Sequence[Sequence[int]]) -> bool:
    if not points:
        return False
    d = len(x)
    A = [[p[k] for p in points] for k in range(d)] + [[1] * len(points)]
    return feasible_equalities(A, list(x) + [1])
