"""Exact rectangular assignment (Hungarian method with potentials).

Costs are exact rationals, so the minimum is exact too.  Floating point
solvers such as ``scipy.optimize.linear_sum_assignment`` serve as test
oracles only.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def min_assignment(cost: Sequence[Sequence[Fraction]]) -> tuple[Fraction, list[int]]:
    """Assign every row to a distinct column at minimum total cost.

    Requires ``rows <= columns``.  Returns the total and ``cols[i]``, the
    column of row ``i``.
    """
    n = len(cost)
    if n == 0:
        return Fraction(0), []
    m = len(cost[0])
    if any(len(row) != m for row in cost):
        raise ValueError("cost matrix is ragged")
    if n > m:
        raise ValueError("need at least as many columns as rows")

    # 1-based arrays; column 0 is a sentinel
    u = [Fraction(0)] * (n + 1)
    v = [Fraction(0)] * (m + 1)
    match = [0] * (m + 1)  # match[j] = row assigned to column j
    way = [0] * (m + 1)
    for i in range(1, n + 1):
        match[0] = i
        j0 = 0
        minv: list[Fraction | None] = [None] * (m + 1)
        used = [False] * (m + 1)
        while True:
            used[j0] = True
            i0 = match[j0]
            delta: Fraction | None = None
            j1 = 0
            for j in range(1, m + 1):
                if used[j]:
                    continue
                cur = Fraction(cost[i0 - 1][j - 1]) - u[i0] - v[j]
                if minv[j] is None or cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if delta is None or minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            assert delta is not None
            for j in range(m + 1):
                if used[j]:
                    u[match[j]] += delta
                    v[j] -= delta
                elif minv[j] is not None:
                    minv[j] -= delta
            j0 = j1
            if match[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match[j0] = match[j1]
            j0 = j1

    cols = [0] * n
    for j in range(1, m + 1):
        if match[j]:
            cols[match[j] - 1] = j - 1
    total = sum((Fraction(cost[i][cols[i]]) for i in range(n)), Fraction(0))
    return total, cols
