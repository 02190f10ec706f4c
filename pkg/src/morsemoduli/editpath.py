"""Search over edit sequences with continuously varying intermediate values.

An edit sequence between two valued shapes ``A`` and ``B`` fixes a chain of
shapes ``A = S_0, S_1, ..., S_n = B`` and, for every step, an embedding of
the smaller shape into the larger one.  Once those combinatorial choices are
fixed, every step cost is the euclidean norm of an affine function of the
intermediate values, so minimizing the total cost is a small second order
cone program.  The outer search enumerates the combinatorial choices.

The engine is generic: merge trees and barcodes plug in through a
:class:`ShapeFamily`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Hashable, Protocol, Sequence

import clarabel
import numpy as np
from scipy import sparse

from .values import sqrt_sum

#: fill rule for a coordinate of the larger shape outside the image:
#: ("small", k) copies coordinate k of the smaller valuation,
#: ("big", j) copies coordinate j of the larger valuation itself.
Fill = tuple[str, int]


@dataclass(frozen=True)
class Embedding:
    """An inclusion of a smaller shape into a larger one.

    ``image[k]`` is the coordinate of the larger shape hit by coordinate
    ``k``; ``fill`` has one entry per coordinate of the larger shape and is
    ``None`` on the image.
    """

    image: tuple[int, ...]
    fill: tuple[Fill | None, ...]


class ShapeFamily(Protocol):
    def size(self, shape: Hashable) -> int: ...

    def order_pairs(self, shape: Hashable) -> Sequence[tuple[int, int]]:
        """Pairs ``(i, j)`` with the constraint ``x_i <= x_j``."""

    def shapes(self, max_size: int) -> Sequence[Hashable]:
        """All shapes with at most ``max_size`` coordinates, in a fixed order."""

    def automorphisms(self, shape: Hashable) -> Sequence[tuple[int, ...]]: ...

    def embeddings(self, small: Hashable, big: Hashable) -> Sequence[Embedding]:
        """All embeddings; for equal shapes these are the automorphisms."""

    def related(self, small: Hashable, big: Hashable) -> bool: ...


Radicands = tuple[Fraction, ...]


@dataclass(frozen=True)
class Distance:
    """A sum of square roots, kept exact as its list of radicands."""

    radicands: Radicands = ()

    @property
    def value(self) -> float:
        return sqrt_sum(self.radicands)

    def __float__(self) -> float:
        return self.value

    @property
    def is_zero(self) -> bool:
        return all(r == 0 for r in self.radicands)


@dataclass(frozen=True)
class PathStep:
    shape: Hashable
    values: tuple[Fraction, ...]


@dataclass
class SearchResult:
    distance: Distance
    exact: bool
    path: list[PathStep] = field(default_factory=list)
    evaluations: int = 0
    truncated: bool = False
    level_values: tuple[float, ...] = ()

    @property
    def value(self) -> float:
        return self.distance.value


# -- single step costs --------------------------------------------------------


def residuals(
    emb: Embedding, small: Sequence, big: Sequence
) -> list:
    """Entries of ``eta_*(small, big) - big`` in the larger coordinates."""
    out = []
    pre = {c: k for k, c in enumerate(emb.image)}
    for c in range(len(big)):
        if c in pre:
            out.append(small[pre[c]] - big[c])
        else:
            kind, idx = emb.fill[c]
            src = small[idx] if kind == "small" else big[idx]
            out.append(src - big[c])
    return out


def step_radicand(emb: Embedding, small: Sequence[Fraction], big: Sequence[Fraction]) -> Fraction:
    return sum((r * r for r in residuals(emb, small, big)), Fraction(0))


def elementary(
    family: ShapeFamily,
    shape_a: Hashable,
    values_a: Sequence[Fraction],
    shape_b: Hashable,
    values_b: Sequence[Fraction],
) -> tuple[Fraction, Embedding] | None:
    """Cheapest single step, or ``None`` if the shapes are not related."""
    if family.size(shape_a) <= family.size(shape_b):
        small, vs, big, vb = shape_a, values_a, shape_b, values_b
    else:
        small, vs, big, vb = shape_b, values_b, shape_a, values_a
    if not family.related(small, big):
        return None
    best = None
    for emb in family.embeddings(small, big):
        r = step_radicand(emb, vs, vb)
        if best is None or r < best[0]:
            best = (r, emb)
    return best


# -- orbit reduction -----------------------------------------------------------


def _reduce_big(embs: Sequence[Embedding], auts: Sequence[tuple[int, ...]]) -> list[Embedding]:
    seen: set[tuple[int, ...]] = set()
    out = []
    for e in embs:
        key = min(tuple(g[c] for c in e.image) for g in auts)
        if key not in seen:
            seen.add(key)
            out.append(e)
    return out


def _reduce_small(embs: Sequence[Embedding], auts: Sequence[tuple[int, ...]]) -> list[Embedding]:
    seen: set[tuple[int, ...]] = set()
    out = []
    for e in embs:
        key = min(tuple(e.image[h[k]] for k in range(len(h))) for h in auts)
        if key not in seen:
            seen.add(key)
            out.append(e)
    return out


# -- the cone program ------------------------------------------------------------


class _Affine:
    """Sparse affine expression ``sum coef * z[var] + const``."""

    __slots__ = ("terms", "const")

    def __init__(self, terms: dict[int, float] | None = None, const: float = 0.0) -> None:
        self.terms = terms or {}
        self.const = const

    def __sub__(self, other: "_Affine") -> "_Affine":
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0.0) - v
        return _Affine(terms, self.const - other.const)


def _solve(
    n_vars: int,
    steps: list[list[_Affine]],
    order: list[tuple[int, int]],
) -> np.ndarray | None:
    """Minimize the sum of step norms subject to ``z_i <= z_j`` for ``order``."""
    n_t = len(steps)
    n = n_vars + n_t
    rows, cols, data, b = [], [], [], []
    r = 0
    for i, j in order:
        rows += [r, r]
        cols += [i, j]
        data += [1.0, -1.0]
        b.append(0.0)
        r += 1
    cones = []
    if order:
        cones.append(clarabel.NonnegativeConeT(len(order)))
    for s, res in enumerate(steps):
        rows.append(r)
        cols.append(n_vars + s)
        data.append(-1.0)
        b.append(0.0)
        r += 1
        for expr in res:
            for k, v in expr.terms.items():
                if v:
                    rows.append(r)
                    cols.append(k)
                    data.append(-v)
            b.append(expr.const)
            r += 1
        cones.append(clarabel.SecondOrderConeT(1 + len(res)))
    A = sparse.csc_matrix((data, (rows, cols)), shape=(r, n))
    P = sparse.csc_matrix((n, n))
    q = np.zeros(n)
    q[n_vars:] = 1.0
    settings = clarabel.DefaultSettings()
    settings.verbose = False
    settings.tol_gap_abs = 1e-10
    settings.tol_gap_rel = 1e-10
    settings.tol_feas = 1e-10
    solver = clarabel.DefaultSolver(P, q, A, np.array(b), cones, settings)
    sol = solver.solve()
    status = str(sol.status)
    if "Solved" not in status:
        return None
    return np.asarray(sol.x[:n_vars])


def _rationalize(x: float, denominator: int = 10**6) -> Fraction:
    return Fraction(x).limit_denominator(denominator)


def _repair(values: list[Fraction], order: Sequence[tuple[int, int]]) -> list[Fraction]:
    """Raise upper coordinates until every ``x_i <= x_j`` holds."""
    changed = True
    while changed:
        changed = False
        for i, j in order:
            if values[j] < values[i]:
                values[j] = values[i]
                changed = True
    return values


# -- the search ------------------------------------------------------------------


@dataclass
class _Program:
    shapes: tuple[Hashable, ...]
    embeddings: tuple[Embedding, ...]


def _candidate_programs(
    family: ShapeFamily,
    start: Hashable,
    end: Hashable,
    pool: Sequence[Hashable],
    n_steps: int,
):
    """Shape chains with ``n_steps`` steps and orbit-reduced embeddings."""
    for middle in product(pool, repeat=n_steps - 1):
        chain = (start, *middle, end)
        # three equal shapes in a row compose into one isometric step
        if any(chain[i] == chain[i + 1] == chain[i + 2] for i in range(n_steps - 1)):
            continue
        options = []
        ok = True
        for i in range(n_steps):
            a, b = chain[i], chain[i + 1]
            a_small = family.size(a) <= family.size(b)
            small, big = (a, b) if a_small else (b, a)
            if not family.related(small, big):
                ok = False
                break
            embs = list(family.embeddings(small, big))
            if i + 1 < n_steps:
                # the next shape is a free intermediate: quotient by its symmetries
                reps = getattr(family, "representatives", None)
                if reps is not None:
                    embs = list(reps(small, big))
                elif a_small:
                    embs = _reduce_big(embs, family.automorphisms(b))
                else:
                    embs = _reduce_small(embs, family.automorphisms(b))
            options.append(embs)
        if not ok:
            continue
        for choice in product(*options):
            yield _Program(chain, tuple(choice))


def search(
    family: ShapeFamily,
    start: Hashable,
    start_values: Sequence[Fraction],
    end: Hashable,
    end_values: Sequence[Fraction],
    max_size: int,
    max_steps: int,
    max_evals: int = 200_000,
) -> SearchResult:
    """Cheapest edit sequence with at most ``max_steps`` steps whose
    intermediate shapes have at most ``max_size`` coordinates.

    The result is flagged exact only when the bound is zero.
    """
    if max_steps < 1 or max_size < 1:
        raise ValueError("budgets must be positive")
    start_values = tuple(Fraction(v) for v in start_values)
    end_values = tuple(Fraction(v) for v in end_values)
    pool = list(family.shapes(max_size))

    best: tuple[float, Distance, list[PathStep]] | None = None
    if start == end and start_values == end_values:
        return SearchResult(Distance((Fraction(0),)), True, [PathStep(start, start_values)])

    evals = 0
    truncated = False
    level_best: list[float] = []
    for n_steps in range(1, max_steps + 1):
        for prog in _candidate_programs(family, start, end, pool, n_steps):
            if evals >= max_evals:
                truncated = True
                break
            evals += 1
            found = _evaluate(family, prog, start_values, end_values)
            if found is None:
                continue
            dist, path = found
            if best is None or dist.value < best[0] - 1e-12:
                best = (dist.value, dist, path)
        level_best.append(math.inf if best is None else best[0])
        if truncated:
            break
        if best is not None and best[1].is_zero:
            break

    if best is None:
        return SearchResult(Distance(()), False, [], evals, truncated, tuple(level_best))
    # A zero-length path is the only certificate that holds for every step
    # budget: free structural jumps let longer sequences keep improving, so a
    # plateau across step counts proves nothing.
    exact = best[1].is_zero
    return SearchResult(best[1], exact, best[2], evals, truncated, tuple(level_best))


def _evaluate(
    family: ShapeFamily,
    prog: _Program,
    start_values: tuple[Fraction, ...],
    end_values: tuple[Fraction, ...],
) -> tuple[Distance, list[PathStep]] | None:
    chain = prog.shapes
    n_steps = len(chain) - 1
    # variable layout: one block per intermediate shape
    offsets = []
    n_vars = 0
    for s in chain[1:-1]:
        offsets.append(n_vars)
        n_vars += family.size(s)

    def expr(pos: int) -> list[_Affine]:
        if pos == 0:
            return [_Affine(const=float(v)) for v in start_values]
        if pos == len(chain) - 1:
            return [_Affine(const=float(v)) for v in end_values]
        off = offsets[pos - 1]
        return [_Affine({off + k: 1.0}) for k in range(family.size(chain[pos]))]

    def step_exprs(i: int, vals) -> list:
        a, b = vals[i], vals[i + 1]
        if family.size(chain[i]) <= family.size(chain[i + 1]):
            return residuals(prog.embeddings[i], a, b)
        return residuals(prog.embeddings[i], b, a)

    if n_vars == 0:
        # every intermediate shape is empty
        vals = [list(start_values)] + [[] for _ in chain[1:-1]] + [list(end_values)]
        rad = tuple(step_radicand_from(step_exprs(i, vals)) for i in range(n_steps))
        return Distance(rad), [PathStep(s, tuple(v)) for s, v in zip(chain, vals)]

    affine = [expr(p) for p in range(len(chain))]
    steps = [step_exprs(i, affine) for i in range(n_steps)]
    order = []
    for pos, s in enumerate(chain[1:-1]):
        off = offsets[pos]
        order += [(off + i, off + j) for i, j in family.order_pairs(s)]
    x = _solve(n_vars, steps, order)
    if x is None:
        return None

    exact_vals: list[list[Fraction]] = [list(start_values)]
    for pos, s in enumerate(chain[1:-1]):
        off = offsets[pos]
        block = [_rationalize(float(v)) for v in x[off: off + family.size(s)]]
        exact_vals.append(_repair(block, family.order_pairs(s)))
    exact_vals.append(list(end_values))
    rad = tuple(step_radicand_from(step_exprs(i, exact_vals)) for i in range(n_steps))
    path = [PathStep(s, tuple(v)) for s, v in zip(chain, exact_vals)]
    return Distance(rad), path


def step_radicand_from(res: Sequence[Fraction]) -> Fraction:
    return sum((r * r for r in res), Fraction(0))
