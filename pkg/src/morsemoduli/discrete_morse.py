"""Discrete functions on complexes and the discrete Morse predicates.

Values are exact rationals throughout, so every comparison that decides
membership in a region is exact.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

import networkx as nx

from .cw_complex import Complex, ComplexError, edge_key
from .values import format_value, parse_value


class MorseError(ValueError):
    """Raised when an operation needs a discrete Morse function and gets none."""


class DiscreteFunction(Mapping[str, Fraction]):
    """An exact rational valuation of cells, i.e. a point of R^X."""

    __slots__ = ("_values",)

    def __init__(self, values: Mapping[str, object]) -> None:
        self._values = {str(k): parse_value(v) for k, v in values.items()}

    def __getitem__(self, cell: str) -> Fraction:
        return self._values[cell]

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self._values))

    def __len__(self) -> int:
        return len(self._values)

    def __repr__(self) -> str:
        body = ", ".join(f"{k}:{format_value(self._values[k])}" for k in self)
        return f"DiscreteFunction({body})"

    def __eq__(self, other: object) -> bool:
        if isinstance(other, DiscreteFunction):
            return self._values == other._values
        if isinstance(other, Mapping):
            try:
                return self._values == {k: parse_value(v) for k, v in other.items()}
            except (TypeError, ValueError):
                return False
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._values.items()))

    def to_dict(self) -> dict[str, str]:
        return {k: format_value(self._values[k]) for k in self}


def as_function(X: Complex, f: Mapping[str, object]) -> DiscreteFunction:
    """Validate that ``f`` is total on ``X`` and defined nowhere else."""
    g = f if isinstance(f, DiscreteFunction) else DiscreteFunction(f)
    missing = [c for c in X.ids if c not in g]
    if missing:
        raise ComplexError(f"function is not defined on cell {missing[0]!r}")
    extra = sorted(set(g) - set(X.ids))
    if extra:
        raise ComplexError(f"function assigns a value to unknown cell {extra[0]!r}")
    return g


def dimension_function(X: Complex) -> DiscreteFunction:
    return DiscreteFunction({c.id: c.dim for c in X.cells})


# -- the Morse predicate --------------------------------------------------


@dataclass(frozen=True)
class MorseCheck:
    """Outcome of :func:`is_discrete_morse`; falsy on failure.

    ``condition`` is 1 (too many non-increasing cofaces), 2 (too many
    non-decreasing faces) or 3 (an irregular cover that does not increase).
    """

    ok: bool
    cell: str | None = None
    condition: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_discrete_morse(X: Complex, f: Mapping[str, object]) -> MorseCheck:
    f = as_function(X, f)
    for cell in X.ids:
        v = f[cell]
        ups = X.coface1(cell)
        if sum(1 for t in ups if f[t] <= v) > 1:
            return MorseCheck(False, cell, 1)
        downs = X.face1(cell)
        if sum(1 for g in downs if f[g] >= v) > 1:
            return MorseCheck(False, cell, 2)
        for g in sorted(downs):
            if not X.is_regular_cover(g, cell) and f[g] >= v:
                return MorseCheck(False, cell, 3)
    return MorseCheck(True)


# -- matchings --------------------------------------------------------------


@dataclass(frozen=True)
class Matching:
    """A set of Hasse edges ``(lower, upper)`` to be reversed."""

    pairs: frozenset[tuple[str, str]]

    def __init__(self, pairs: Iterable[tuple[str, str]] = ()) -> None:
        object.__setattr__(self, "pairs", frozenset((str(a), str(b)) for a, b in pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[tuple[str, str]]:
        return iter(sorted(self.pairs))

    def __contains__(self, pair: object) -> bool:
        return pair in self.pairs

    @property
    def matched_cells(self) -> set[str]:
        return {c for p in self.pairs for c in p}

    def is_partial_matching(self) -> bool:
        seen = Counter(c for p in self.pairs for c in p)
        return all(n == 1 for n in seen.values())

    def partner(self, cell: str) -> str | None:
        for a, b in self.pairs:
            if a == cell:
                return b
            if b == cell:
                return a
        return None

    def keys(self) -> list[str]:
        return [edge_key(a, b) for a, b in self]


def _require_morse(X: Complex, f: Mapping[str, object]) -> DiscreteFunction:
    f = as_function(X, f)
    check = is_discrete_morse(X, f)
    if not check:
        raise MorseError(
            f"not a discrete Morse function: condition ({check.condition}) fails at {check.cell!r}"
        )
    return f


def induced_matching(X: Complex, f: Mapping[str, object]) -> Matching:
    """Covers ``lower < upper`` with ``f(upper) <= f(lower)``."""
    f = _require_morse(X, f)
    m = Matching((lo, up) for lo, up in X.edges if f[up] <= f[lo])
    if not m.is_partial_matching():
        # cannot happen on genuinely regular complexes
        raise MorseError("induced pairs do not form a partial matching")
    return m


def critical_cells(X: Complex, f: Mapping[str, object]) -> dict[int, list[str]]:
    matched = induced_matching(X, f).matched_cells
    out: dict[int, list[str]] = {k: [] for k in range(X.dimension + 1)}
    for cell in X.ids:
        if cell not in matched:
            out[X.dim(cell)].append(cell)
    return out


def _diagram(X: Complex, m: Matching) -> nx.DiGraph:
    G = nx.DiGraph()
    G.add_nodes_from(X.ids)
    for lo, up in X.edges:
        if (lo, up) in m:
            G.add_edge(lo, up)
        else:
            G.add_edge(up, lo)
    return G


def hasse_diagram(X: Complex) -> nx.DiGraph:
    """D(X) with edges pointing from each cell to its facets."""
    return _diagram(X, Matching())


def modified_hasse(X: Complex, f: Mapping[str, object]) -> nx.DiGraph:
    return _diagram(X, induced_matching(X, f))


def is_acyclic_matching(X: Complex, m: Matching) -> bool:
    """Partial matching on covers whose reversal leaves D(X) acyclic."""
    for lo, up in m.pairs:
        if not X.is_cover(lo, up):
            raise ComplexError(f"{edge_key(lo, up)} is not a cover")
    if not m.is_partial_matching():
        return False
    return nx.is_directed_acyclic_graph(_diagram(X, m))


# -- Morse-Benedetti functions ----------------------------------------------


def _semi_injective_and_generic(X: Complex, f: DiscreteFunction) -> bool:
    fibres: dict[Fraction, list[str]] = {}
    for c in X.ids:
        fibres.setdefault(f[c], []).append(c)
    for cells in fibres.values():
        if len(cells) > 2:
            return False
        if len(cells) == 2 and not X.comparable(*cells):
            return False
    return True


def _require_regular(X: Complex) -> None:
    if not X.regular:
        raise ComplexError("Morse-Benedetti predicates need a regular complex")


def is_morse_benedetti(X: Complex, f: Mapping[str, object]) -> bool:
    _require_regular(X)
    f = as_function(X, f)
    for c in X.ids:
        if any(f[g] > f[c] for g in X.face(c)):
            return False
    return _semi_injective_and_generic(X, f)


def is_weak_morse_benedetti(X: Complex, f: Mapping[str, object]) -> bool:
    _require_regular(X)
    f = as_function(X, f)
    return bool(is_discrete_morse(X, f)) and _semi_injective_and_generic(X, f)


# -- the contracting homotopy ---------------------------------------------


def straight_line(X: Complex, f: Mapping[str, object], t: object) -> DiscreteFunction:
    """Pointwise ``(1 - t) f + t dim``."""
    t = parse_value(t)
    if not 0 <= t <= 1:
        raise ValueError(f"t must lie in [0, 1], got {format_value(t)}")
    f = as_function(X, f)
    return DiscreteFunction({c.id: (1 - t) * f[c.id] + t * c.dim for c in X.cells})


# -- gradient paths -----------------------------------------------------------


@dataclass(frozen=True, order=True)
class GradientPath:
    """Cells ``tau, v0, e1, v1, ...``: a critical edge, then alternately a
    vertex reached by an unmatched face step and the edge it is matched to.
    The last cell is a critical vertex."""

    steps: tuple[str, ...]

    @property
    def source(self) -> str:
        return self.steps[0]

    @property
    def target(self) -> str:
        return self.steps[-1]


def gradient_paths_from(X: Complex, f: Mapping[str, object], tau: str) -> list[GradientPath]:
    """The maximal gradient paths in the 1-skeleton leaving the critical edge ``tau``."""
    _require_regular(X)
    m = induced_matching(X, f)
    if X.dim(tau) != 1:
        raise MorseError(f"{tau!r} is not a 1-cell")
    if tau in m.matched_cells:
        raise MorseError(f"{tau!r} is not critical")
    up_partner = {lo: up for lo, up in m.pairs if X.dim(lo) == 0}
    paths = []
    for v in sorted(X.face1(tau)):
        steps = [tau, v]
        while v in up_partner:
            e = up_partner[v]
            (w,) = X.face1(e) - {v}
            steps += [e, w]
            v = w
        paths.append(GradientPath(tuple(steps)))
    return sorted(paths)
