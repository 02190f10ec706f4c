"""The Morse arrangement of a complex and its combinatorics.

The Morse arrangement has one hyperplane ``x_lower = x_upper`` per Hasse edge,
oriented so that ``x_lower < x_upper`` is the positive side.  It is the graphic
arrangement of the (undirected) Hasse graph, so faces are described by
contracting the zero edges and orienting the rest; regions are acyclic
orientations.  Nothing here is geometric: points are produced on demand by a
longest-path leveling.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Iterator, Mapping

import networkx as nx
from scipy.cluster.hierarchy import DisjointSet

from .cw_complex import Complex, ComplexError, connected_components, edge_key
from .discrete_morse import (
    DiscreteFunction,
    Matching,
    as_function,
    is_acyclic_matching,
    is_discrete_morse,
)

DEFAULT_MAX_EDGES = 24
_SIGNS = "+-0"
_ALIASES = {"+": "+", "-": "-", "−": "-", "0": "0"}


class EnumerationGuardError(ValueError):
    """Raised when an enumeration would exceed its size guard."""


@dataclass(frozen=True)
class SignVector:
    """A covector of the Morse arrangement, one sign per Hasse edge.

    ``edges`` are ``(lower, upper)`` pairs in the complex's edge order and
    ``signs`` is a string over ``+``, ``-`` and ``0`` of the same length.
    """

    edges: tuple[tuple[str, str], ...]
    signs: str

    def __post_init__(self) -> None:
        if len(self.edges) != len(self.signs):
            raise ValueError("one sign per edge is required")
        bad = set(self.signs) - set(_SIGNS)
        if bad:
            raise ValueError(f"invalid sign {sorted(bad)[0]!r}")

    def __getitem__(self, edge: tuple[str, str]) -> str:
        return self.signs[self.edges.index(edge)]

    def __len__(self) -> int:
        return len(self.signs)

    def items(self) -> Iterator[tuple[tuple[str, str], str]]:
        return zip(self.edges, self.signs)

    @property
    def zero_free(self) -> bool:
        return "0" not in self.signs

    def to_dict(self) -> dict[str, str]:
        return {edge_key(lo, up): s for (lo, up), s in self.items()}

    @classmethod
    def from_dict(cls, X: Complex, signs: Mapping[str, str]) -> "SignVector":
        keys = {edge_key(lo, up): (lo, up) for lo, up in X.edges}
        unknown = sorted(set(signs) - set(keys))
        if unknown:
            raise ComplexError(f"sign given for unknown edge {unknown[0]!r}")
        missing = sorted(set(keys) - set(signs))
        if missing:
            raise ComplexError(f"no sign given for edge {missing[0]!r}")
        out = []
        for lo, up in X.edges:
            s = signs[edge_key(lo, up)]
            if s not in _ALIASES:
                raise ComplexError(f"invalid sign {s!r} for edge {edge_key(lo, up)!r}")
            out.append(_ALIASES[s])
        return cls(tuple(X.edges), "".join(out))


def _sign(a, b) -> str:
    return "+" if a < b else "-" if a > b else "0"


def sign_vector(X: Complex, f: Mapping[str, object]) -> SignVector:
    f = as_function(X, f)
    return SignVector(tuple(X.edges), "".join(_sign(f[lo], f[up]) for lo, up in X.edges))


def _check_indexed(X: Complex, v: SignVector) -> None:
    if v.edges != tuple(X.edges):
        raise ComplexError("sign vector is not indexed by the covers of this complex")


def _face_digraph(X: Complex, v: SignVector) -> nx.DiGraph | None:
    """Contract zero edges and orient the rest from smaller to larger value.

    Returns ``None`` when a nonzero edge ends up inside one contracted block.
    """
    ds = DisjointSet(X.ids)
    for (lo, up), s in v.items():
        if s == "0":
            ds.merge(lo, up)
    G = nx.DiGraph()
    G.add_nodes_from(ds[c] for c in X.ids)
    for (lo, up), s in v.items():
        if s == "0":
            continue
        a, b = ds[lo], ds[up]
        if a == b:
            return None
        G.add_edge(a, b) if s == "+" else G.add_edge(b, a)
    return G


def is_realizable(X: Complex, v: SignVector) -> bool:
    """Whether some point of R^X has covector ``v``."""
    _check_indexed(X, v)
    G = _face_digraph(X, v)
    return G is not None and nx.is_directed_acyclic_graph(G)


def witness_point(X: Complex, v: SignVector) -> DiscreteFunction | None:
    """An integer point with covector ``v``, or ``None`` if there is none.

    Each contracted block gets the length of the longest directed path ending
    in it, which separates every oriented edge and ties every zero edge.
    """
    _check_indexed(X, v)
    G = _face_digraph(X, v)
    if G is None or not nx.is_directed_acyclic_graph(G):
        return None
    level: dict[str, int] = {}
    for node in nx.topological_sort(G):
        level[node] = max((level[p] + 1 for p in G.predecessors(node)), default=0)
    ds = DisjointSet(X.ids)
    for (lo, up), s in v.items():
        if s == "0":
            ds.merge(lo, up)
    return DiscreteFunction({c: level[ds[c]] for c in X.ids})


def is_morse_region(X: Complex, v: SignVector) -> bool:
    """Whether the open region with covector ``v`` consists of Morse functions."""
    _check_indexed(X, v)
    if not v.zero_free:
        raise ValueError("regions are open: sign vector has zero entries")
    down_minus: dict[str, int] = {}
    up_minus: dict[str, int] = {}
    for (lo, up), s in v.items():
        if s == "-":
            if not X.is_regular_cover(lo, up):
                return False
            up_minus[lo] = up_minus.get(lo, 0) + 1
            down_minus[up] = down_minus.get(up, 0) + 1
    return all(n <= 1 for n in up_minus.values()) and all(n <= 1 for n in down_minus.values())


def is_essential(X: Complex, f: Mapping[str, object]) -> bool:
    """Membership in the closure of the critical region intersected with the
    Morse functions: no negative sign, and ``f`` itself is Morse."""
    return "-" not in sign_vector(X, f).signs and bool(is_discrete_morse(X, f))


# -- region enumeration ---------------------------------------------------


def _reaches(adj: dict[str, set[str]], src: str, dst: str) -> bool:
    stack, seen = [src], {src}
    while stack:
        n = stack.pop()
        if n == dst:
            return True
        for m in adj[n]:
            if m not in seen:
                seen.add(m)
                stack.append(m)
    return False


def enumerate_regions(
    X: Complex,
    morse_only: bool = False,
    max_edges: int = DEFAULT_MAX_EDGES,
    prefix: str = "",
) -> Iterator[SignVector]:
    """Lazily yield the zero-free realizable sign vectors.

    Output is in lexicographic order with ``+`` before ``-``.  Passing a
    ``prefix`` restricts to regions whose first signs are fixed, which lets
    callers split the enumeration into independent parts.
    """
    edges = tuple(X.edges)
    if len(edges) > max_edges:
        raise EnumerationGuardError(
            f"{len(edges)} hyperplanes exceed the enumeration guard of {max_edges}"
        )
    if len(prefix) > len(edges) or set(prefix) - {"+", "-"}:
        raise ValueError(f"invalid prefix {prefix!r}")

    adj: dict[str, set[str]] = {c: set() for c in X.ids}
    up_minus = {c: 0 for c in X.ids}
    down_minus = {c: 0 for c in X.ids}
    regular = [X.is_regular_cover(lo, up) for lo, up in edges]
    chosen: list[str] = []

    def place(i: int, s: str) -> bool:
        lo, up = edges[i]
        a, b = (lo, up) if s == "+" else (up, lo)
        if _reaches(adj, b, a):
            return False
        if morse_only and s == "-":
            if not regular[i] or up_minus[lo] or down_minus[up]:
                return False
            up_minus[lo] += 1
            down_minus[up] += 1
        adj[a].add(b)
        chosen.append(s)
        return True

    def unplace(i: int) -> None:
        lo, up = edges[i]
        s = chosen.pop()
        a, b = (lo, up) if s == "+" else (up, lo)
        adj[a].discard(b)
        if morse_only and s == "-":
            up_minus[lo] -= 1
            down_minus[up] -= 1

    def walk(i: int) -> Iterator[SignVector]:
        if i == len(edges):
            yield SignVector(edges, "".join(chosen))
            return
        options = prefix[i] if i < len(prefix) else "+-"
        for s in options:
            if place(i, s):
                yield from walk(i + 1)
                unplace(i)

    yield from walk(0)


def _count_part(args: tuple[Complex, bool, int, str]) -> int:
    X, morse_only, max_edges, prefix = args
    return sum(1 for _ in enumerate_regions(X, morse_only, max_edges, prefix))


def count_regions(
    X: Complex,
    morse_only: bool = False,
    max_edges: int = DEFAULT_MAX_EDGES,
    jobs: int = 1,
) -> int:
    """Number of regions, optionally split over ``jobs`` worker processes."""
    n = len(X.edges)
    if jobs <= 1 or n < 4:
        return _count_part((X, morse_only, max_edges, ""))
    if n > max_edges:
        raise EnumerationGuardError(
            f"{n} hyperplanes exceed the enumeration guard of {max_edges}"
        )
    depth = min(n, max(1, (4 * jobs - 1).bit_length()))
    parts = ["".join(p) for p in product("+-", repeat=depth)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return sum(pool.map(_count_part, [(X, morse_only, max_edges, p) for p in parts]))


def essential_rank(X: Complex) -> int:
    """Rank of the Morse arrangement: ``|X|`` minus the number of components."""
    return len(X) - len(connected_components(X))


def facets_of_critical_region(X: Complex) -> list[tuple[str, str]]:
    """Covers whose hyperplane supports a facet of the all-positive region.

    An edge ``lower < upper`` is a facet exactly when no other directed path
    runs from ``lower`` to ``upper`` in the upward Hasse diagram.
    """
    G = nx.DiGraph()
    G.add_nodes_from(X.ids)
    G.add_edges_from(X.edges)
    out = []
    for lo, up in X.edges:
        G.remove_edge(lo, up)
        if not nx.has_path(G, lo, up):
            out.append((lo, up))
        G.add_edge(lo, up)
    return out


# -- matchings and flats ------------------------------------------------------


def matching_complex(X: Complex, max_card: int | None = None) -> Iterator[Matching]:
    """Nonempty acyclic matchings on regular covers, each yielded once.

    Acyclic matchings are closed under taking subsets, so the search prunes
    at the first cycle.  Order: depth first over the sorted cover list.
    """
    pool = [(lo, up) for lo, up in X.edges if X.is_regular_cover(lo, up)]
    limit = len(pool) if max_card is None else max_card
    if limit < 0:
        raise ValueError("max_card must be non-negative")

    def walk(start: int, current: list[tuple[str, str]], used: set[str]) -> Iterator[Matching]:
        if len(current) == limit:
            return
        for i in range(start, len(pool)):
            lo, up = pool[i]
            if lo in used or up in used:
                continue
            candidate = Matching(current + [pool[i]])
            if not is_acyclic_matching(X, candidate):
                continue
            yield candidate
            yield from walk(i + 1, current + [pool[i]], used | {lo, up})

    yield from walk(0, [], set())


@dataclass(frozen=True)
class Flat:
    """An intersection of Morse hyperplanes, stored as the partition of cells
    into blocks that are forced to share a value."""

    blocks: frozenset[frozenset[str]]

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[str]]) -> "Flat":
        return cls(frozenset(frozenset(b) for b in blocks))

    def block_of(self, cell: str) -> frozenset[str]:
        for b in self.blocks:
            if cell in b:
                return b
        raise KeyError(cell)

    def contains_subspace(self, other: "Flat") -> bool:
        """Whether ``other`` lies inside this flat, i.e. every block of
        ``self`` sits inside a block of ``other``."""
        return all(any(b <= c for c in other.blocks) for b in self.blocks)

    def tight_edges(self, X: Complex) -> list[tuple[str, str]]:
        return [(lo, up) for lo, up in X.edges if up in self.block_of(lo)]

    def sorted_blocks(self) -> list[list[str]]:
        return sorted(sorted(b) for b in self.blocks)


def matching_to_flat(X: Complex, m: Matching) -> Flat:
    if not is_acyclic_matching(X, m):
        raise ValueError("not an acyclic matching")
    paired = m.matched_cells
    blocks = [set(p) for p in m.pairs] + [{c} for c in X.ids if c not in paired]
    return Flat.from_blocks(blocks)


def flat_of_point(X: Complex, f: Mapping[str, object]) -> Flat:
    """The smallest flat of the Morse arrangement containing ``f``."""
    v = sign_vector(X, f)
    ds = DisjointSet(X.ids)
    for (lo, up), s in v.items():
        if s == "0":
            ds.merge(lo, up)
    return Flat.from_blocks(ds.subsets())


# -- separating hyperplanes of the braid arrangement ------------------------


@dataclass(frozen=True, order=True)
class Separator:
    """A braid hyperplane ``x_a = x_b`` (``a < b`` as ids) crossed between two
    points; ``in_morse`` says whether it belongs to the Morse arrangement."""

    a: str
    b: str
    in_morse: bool

    def to_dict(self) -> dict[str, object]:
        return {"cells": [self.a, self.b], "morse": self.in_morse}


def braid_hyperplanes(X: Complex) -> list[tuple[str, str]]:
    return list(combinations(X.ids, 2))


def crossed_hyperplanes(
    X: Complex, f: Mapping[str, object], g: Mapping[str, object]
) -> list[Separator]:
    f = as_function(X, f)
    g = as_function(X, g)
    out = []
    for a, b in braid_hyperplanes(X):
        if _sign(f[a], f[b]) != _sign(g[a], g[b]):
            out.append(Separator(a, b, X.is_cover(a, b) or X.is_cover(b, a)))
    return out
