"""Regular (and mildly non-regular) CW complexes as face posets.

A :class:`Complex` stores its cells and the cover relations of the face
poset, i.e. the edges of the Hasse diagram.  Each cover carries a flag saying
whether the face relation is regular.  Complexes are immutable; every query
returns fresh containers.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

from scipy.cluster.hierarchy import DisjointSet


class ComplexError(ValueError):
    """Raised for malformed complexes and unknown cell ids."""


@dataclass(frozen=True, order=True)
class Cell:
    id: str
    dim: int


@dataclass(frozen=True, order=True)
class CoverRelation:
    lower: str
    upper: str
    regular: bool = True

    @property
    def key(self) -> str:
        return edge_key(self.lower, self.upper)


def edge_key(lower: str, upper: str) -> str:
    return f"{lower}<{upper}"


class Complex:
    """Face poset of a CW complex together with its Hasse diagram.

    Cells are indexed densely in ``(dim, id)`` order.  The constructor checks
    that dimensions strictly increase along covers, that regular complexes
    only have codimension one regular covers, that no cover is implied by
    transitivity, and that each cell sees faces of every lower dimension.
    These checks are necessary for a poset of regular CW type, not sufficient.
    """

    __slots__ = (
        "cells",
        "covers",
        "regular",
        "_index",
        "_dims",
        "_down",
        "_up",
        "_cover_flags",
        "_below",
    )

    def __init__(
        self,
        cells: Iterable[Cell],
        covers: Iterable[CoverRelation],
        regular: bool = True,
    ) -> None:
        cells = sorted(cells, key=lambda c: (c.dim, c.id))
        index: dict[str, int] = {}
        for i, cell in enumerate(cells):
            if not isinstance(cell.id, str) or not cell.id:
                raise ComplexError(f"cell ids must be non-empty strings: {cell.id!r}")
            if cell.dim < 0:
                raise ComplexError(f"negative dimension for cell {cell.id!r}")
            if cell.id in index:
                raise ComplexError(f"duplicate cell id {cell.id!r}")
            index[cell.id] = i

        covers = sorted(covers, key=lambda c: (c.lower, c.upper))
        dims = {c.id: c.dim for c in cells}
        flags: dict[tuple[str, str], bool] = {}
        down: dict[str, list[str]] = {c.id: [] for c in cells}
        up: dict[str, list[str]] = {c.id: [] for c in cells}
        for cov in covers:
            for end in (cov.lower, cov.upper):
                if end not in index:
                    raise ComplexError(f"cover {cov.key} references unknown cell {end!r}")
            if (cov.lower, cov.upper) in flags:
                raise ComplexError(f"duplicate cover {cov.key}")
            gap = dims[cov.upper] - dims[cov.lower]
            if gap < 1:
                raise ComplexError(f"cover {cov.key} does not raise the dimension")
            if regular and (gap != 1 or not cov.regular):
                raise ComplexError(f"regular complex has irregular cover {cov.key}")
            flags[(cov.lower, cov.upper)] = cov.regular
            down[cov.upper].append(cov.lower)
            up[cov.lower].append(cov.upper)

        self.cells: tuple[Cell, ...] = tuple(cells)
        self.covers: tuple[CoverRelation, ...] = tuple(covers)
        self.regular = bool(regular)
        self._index = index
        self._dims = dims
        self._down = {k: tuple(sorted(v)) for k, v in down.items()}
        self._up = {k: tuple(sorted(v)) for k, v in up.items()}
        self._cover_flags = flags
        self._below = self._transitive_faces()
        self._check_hasse()

    # -- construction -----------------------------------------------------

    @classmethod
    def from_maximal_simplices(cls, simplices: Iterable[Iterable[str]]) -> "Complex":
        """Face poset of the simplicial complex spanned by ``simplices``.

        Cell ids are the sorted vertex ids concatenated; if any vertex id is
        longer than one character they are joined with commas instead.
        """
        declared: list[tuple[str, ...]] = []
        for simplex in simplices:
            verts = list(simplex)
            if not verts:
                raise ComplexError("empty simplex")
            if len(set(verts)) != len(verts):
                raise ComplexError(f"duplicate vertex in simplex {verts!r}")
            for v in verts:
                if not isinstance(v, str) or not v:
                    raise ComplexError(f"vertex ids must be non-empty strings: {v!r}")
            declared.append(tuple(sorted(verts)))
        if not declared:
            raise ComplexError("no simplices given")

        sep = "" if all(len(v) == 1 for s in declared for v in s) else ","
        faces: set[tuple[str, ...]] = set()
        for simplex in declared:
            for k in range(1, len(simplex) + 1):
                faces.update(combinations(simplex, k))

        def name(face: tuple[str, ...]) -> str:
            return sep.join(face)

        cells = [Cell(name(f), len(f) - 1) for f in faces]
        covers = []
        for f in faces:
            if len(f) < 2:
                continue
            for drop in range(len(f)):
                g = f[:drop] + f[drop + 1:]
                covers.append(CoverRelation(name(g), name(f), True))
        return cls(cells, covers, regular=True)

    # -- basic queries ----------------------------------------------------

    def __len__(self) -> int:
        return len(self.cells)

    def __contains__(self, cell: object) -> bool:
        return cell in self._index

    def __iter__(self) -> Iterator[str]:
        return (c.id for c in self.cells)

    def __repr__(self) -> str:
        return f"Complex({len(self.cells)} cells, {len(self.covers)} covers, regular={self.regular})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Complex):
            return NotImplemented
        return (self.cells, self.covers, self.regular) == (other.cells, other.covers, other.regular)

    def __hash__(self) -> int:
        return hash((self.cells, self.covers, self.regular))

    @property
    def ids(self) -> list[str]:
        """Cell ids sorted lexicographically (the deterministic report order)."""
        return sorted(self._index)

    def index(self, cell: str) -> int:
        self._require(cell)
        return self._index[cell]

    def dim(self, cell: str) -> int:
        self._require(cell)
        return self._dims[cell]

    @property
    def dimension(self) -> int:
        return max((c.dim for c in self.cells), default=-1)

    def cells_of_dim(self, k: int) -> list[str]:
        return [c.id for c in self.cells if c.dim == k]

    @property
    def edges(self) -> list[tuple[str, str]]:
        """Hasse edges as ``(lower, upper)`` pairs, sorted."""
        return [(c.lower, c.upper) for c in self.covers]

    def is_regular_cover(self, lower: str, upper: str) -> bool:
        try:
            return self._cover_flags[(lower, upper)]
        except KeyError:
            raise ComplexError(f"{edge_key(lower, upper)} is not a cover") from None

    def is_cover(self, lower: str, upper: str) -> bool:
        return (lower, upper) in self._cover_flags

    def face1(self, cell: str) -> set[str]:
        self._require(cell)
        return set(self._down[cell])

    def coface1(self, cell: str) -> set[str]:
        self._require(cell)
        return set(self._up[cell])

    def face(self, cell: str) -> set[str]:
        """All proper faces of ``cell`` (transitive closure of covers)."""
        self._require(cell)
        return set(self._below[cell])

    def coface(self, cell: str) -> set[str]:
        self._require(cell)
        return {c for c, below in self._below.items() if cell in below}

    def leq(self, a: str, b: str) -> bool:
        """Face order: ``a`` is ``b`` or a face of ``b``."""
        self._require(a)
        self._require(b)
        return a == b or a in self._below[b]

    def comparable(self, a: str, b: str) -> bool:
        return self.leq(a, b) or self.leq(b, a)

    def vertices(self, cell: str) -> frozenset[str]:
        """The 0-cells in the closure of ``cell``."""
        if self.dim(cell) == 0:
            return frozenset([cell])
        return frozenset(c for c in self._below[cell] if self._dims[c] == 0)

    # -- subcomplexes -----------------------------------------------------

    def closure(self, cells: Iterable[str]) -> set[str]:
        out: set[str] = set()
        for c in cells:
            self._require(c)
            out.add(c)
            out |= self._below[c]
        return out

    def subcomplex(self, cells: Iterable[str]) -> "Complex":
        """Induced subcomplex on a face-closed set of cells."""
        keep = set(cells)
        for c in keep:
            self._require(c)
            if not self._below[c] <= keep:
                raise ComplexError(f"cell set is not closed under faces at {c!r}")
        return Complex(
            [c for c in self.cells if c.id in keep],
            [cov for cov in self.covers if cov.lower in keep and cov.upper in keep],
            regular=self.regular,
        )

    def is_subcomplex_set(self, cells: Iterable[str]) -> bool:
        keep = set(cells)
        return all(c in self._index and self._below[c] <= keep for c in keep)

    # -- internals --------------------------------------------------------

    def _require(self, cell: str) -> None:
        if cell not in self._index:
            raise ComplexError(f"unknown cell {cell!r}")

    def _transitive_faces(self) -> dict[str, frozenset[str]]:
        below: dict[str, frozenset[str]] = {}
        # dims strictly increase along covers, so (dim, id) order is topological
        for cell in self.cells:
            acc: set[str] = set()
            for f in self._down[cell.id]:
                acc.add(f)
                acc |= below[f]
            below[cell.id] = frozenset(acc)
        return below

    def _check_hasse(self) -> None:
        for cov in self.covers:
            # a cover must not be implied by a longer chain
            for mid in self._down[cov.upper]:
                if mid != cov.lower and cov.lower in self._below[mid]:
                    raise ComplexError(f"{cov.key} is implied by transitivity through {mid!r}")
        for cell in self.cells:
            if cell.dim == 0:
                continue
            seen = {self._dims[f] for f in self._below[cell.id]}
            missing = [k for k in range(cell.dim) if k not in seen]
            if missing:
                raise ComplexError(f"cell {cell.id!r} has no face of dimension {missing[0]}")


# -- module-level operations ------------------------------------------------


def from_maximal_simplices(simplices: Iterable[Iterable[str]]) -> Complex:
    return Complex.from_maximal_simplices(simplices)


def face1(X: Complex, cell: str) -> set[str]:
    return X.face1(cell)


def coface1(X: Complex, cell: str) -> set[str]:
    return X.coface1(cell)


def level_subcomplex(X: Complex, f: Mapping[str, object], v: object) -> Complex:
    """Union of the closures of all cells with ``f(cell) <= v``.

    Unlike the raw preimage this is always a subcomplex, even when ``f`` is
    not monotone along faces.
    """
    from .discrete_morse import as_function
    from .values import parse_value

    values = as_function(X, f)
    level = parse_value(v)
    seeds = [c for c in X if values[c] <= level]
    return X.subcomplex(X.closure(seeds))


def connected_components(X: Complex) -> list[list[str]]:
    """Partition of the cells by connectivity of the undirected Hasse graph.

    Components are returned as sorted id lists, ordered by their first id.
    """
    ds = DisjointSet(X.ids)
    for cov in X.covers:
        ds.merge(cov.lower, cov.upper)
    parts = [sorted(s) for s in ds.subsets()]
    return sorted(parts)


def is_connected(X: Complex) -> bool:
    return len(connected_components(X)) <= 1


def hasse_neighbours(X: Complex, cell: str) -> set[str]:
    return X.face1(cell) | X.coface1(cell)


def bfs_order(X: Complex, start: str) -> list[str]:
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        c = queue.popleft()
        for n in sorted(hasse_neighbours(X, c)):
            if n not in seen:
                seen.add(n)
                order.append(n)
                queue.append(n)
    return order


def cells_by_dimension(X: Complex) -> dict[int, list[str]]:
    out: dict[int, list[str]] = {k: [] for k in range(X.dimension + 1)}
    for c in X.cells:
        out[c.dim].append(c.id)
    return {k: sorted(v) for k, v in out.items()}


def disjoint_union(*complexes: Complex, prefixes: Sequence[str] | None = None) -> Complex:
    """Disjoint union; ids are prefixed to keep them unique."""
    if prefixes is None:
        prefixes = [f"{i}:" for i in range(len(complexes))]
    cells: list[Cell] = []
    covers: list[CoverRelation] = []
    for p, X in zip(prefixes, complexes):
        cells += [Cell(p + c.id, c.dim) for c in X.cells]
        covers += [CoverRelation(p + c.lower, p + c.upper, c.regular) for c in X.covers]
    return Complex(cells, covers, regular=all(X.regular for X in complexes))
