"""Cell maps between complexes and the induced maps on discrete functions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .cw_complex import Complex
from .discrete_morse import DiscreteFunction, MorseCheck, as_function, is_discrete_morse


class MapError(ValueError):
    """Raised when a cell map is malformed or fails a precondition."""


@dataclass(frozen=True)
class CellMap:
    source: Complex
    target: Complex
    assignment: Mapping[str, str]

    def __post_init__(self) -> None:
        amap = {str(k): str(v) for k, v in self.assignment.items()}
        missing = [c for c in self.source.ids if c not in amap]
        if missing:
            raise MapError(f"assignment misses source cell {missing[0]!r}")
        extra = sorted(set(amap) - set(self.source.ids))
        if extra:
            raise MapError(f"assignment maps unknown source cell {extra[0]!r}")
        bad = sorted(c for c, t in amap.items() if t not in self.target)
        if bad:
            raise MapError(f"cell {bad[0]!r} maps to unknown target cell {amap[bad[0]]!r}")
        object.__setattr__(self, "assignment", amap)

    def __call__(self, cell: str) -> str:
        return self.assignment[cell]

    def preimage(self, cell: str) -> list[str]:
        return sorted(c for c, t in self.assignment.items() if t == cell)


def identity_map(X: Complex) -> CellMap:
    return CellMap(X, X, {c: c for c in X.ids})


def inclusion_map(sub: Complex, ambient: Complex) -> CellMap:
    return CellMap(sub, ambient, {c: c for c in sub.ids})


# -- classification ------------------------------------------------------------


def is_order_preserving(phi: CellMap) -> bool:
    X, Y = phi.source, phi.target
    return all(Y.leq(phi(lo), phi(up)) for lo, up in X.edges)


def maps_vertices_to_vertices(phi: CellMap) -> bool:
    return all(phi.target.dim(phi(v)) == 0 for v in phi.source.cells_of_dim(0))


def is_simplicial(phi: CellMap) -> bool:
    """Vertices go to vertices and the image of every cell is the cell
    spanned by the images of its vertices."""
    if not maps_vertices_to_vertices(phi):
        return False
    X, Y = phi.source, phi.target
    for c in X.ids:
        spanned = frozenset(phi(v) for v in X.vertices(c))
        if Y.vertices(phi(c)) != spanned:
            return False
    return is_order_preserving(phi)


def is_non_degenerate(phi: CellMap) -> bool:
    """Vertices go to vertices and every cover goes to a cover."""
    if not maps_vertices_to_vertices(phi):
        return False
    return all(phi.target.is_cover(phi(lo), phi(up)) for lo, up in phi.source.edges)


def is_injective(phi: CellMap) -> bool:
    return len(set(phi.assignment.values())) == len(phi.assignment)


def classify(phi: CellMap) -> dict[str, bool]:
    return {
        "injective": is_injective(phi),
        "non_degenerate": is_non_degenerate(phi),
        "order_preserving": is_order_preserving(phi),
        "simplicial": is_simplicial(phi),
    }


# -- pushforward and pullback ------------------------------------------------------


def pushforward(phi: CellMap, f: Mapping[str, object]) -> DiscreteFunction:
    """Transport ``f`` along ``phi``.

    Cells with a single preimage copy its value.  The remaining cells are
    filled by increasing dimension from the values already present on their
    direct faces and cofaces: midway between the highest face and the lowest
    coface, one below the lowest coface, one above the highest face, or 0
    for isolated cells.  The result need not be a discrete Morse function
    even when ``f`` is one; see :func:`pushforward_checked`.
    """
    X, Y = phi.source, phi.target
    if not (is_simplicial(phi) or is_non_degenerate(phi)):
        raise MapError("pushforward needs a simplicial or non-degenerate map")
    f = as_function(X, f)
    out: dict[str, Fraction] = {}
    for t in Y.ids:
        pre = phi.preimage(t)
        if len(pre) == 1:
            out[t] = f[pre[0]]
    todo = sorted((c for c in Y.ids if c not in out), key=lambda c: (Y.dim(c), c))
    for t in todo:
        faces = Y.face1(t)
        cofaces = Y.coface1(t)
        near = [out[c] for c in cofaces if c in out]
        far = [out[c] for c in Y.coface(t) if c in out]
        if not faces:
            if near:
                out[t] = min(near) - 1
            elif far:
                out[t] = min(far) - 1
            else:
                out[t] = Fraction(0)
            continue
        top = max(out[c] for c in faces)
        if not cofaces:
            out[t] = top + 1
            continue
        if near:
            up = min(near)
        elif far:
            up = min(far)
        else:
            up = top + 2
        out[t] = (top + up) / 2
    return DiscreteFunction(out)


def pushforward_checked(phi: CellMap, f: Mapping[str, object]) -> tuple[DiscreteFunction, MorseCheck]:
    g = pushforward(phi, f)
    return g, is_discrete_morse(phi.target, g)


def pullback(phi: CellMap, g: Mapping[str, object]) -> DiscreteFunction:
    g = as_function(phi.target, g)
    return DiscreteFunction({c: g[phi(c)] for c in phi.source.ids})


def induced_arrangement_map(phi: CellMap) -> dict[tuple[str, str], tuple[str, str]]:
    """Send each Morse hyperplane of the source to the one of its image cover."""
    if not (is_injective(phi) and is_non_degenerate(phi)):
        raise MapError("the hyperplane correspondence needs an injective non-degenerate map")
    return {(lo, up): (phi(lo), phi(up)) for lo, up in phi.source.edges}
