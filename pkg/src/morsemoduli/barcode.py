"""Barcodes, the elder rule and the euclidean edit distance on barcodes.

A barcode is a valuation of a disjoint union of two-element chains, one per
bar.  Coordinates of a barcode with ``n`` bars are ordered
``birth_0, death_0, birth_1, death_1, ...``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterable, Mapping

from . import editpath
from .assignment import min_assignment
from .editpath import Distance, Embedding
from .merge_tree import MergeTree, MergeTreeError, validate, WELL_BRANCHED
from .values import format_value, parse_value


class BarcodeError(ValueError):
    """Raised for malformed barcodes."""


class Barcode:
    """Bars keyed by id, each a ``(birth, death)`` pair with birth <= death.

    ``sources`` optionally records, per bar, the merge tree nodes whose
    values it carries.
    """

    __slots__ = ("bars", "sources")

    def __init__(
        self,
        bars: Mapping[str, tuple[object, object]],
        sources: Mapping[str, tuple[str, str]] | None = None,
    ) -> None:
        parsed = {}
        for bid, (b, d) in bars.items():
            b, d = parse_value(b), parse_value(d)
            if b > d:
                raise BarcodeError(f"bar {bid!r} is born after it dies")
            parsed[str(bid)] = (b, d)
        self.bars: dict[str, tuple[Fraction, Fraction]] = parsed
        self.sources = dict(sources or {})

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[object, object]]) -> "Barcode":
        return cls({f"b{i}": p for i, p in enumerate(pairs)})

    def __len__(self) -> int:
        return len(self.bars)

    def __repr__(self) -> str:
        body = ", ".join(f"[{format_value(b)},{format_value(d)}]" for b, d in self.sorted_pairs())
        return f"Barcode({body})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Barcode):
            return NotImplemented
        return self.bars == other.bars

    def __hash__(self) -> int:
        return hash(frozenset(self.bars.items()))

    @property
    def ids(self) -> list[str]:
        return sorted(self.bars)

    def sorted_pairs(self) -> list[tuple[Fraction, Fraction]]:
        return sorted(self.bars.values())

    def coordinates(self) -> tuple[Fraction, ...]:
        out: list[Fraction] = []
        for bid in self.ids:
            out.extend(self.bars[bid])
        return tuple(out)

    def to_dict(self) -> dict:
        bars = []
        for bid in self.ids:
            b, d = self.bars[bid]
            entry: dict[str, object] = {"id": bid, "birth": format_value(b), "death": format_value(d)}
            if bid in self.sources:
                entry["nodes"] = list(self.sources[bid])
            bars.append(entry)
        return {"bars": bars}


# -- the elder rule -------------------------------------------------------------


def induced_barcode(theta: MergeTree) -> Barcode:
    """Elder rule: each inner node, in increasing value, takes the lowest
    still unpaired leaf below it; leftover leaves die at their parent.

    Bars are named after their leaf.  A single-node tree gives one bar of
    length zero.
    """
    if validate(theta) != WELL_BRANCHED:
        raise MergeTreeError("the elder rule needs a well-branched merge tree")
    v = theta.values
    assert v is not None
    paired: dict[str, str] = {}
    for y in sorted(theta.inner, key=lambda n: (v[n], n)):
        free = [x for x in theta.subtree(y) if theta.is_leaf(x) and x not in paired]
        x = min(free, key=lambda n: (v[n], n))
        paired[x] = y
    bars = {}
    sources = {}
    for x in theta.leaves:
        y = paired.get(x, theta.parent[x] if theta.parent[x] is not None else x)
        bars[x] = (v[x], v[y])
        sources[x] = (x, y)
    return Barcode(bars, sources)


# -- arrangements -------------------------------------------------------------------


def barcode_arrangements(beta: Barcode) -> dict[str, list[tuple[str, str]]]:
    coords = [f"{bid}.{end}" for bid in beta.ids for end in ("birth", "death")]
    order = [(f"{bid}.birth", f"{bid}.death") for bid in beta.ids]
    return {"order": order, "braid": list(combinations(coords, 2))}


# -- shape family --------------------------------------------------------------------


class BarShapes:
    """Barcode shapes, i.e. bar counts, as an :class:`editpath.ShapeFamily`."""

    def size(self, shape: int) -> int:
        return 2 * shape

    def order_pairs(self, shape: int) -> list[tuple[int, int]]:
        return [(2 * i, 2 * i + 1) for i in range(shape)]

    def shapes(self, max_size: int) -> list[int]:
        return list(range(0, max_size // 2 + 1))

    def automorphisms(self, shape: int) -> list[tuple[int, ...]]:
        return _bar_automorphisms(shape)

    def embeddings(self, small: int, big: int) -> list[Embedding]:
        return _bar_embeddings(small, big)

    def related(self, small: int, big: int) -> bool:
        return small <= big

    def representatives(self, small: int, big: int) -> list[Embedding]:
        # all bars are interchangeable, so one embedding per orbit suffices
        return _bar_embeddings(small, big)[:1]


BAR_SHAPES = BarShapes()


def _coords(bar_map: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for j in bar_map:
        out += [2 * j, 2 * j + 1]
    return tuple(out)


@lru_cache(maxsize=None)
def _bar_automorphisms(n: int) -> list[tuple[int, ...]]:
    return [_coords(p) for p in permutations(range(n))]


@lru_cache(maxsize=None)
def _bar_embeddings(k: int, n: int) -> list[Embedding]:
    if k > n:
        return []
    out = []
    for p in permutations(range(n), k):
        image = _coords(p)
        hit = set(image)
        fill = tuple(None if c in hit else ("big", c) for c in range(2 * n))
        out.append(Embedding(image, fill))
    return out


# -- distances --------------------------------------------------------------------------


def elementary_barcode_distance(beta: Barcode, beta_new: Barcode) -> Distance:
    """Single edit morphism: an injection of the smaller barcode's bars into
    the larger one's; bars outside the image copy the target and cost nothing.
    Solved as an exact assignment problem."""
    small, big = (beta, beta_new) if len(beta) <= len(beta_new) else (beta_new, beta)
    sb = [small.bars[i] for i in small.ids]
    bb = [big.bars[i] for i in big.ids]
    cost = [[(b0 - b1) ** 2 + (d0 - d1) ** 2 for (b1, d1) in bb] for (b0, d0) in sb]
    total, _ = min_assignment(cost)
    return Distance((total,))


@dataclass
class BarcodeDistanceResult:
    distance: Distance
    exact: bool
    path: list[Barcode] = field(default_factory=list)
    evaluations: int = 0
    truncated: bool = False

    @property
    def value(self) -> float:
        return self.distance.value


def barcode_edit_distance(
    beta: Barcode,
    beta_new: Barcode,
    max_bars: int | None = None,
    max_steps: int = 3,
    max_evals: int = 200_000,
) -> BarcodeDistanceResult:
    """Upper bound for the euclidean edit distance on barcodes.

    Intermediate barcodes have at most ``max_bars`` bars (default: one more
    than the larger endpoint) and sequences at most ``max_steps`` steps.
    """
    if max_bars is None:
        max_bars = max(len(beta), len(beta_new)) + 1
    if max_steps == 1:
        d = elementary_barcode_distance(beta, beta_new)
        exact = d.is_zero
        return BarcodeDistanceResult(d, exact, [beta, beta_new], 1, False)
    res = editpath.search(
        BAR_SHAPES,
        len(beta),
        beta.coordinates(),
        len(beta_new),
        beta_new.coordinates(),
        2 * max_bars,
        max_steps,
        max_evals,
    )
    path = []
    for i, step in enumerate(res.path):
        if i == 0:
            path.append(beta)
        elif i == len(res.path) - 1:
            path.append(beta_new)
        else:
            vals = step.values
            path.append(
                Barcode({f"s{i}.{j}": (vals[2 * j], vals[2 * j + 1]) for j in range(step.shape)})
            )
    return BarcodeDistanceResult(res.distance, res.exact, path, res.evaluations, res.truncated)
