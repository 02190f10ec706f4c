"""Small complexes, functions and maps shared by the test modules."""

from __future__ import annotations

from fractions import Fraction
import random

from morsemoduli.cw_complex import Cell, Complex, CoverRelation, disjoint_union
from morsemoduli.morphisms import CellMap


def simplicial(*simplices: str) -> Complex:
    return Complex.from_maximal_simplices([list(s) for s in simplices])


def cw(cells: dict[str, int], covers: list[tuple[str, str]] | list[tuple[str, str, bool]], regular: bool = True) -> Complex:
    rels = [CoverRelation(*c) for c in covers]
    return Complex([Cell(i, d) for i, d in cells.items()], rels, regular=regular)


POINT = simplicial("a")
TWO_POINTS = simplicial("a", "b")
INTERVAL = simplicial("ab")
PATH = simplicial("ab", "bc")
PATH3 = simplicial("ab", "bc", "cd")
STAR3 = simplicial("ab", "ac", "ad")
BOUNDARY = simplicial("ab", "bc", "ac")
SIMPLEX2 = simplicial("abc")
TWO_INTERVALS = disjoint_union(INTERVAL, INTERVAL)

# two vertices joined by two edges
DIGON = cw(
    {"a": 0, "b": 0, "e": 1, "g": 1},
    [("a", "e"), ("b", "e"), ("a", "g"), ("b", "g")],
)
FILLED_DIGON = cw(
    {"a": 0, "b": 0, "e": 1, "g": 1, "D": 2},
    [("a", "e"), ("b", "e"), ("a", "g"), ("b", "g"), ("e", "D"), ("g", "D")],
)
# a loop: one vertex attached twice to one edge, so the cover is not regular
LOOP = cw({"v": 0, "e": 1}, [("v", "e", False)], regular=False)
# a disk whose boundary circle is a single loop
DISK = cw(
    {"v": 0, "e": 1, "D": 2},
    [("v", "e", False), ("e", "D", False)],
    regular=False,
)

CORPUS: dict[str, Complex] = {
    "point": POINT,
    "two_points": TWO_POINTS,
    "interval": INTERVAL,
    "path": PATH,
    "path3": PATH3,
    "star3": STAR3,
    "boundary": BOUNDARY,
    "simplex2": SIMPLEX2,
    "two_intervals": TWO_INTERVALS,
    "digon": DIGON,
    "filled_digon": FILLED_DIGON,
    "loop": LOOP,
    "disk": DISK,
}
SMALL = {k: X for k, X in CORPUS.items() if len(X) <= 8}
CONNECTED_REGULAR = {
    k: CORPUS[k] for k in ("point", "interval", "path", "path3", "star3", "boundary", "simplex2", "digon", "filled_digon")
}


# -- the hexagon-to-square map ---------------------------------------------------------
#
# Source: two green vertices g1, g2 on top, purple p1, p2 below, side vertices
# v (left) and w (right); a quadrilateral Q = g1 g2 p2 p1 flanked by the
# triangles L = g1 p1 v and R = g2 p2 w.  The map collapses the green edge to
# G, the purple edge to P and the quadrilateral onto the blue edge GP.


def _cells(vertices, edges, faces):
    cells = {v: 0 for v in vertices}
    cells.update({e: 1 for e in edges})
    cells.update({f: 2 for f in faces})
    covers = [(v, e) for e, ends in edges.items() for v in ends]
    covers += [(e, f) for f, bd in faces.items() for e in bd]
    return cw(cells, covers)


HEX = _cells(
    ["g1", "g2", "p1", "p2", "v", "w"],
    {
        "g1g2": ("g1", "g2"),
        "g1p1": ("g1", "p1"),
        "g2p2": ("g2", "p2"),
        "p1p2": ("p1", "p2"),
        "g1v": ("g1", "v"),
        "p1v": ("p1", "v"),
        "g2w": ("g2", "w"),
        "p2w": ("p2", "w"),
    },
    {
        "Q": ("g1g2", "g1p1", "g2p2", "p1p2"),
        "L": ("g1p1", "g1v", "p1v"),
        "R": ("g2p2", "g2w", "p2w"),
    },
)
SQUARE = _cells(
    ["G", "P", "V", "W"],
    {"GP": ("G", "P"), "GV": ("G", "V"), "PV": ("P", "V"), "GW": ("G", "W"), "PW": ("P", "W")},
    {"L": ("GP", "GV", "PV"), "R": ("GP", "GW", "PW")},
)
HEX_MAP = CellMap(
    HEX,
    SQUARE,
    {
        "g1": "G", "g2": "G", "g1g2": "G",
        "p1": "P", "p2": "P", "p1p2": "P",
        "g1p1": "GP", "g2p2": "GP", "Q": "GP",
        "v": "V", "w": "W",
        "g1v": "GV", "p1v": "PV", "g2w": "GW", "p2w": "PW",
        "L": "L", "R": "R",
    },
)
HEX_F = {
    "g1": 3, "g2": 1, "p1": 4, "p2": 5, "v": 2, "w": 3,
    "g1g2": 5, "g1p1": 5, "g2p2": 6, "p1p2": 5,
    "g1v": 3, "p1v": 3, "g2w": 3, "p2w": Fraction(11, 2),
    "Q": 7, "L": 5, "R": 6,
}


# -- random discrete functions -------------------------------------------------------------


def random_values(X: Complex, rng: random.Random, spread: int = 6) -> dict[str, Fraction]:
    return {c: Fraction(rng.randint(-spread * 4, spread * 4), 4) for c in X.ids}


def random_morse(X: Complex, rng: random.Random) -> dict[str, Fraction]:
    """A random discrete Morse function: start from a perturbed dimension
    function and pull a random set of disjoint regular pairs below each other."""
    f = {c: Fraction(3 * X.dim(c)) + Fraction(rng.randint(0, 99), 100) for c in X.ids}
    used: set[str] = set()
    edges = [e for e in X.edges if X.is_regular_cover(*e)]
    rng.shuffle(edges)
    for lo, up in edges:
        if lo in used or up in used or rng.random() < 0.5:
            continue
        trial = dict(f)
        trial[up] = f[lo] - Fraction(rng.randint(0, 50), 100)
        from morsemoduli.discrete_morse import is_discrete_morse

        if is_discrete_morse(X, trial):
            f = trial
            used |= {lo, up}
    return f


def random_mb(X: Complex, rng: random.Random) -> dict[str, Fraction]:
    """A random Morse-Benedetti function: a random linear extension of the
    face order, with some cover pairs glued to one value."""
    order = sorted(X.ids, key=lambda c: (X.dim(c), rng.random()))
    f = {c: Fraction(2 * i) for i, c in enumerate(order)}
    used: set[str] = set()
    for lo, up in X.edges:
        if lo in used or up in used or rng.random() < 0.4:
            continue
        # gluing is allowed only when nothing lies strictly between the two values
        if f[up] - f[lo] == 2:
            f[up] = f[lo]
            used |= {lo, up}
    return f
