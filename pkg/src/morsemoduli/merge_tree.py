"""Merge trees: valued posets of merge tree type.

Besides the data type this module holds the induced merge tree of a discrete
Morse function, the edit moves between combinatorial merge trees, the
extension map ``eta_*`` and the euclidean edit distance built on it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from typing import Hashable, Iterable, Mapping, Sequence, TypeVar

from scipy.cluster.hierarchy import DisjointSet

from . import editpath
from .cw_complex import Complex, ComplexError, connected_components
from .discrete_morse import as_function, induced_matching, is_discrete_morse, MorseError
from .editpath import Distance, Embedding
from .values import format_value, parse_value

N = TypeVar("N", bound=Hashable)


class MergeTreeError(ValueError):
    """Raised for malformed merge trees and invalid edit moves."""


# -- the data type -------------------------------------------------------------


class MergeTree:
    """A poset of merge tree type, optionally with an order-preserving valuation.

    ``parent`` maps every node to its parent, the root to ``None``.  The
    constructor only checks the tree structure; :func:`validate` checks the
    valuation.
    """

    __slots__ = ("parent", "values", "witnesses", "_children")

    def __init__(
        self,
        parent: Mapping[str, str | None],
        values: Mapping[str, object] | None = None,
        witnesses: Mapping[str, Iterable[str]] | None = None,
    ) -> None:
        parent = {str(k): (None if v is None else str(v)) for k, v in parent.items()}
        if not parent:
            raise MergeTreeError("a merge tree needs at least one node")
        roots = [n for n, p in parent.items() if p is None]
        if len(roots) != 1:
            raise MergeTreeError(f"expected exactly one root, found {len(roots)}")
        children: dict[str, list[str]] = {n: [] for n in parent}
        for n, p in parent.items():
            if p is None:
                continue
            if p not in parent:
                raise MergeTreeError(f"node {n!r} has unknown parent {p!r}")
            children[p].append(n)
        # every node must reach the root
        for n in parent:
            seen = {n}
            cur = parent[n]
            while cur is not None:
                if cur in seen:
                    raise MergeTreeError(f"parent structure has a cycle through {cur!r}")
                seen.add(cur)
                cur = parent[cur]
        for n, ch in children.items():
            if len(ch) == 1:
                raise MergeTreeError(f"inner node {n!r} has a single child")
        self.parent = parent
        self._children = {n: tuple(sorted(ch)) for n, ch in children.items()}
        if values is not None:
            missing = sorted(set(parent) - set(values))
            if missing:
                raise MergeTreeError(f"no value for node {missing[0]!r}")
            extra = sorted(set(values) - set(parent))
            if extra:
                raise MergeTreeError(f"value for unknown node {extra[0]!r}")
            self.values: dict[str, Fraction] | None = {
                str(k): parse_value(v) for k, v in values.items()
            }
        else:
            self.values = None
        self.witnesses = {str(k): tuple(sorted(v)) for k, v in (witnesses or {}).items()}

    # -- structure -------------------------------------------------------

    def __len__(self) -> int:
        return len(self.parent)

    def __contains__(self, node: object) -> bool:
        return node in self.parent

    def __repr__(self) -> str:
        if self.values is None:
            body = ", ".join(f"{n}<{p}" for n, p in sorted(self.parent.items()) if p)
        else:
            body = ", ".join(f"{n}:{format_value(self.values[n])}" for n in self.nodes)
        return f"MergeTree({body or self.root})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MergeTree):
            return NotImplemented
        return self.parent == other.parent and self.values == other.values

    def __hash__(self) -> int:
        vals = None if self.values is None else frozenset(self.values.items())
        return hash((frozenset(self.parent.items()), vals))

    @property
    def nodes(self) -> list[str]:
        return sorted(self.parent)

    @property
    def root(self) -> str:
        return next(n for n, p in self.parent.items() if p is None)

    def children(self, node: str) -> tuple[str, ...]:
        return self._children[node]

    def is_leaf(self, node: str) -> bool:
        return not self._children[node]

    @property
    def leaves(self) -> list[str]:
        return [n for n in self.nodes if self.is_leaf(n)]

    @property
    def inner(self) -> list[str]:
        return [n for n in self.nodes if not self.is_leaf(n)]

    def ancestors(self, node: str) -> list[str]:
        """Proper ancestors from the parent up to the root."""
        out = []
        cur = self.parent[node]
        while cur is not None:
            out.append(cur)
            cur = self.parent[cur]
        return out

    def subtree(self, node: str) -> list[str]:
        """``node`` and all its descendants."""
        out, stack = [], [node]
        while stack:
            n = stack.pop()
            out.append(n)
            stack.extend(self._children[n])
        return sorted(out)

    def leq(self, a: str, b: str) -> bool:
        return a == b or b in self.ancestors(a)

    def value(self, node: str) -> Fraction:
        if self.values is None:
            raise MergeTreeError("tree carries no valuation")
        return self.values[node]

    def poset(self) -> "MergeTree":
        return MergeTree(self.parent)

    def with_values(self, values: Mapping[str, object]) -> "MergeTree":
        return MergeTree(self.parent, values, self.witnesses)

    def relabel(self, mapping: Mapping[str, str]) -> "MergeTree":
        parent = {mapping[n]: (None if p is None else mapping[p]) for n, p in self.parent.items()}
        values = None if self.values is None else {mapping[n]: v for n, v in self.values.items()}
        return MergeTree(parent, values)

    def to_dict(self) -> dict:
        nodes = []
        for n in self.nodes:
            entry: dict[str, object] = {"id": n, "parent": self.parent[n]}
            if self.values is not None:
                entry["value"] = format_value(self.values[n])
            if n in self.witnesses:
                entry["witnesses"] = list(self.witnesses[n])
            nodes.append(entry)
        return {"nodes": nodes}

    # -- canonical form ----------------------------------------------------

    def canonical(self) -> tuple[str, list[str]]:
        """Canonical shape code and the node ids in canonical order."""
        codes: dict[str, str] = {}

        def code(n: str) -> str:
            if n not in codes:
                codes[n] = "(" + "".join(sorted(code(c) for c in self._children[n])) + ")"
            return codes[n]

        code(self.root)
        order: list[str] = []

        def visit(n: str) -> None:
            order.append(n)
            for c in sorted(self._children[n], key=lambda c: (codes[c], c)):
                visit(c)

        visit(self.root)
        return codes[self.root], order

    def shape(self) -> str:
        return self.canonical()[0]

    def coordinates(self) -> tuple[str, tuple[Fraction, ...]]:
        code, order = self.canonical()
        return code, tuple(self.value(n) for n in order)


def isomorphic(a: MergeTree, b: MergeTree) -> bool:
    return a.shape() == b.shape()


# -- classification ------------------------------------------------------------

GENERAL, STRICT, WELL_BRANCHED = "general", "strict", "well_branched"


def validate(theta: MergeTree) -> str:
    """The most specific of ``general``, ``strict`` and ``well_branched``.

    Raises :class:`MergeTreeError` if the valuation is not order preserving.
    """
    if theta.values is None:
        raise MergeTreeError("tree carries no valuation")
    v = theta.values
    strict = True
    for n, p in theta.parent.items():
        if p is None:
            continue
        if v[n] > v[p]:
            raise MergeTreeError(f"valuation decreases along {n!r} < {p!r}")
        if v[n] == v[p]:
            strict = False
    if not strict:
        return GENERAL
    for n in theta.nodes:
        vals = sorted(v[m] for m in theta.subtree(n))
        if len(vals) > 1 and vals[0] == vals[1]:
            return STRICT
    return WELL_BRANCHED


def is_strict(theta: MergeTree) -> bool:
    return validate(theta) in (STRICT, WELL_BRANCHED)


def is_well_branched(theta: MergeTree) -> bool:
    return validate(theta) == WELL_BRANCHED


# -- the induced merge tree ------------------------------------------------------


def induced_merge_tree(X: Complex, f: Mapping[str, object]) -> MergeTree:
    """Merge tree of the level subcomplex filtration of a discrete Morse function.

    Leaves are the critical vertices.  Whenever several tracked components
    become one at some value, one inner node with that value is added; it is
    named after the smallest critical edge of that value inside the merged
    component, and all such edges are kept as witnesses.
    """
    if not X.regular:
        raise ComplexError("induced merge trees need a regular complex")
    f = as_function(X, f)
    check = is_discrete_morse(X, f)
    if not check:
        raise MorseError(
            f"not a discrete Morse function: condition ({check.condition}) fails at {check.cell!r}"
        )
    if len(connected_components(X)) != 1:
        raise ComplexError("the complex is disconnected; merge forests are not supported")
    matched = induced_matching(X, f).matched_cells
    crit_vertices = {c for c in X.cells_of_dim(0) if c not in matched}
    crit_edges = {c for c in X.cells_of_dim(1) if c not in matched}

    ds = DisjointSet()
    present: set[str] = set()
    node_of: dict[str, str] = {}  # component representative -> current tree node
    parent: dict[str, str | None] = {}
    values: dict[str, Fraction] = {}
    witnesses: dict[str, tuple[str, ...]] = {}

    for level in sorted(set(f.values())):
        new = X.closure(c for c in X if f[c] == level) - present
        if not new:
            continue
        old_nodes = {ds[r]: node for r, node in node_of.items()}
        for c in sorted(new):
            ds.add(c)
        present |= new
        for c in sorted(new):
            for lower in X.face1(c):
                ds.merge(lower, c)
            for upper in X.coface1(c):
                if upper in present:
                    ds.merge(c, upper)

        groups: dict[str, list[str]] = {}
        for rep, node in old_nodes.items():
            groups.setdefault(ds[rep], []).append(node)
        for v in sorted(new & crit_vertices):
            parent[v] = None
            values[v] = f[v]
            groups.setdefault(ds[v], []).append(v)

        node_of = {}
        for rep, items in sorted(groups.items()):
            if len(items) == 1:
                node_of[rep] = items[0]
                continue
            wit = sorted(e for e in new & crit_edges if f[e] == level and ds[e] == rep)
            if not wit:
                wit = sorted(e for e in new if X.dim(e) == 1 and ds[e] == rep)
            name = wit[0] if wit else f"merge@{format_value(level)}"
            parent[name] = None
            values[name] = level
            witnesses[name] = tuple(wit)
            for child in items:
                parent[child] = name
            node_of[rep] = name

    return MergeTree(parent, values, witnesses)


# -- edit moves ----------------------------------------------------------------


@dataclass(frozen=True)
class EditMove:
    """One edit move.  Use the class methods to build them.

    ``target`` is the node the move acts on; ``new`` lists created node ids;
    ``children`` is used by splits; ``values`` optionally fixes the values of
    created nodes.
    """

    kind: str
    target: str | None = None
    new: tuple[str, ...] = ()
    children: tuple[str, ...] = ()
    values: tuple[Fraction | None, ...] = ()

    @classmethod
    def identity(cls) -> "EditMove":
        return cls("identity")

    @classmethod
    def add_leaf(cls, parent: str, leaf: str, value: object | None = None) -> "EditMove":
        """Attach a new leaf below the existing inner node ``parent``."""
        return cls("add_leaf", parent, (leaf,), (), (_opt(value),))

    @classmethod
    def add_leaf_with_parent(
        cls,
        below: str,
        leaf: str,
        new_parent: str,
        leaf_value: object | None = None,
        parent_value: object | None = None,
    ) -> "EditMove":
        """Insert ``new_parent`` directly above ``below`` and hang ``leaf`` from it."""
        return cls("add_leaf", below, (leaf, new_parent), (), (_opt(leaf_value), _opt(parent_value)))

    @classmethod
    def remove_leaf(cls, leaf: str) -> "EditMove":
        return cls("remove_leaf", leaf)

    @classmethod
    def split_inner(
        cls, node: str, lower: str, children: Iterable[str], value: object | None = None
    ) -> "EditMove":
        """Split ``node``; ``children`` move to the new node ``lower`` below it."""
        return cls("split_inner", node, (lower,), tuple(sorted(children)), (_opt(value),))

    @classmethod
    def merge_inner(cls, lower: str) -> "EditMove":
        """Merge the inner node ``lower`` into its parent."""
        return cls("merge_inner", lower)


def _opt(value: object | None) -> Fraction | None:
    return None if value is None else parse_value(value)


@dataclass(frozen=True)
class EditResult:
    """The edited tree and the inclusion of the surviving nodes.

    For adding and splitting, ``eta`` maps the old nodes into the new tree;
    for removing and merging it maps the new nodes into the old tree.
    """

    tree: MergeTree
    eta: dict[str, str] = field(default_factory=dict)


def apply_edit(theta: MergeTree, move: EditMove) -> EditResult:
    parent = dict(theta.parent)
    values = None if theta.values is None else dict(theta.values)
    kind = move.kind

    def fresh(node: str) -> None:
        if node in parent:
            raise MergeTreeError(f"node id {node!r} already exists")

    if kind == "identity":
        return EditResult(theta, {n: n for n in parent})

    if kind == "add_leaf":
        t = _existing(theta, move.target)
        if len(move.new) == 1:
            (leaf,) = move.new
            fresh(leaf)
            if theta.is_leaf(t):
                raise MergeTreeError(f"cannot hang a leaf from the minimal node {t!r}")
            parent[leaf] = t
            if values is not None:
                values[leaf] = move.values[0] if move.values[0] is not None else values[t]
        else:
            leaf, mid = move.new
            fresh(leaf)
            fresh(mid)
            if leaf == mid:
                raise MergeTreeError("new node ids must differ")
            parent[mid] = parent[t]
            parent[t] = mid
            parent[leaf] = mid
            if values is not None:
                pv = move.values[1] if move.values[1] is not None else values[t]
                values[mid] = pv
                values[leaf] = move.values[0] if move.values[0] is not None else pv
        return EditResult(MergeTree(parent, values), {n: n for n in theta.parent})

    if kind == "remove_leaf":
        x = _existing(theta, move.target)
        if not theta.is_leaf(x):
            raise MergeTreeError(f"{x!r} is not a leaf")
        y = parent.pop(x)
        if y is None:
            raise MergeTreeError("cannot remove the only node")
        if values is not None:
            del values[x]
        siblings = [c for c in theta.children(y) if c != x]
        if len(siblings) == 1:
            (other,) = siblings
            parent[other] = parent.pop(y)
            for n, p in parent.items():
                if p == y:
                    parent[n] = other
            if values is not None:
                del values[y]
        tree = MergeTree(parent, values)
        return EditResult(tree, {n: n for n in tree.parent})

    if kind == "split_inner":
        z = _existing(theta, move.target)
        (lower,) = move.new
        fresh(lower)
        kids = set(theta.children(z))
        if len(kids) < 3:
            raise MergeTreeError(f"{z!r} has fewer than 3 children")
        moved = set(move.children)
        if not moved <= kids:
            raise MergeTreeError(f"split children must be children of {z!r}")
        if len(moved) < 2 or len(kids - moved) < 1:
            raise MergeTreeError("the lower node needs at least two children and the upper one another")
        parent[lower] = z
        for c in moved:
            parent[c] = lower
        if values is not None:
            values[lower] = move.values[0] if move.values[0] is not None else values[z]
        return EditResult(MergeTree(parent, values), {n: n for n in theta.parent})

    if kind == "merge_inner":
        z1 = _existing(theta, move.target)
        z2 = parent[z1]
        if theta.is_leaf(z1) or z2 is None:
            raise MergeTreeError(f"{z1!r} and its parent are not adjacent inner nodes")
        for c in theta.children(z1):
            parent[c] = z2
        del parent[z1]
        if values is not None:
            del values[z1]
        tree = MergeTree(parent, values)
        return EditResult(tree, {n: n for n in tree.parent})

    raise MergeTreeError(f"unknown edit move {kind!r}")


def _existing(theta: MergeTree, node: str | None) -> str:
    if node is None or node not in theta:
        raise MergeTreeError(f"unknown node {node!r}")
    return node


# -- embeddings and eta_* ----------------------------------------------------------


def _fill_rules(
    parent: Mapping[N, N | None],
    children: Mapping[N, Sequence[N]],
    image: set[N],
) -> dict[N, tuple[str, N]]:
    """How ``eta_*`` fills the nodes outside the image of an inclusion.

    ``("pre", y)`` means the old value at the preimage of ``y``; ``("new", y)``
    means the new valuation at ``y``.
    """
    holds: dict[N, bool] = {}

    def has_image(n: N) -> bool:
        if n not in holds:
            holds[n] = n in image or any(has_image(c) for c in children[n])
        return holds[n]

    def split_like(n: N) -> bool:
        return n not in image and sum(1 for c in children[n] if has_image(c)) >= 2

    rules: dict[N, tuple[str, N]] = {}
    for x in parent:
        if x in image:
            continue
        if not children[x]:
            y = parent[x]
            rules[x] = ("pre", y) if y in image else ("new", y)
        elif not split_like(x):
            # a new parent node added for new leaves
            rules[x] = ("new", x)
        else:
            u = parent[x]
            while not (u in image or split_like(u)):
                u = parent[u]
            rules[x] = ("new", u)
    return rules


def is_inclusion(small: MergeTree, big: MergeTree, eta: Mapping[str, str]) -> bool:
    """Whether ``eta`` is an inclusion arising from adding leaves and splitting."""
    if set(eta) != set(small.parent) or not set(eta.values()) <= set(big.parent):
        return False
    if len(set(eta.values())) != len(eta):
        return False
    for x in small.parent:
        if small.is_leaf(x) != big.is_leaf(eta[x]):
            return False
    for a, b in combinations(small.parent, 2):
        if small.leq(a, b) != big.leq(eta[a], eta[b]) or small.leq(b, a) != big.leq(eta[b], eta[a]):
            return False
    return True


def eta_star(theta: MergeTree, theta_new: MergeTree, eta: Mapping[str, str]) -> dict[str, Fraction]:
    """Extend ``theta`` along the inclusion ``eta`` to a valuation of the larger tree."""
    if not is_inclusion(theta, theta_new, eta):
        raise MergeTreeError("eta is not an inclusion of the required shape")
    inv = {y: x for x, y in eta.items()}
    big_children = {n: theta_new.children(n) for n in theta_new.parent}
    rules = _fill_rules(theta_new.parent, big_children, set(inv))
    out = {}
    for x in theta_new.nodes:
        if x in inv:
            out[x] = theta.value(inv[x])
        else:
            kind, y = rules[x]
            out[x] = theta.value(inv[y]) if kind == "pre" else theta_new.value(y)
    return out


# -- shape family for the search -------------------------------------------------


@lru_cache(maxsize=None)
def shape_parents(code: str) -> tuple[int | None, ...]:
    """Parent array of a canonical shape code in preorder."""
    parents: list[int | None] = []
    stack: list[int] = []
    for ch in code:
        if ch == "(":
            parents.append(stack[-1] if stack else None)
            stack.append(len(parents) - 1)
        else:
            stack.pop()
    return tuple(parents)


@lru_cache(maxsize=None)
def _shape_children(code: str) -> tuple[tuple[int, ...], ...]:
    par = shape_parents(code)
    kids: list[list[int]] = [[] for _ in par]
    for i, p in enumerate(par):
        if p is not None:
            kids[p].append(i)
    return tuple(tuple(k) for k in kids)


@lru_cache(maxsize=None)
def _shape_codes(code: str) -> tuple[str, ...]:
    kids = _shape_children(code)
    out: list[str] = [""] * len(kids)
    for i in reversed(range(len(kids))):
        out[i] = "(" + "".join(sorted(out[c] for c in kids[i])) + ")"
    return tuple(out)


@lru_cache(maxsize=None)
def _descendants(code: str) -> tuple[frozenset[int], ...]:
    kids = _shape_children(code)
    out: list[frozenset[int]] = [frozenset()] * len(kids)
    for i in reversed(range(len(kids))):
        acc: set[int] = set()
        for c in kids[i]:
            acc.add(c)
            acc |= out[c]
        out[i] = frozenset(acc)
    return tuple(out)


@lru_cache(maxsize=None)
def shapes_of_size(n: int) -> tuple[str, ...]:
    """Codes of all merge tree shapes with exactly ``n`` nodes."""
    if n < 1:
        return ()
    if n == 1:
        return ("()",)
    found: set[str] = set()

    def parts(remaining: int, min_size: int, min_code: str, acc: list[str]) -> None:
        if remaining == 0:
            if len(acc) >= 2:
                found.add("(" + "".join(sorted(acc)) + ")")
            return
        for size in range(min_size, remaining + 1):
            for c in shapes_of_size(size):
                if size == min_size and c < min_code:
                    continue
                parts(remaining - size, size, c, acc + [c])

    parts(n - 1, 1, "", [])
    return tuple(sorted(found))


class TreeShapes:
    """Merge tree shapes as an :class:`editpath.ShapeFamily`."""

    def size(self, shape: str) -> int:
        return len(shape_parents(shape))

    def order_pairs(self, shape: str) -> list[tuple[int, int]]:
        return [(i, p) for i, p in enumerate(shape_parents(shape)) if p is not None]

    def shapes(self, max_size: int) -> list[str]:
        return [c for n in range(1, max_size + 1) for c in shapes_of_size(n)]

    def automorphisms(self, shape: str) -> list[tuple[int, ...]]:
        return _automorphisms(shape)

    def embeddings(self, small: str, big: str) -> list[Embedding]:
        return _embeddings(small, big)

    def related(self, small: str, big: str) -> bool:
        return bool(_embeddings(small, big))


TREE_SHAPES = TreeShapes()


@lru_cache(maxsize=None)
def _automorphisms(code: str) -> list[tuple[int, ...]]:
    par = shape_parents(code)
    codes = _shape_codes(code)
    n = len(par)
    out: list[tuple[int, ...]] = []
    img: list[int] = [-1] * n
    used = [False] * n

    def walk(i: int) -> None:
        if i == n:
            out.append(tuple(img))
            return
        for j in range(n):
            if used[j] or codes[j] != codes[i]:
                continue
            if (par[i] is None) != (par[j] is None):
                continue
            if par[i] is not None and img[par[i]] != par[j]:
                continue
            img[i] = j
            used[j] = True
            walk(i + 1)
            used[j] = False
        img[i] = -1

    walk(0)
    return out


@lru_cache(maxsize=None)
def _embeddings(small: str, big: str) -> list[Embedding]:
    sp = shape_parents(small)
    bp = shape_parents(big)
    if len(sp) > len(bp):
        return []
    if len(sp) == len(bp):
        if small != big:
            return []
        return [Embedding(a, (None,) * len(bp)) for a in _automorphisms(small)]
    s_kids = _shape_children(small)
    b_kids = _shape_children(big)
    desc = _descendants(big)
    n = len(sp)
    img: list[int] = [-1] * n
    used: set[int] = set()
    found: list[tuple[int, ...]] = []

    def candidates(i: int) -> Iterable[int]:
        pool = range(len(bp)) if sp[i] is None else desc[img[sp[i]]]
        for j in sorted(pool):
            if j in used:
                continue
            if (not s_kids[i]) != (not b_kids[j]):
                continue
            # incomparable with the images of earlier siblings
            if sp[i] is not None:
                clash = False
                for sib in s_kids[sp[i]]:
                    if sib >= i:
                        break
                    o = img[sib]
                    if j == o or j in desc[o] or o in desc[j]:
                        clash = True
                        break
                if clash:
                    continue
            yield j

    def walk(i: int) -> None:
        if i == n:
            found.append(tuple(img))
            return
        for j in candidates(i):
            img[i] = j
            used.add(j)
            walk(i + 1)
            used.discard(j)
        img[i] = -1

    walk(0)
    out = []
    for image in found:
        pre = {c: k for k, c in enumerate(image)}
        rules = _fill_rules(
            {i: p for i, p in enumerate(bp)},
            {i: b_kids[i] for i in range(len(bp))},
            set(image),
        )
        fill: list[tuple[str, int] | None] = []
        for c in range(len(bp)):
            if c in pre:
                fill.append(None)
            else:
                kind, y = rules[c]
                fill.append(("small", pre[y]) if kind == "pre" else ("big", y))
        out.append(Embedding(image, tuple(fill)))
    return out


# -- distances ---------------------------------------------------------------------


def elementary_distance(
    theta: MergeTree, theta_new: MergeTree, eta: Mapping[str, str] | None = None
) -> Distance:
    """Cost of the cheapest single same-direction step between the trees.

    With ``eta`` given, the cost of that particular inclusion (from the
    smaller tree into the larger one) instead of the minimum over all.
    """
    if eta is not None:
        small, big = (theta, theta_new) if len(theta) <= len(theta_new) else (theta_new, theta)
        ext = eta_star(small, big, eta)
        return Distance((sum(((ext[x] - big.value(x)) ** 2 for x in big.nodes), Fraction(0)),))
    sa, va = theta.coordinates()
    sb, vb = theta_new.coordinates()
    found = editpath.elementary(TREE_SHAPES, sa, va, sb, vb)
    if found is None:
        raise MergeTreeError("the trees are not related by same-direction edit moves")
    return Distance((found[0],))


@dataclass
class EditDistanceResult:
    distance: Distance
    exact: bool
    path: list[MergeTree]
    evaluations: int = 0
    truncated: bool = False

    @property
    def value(self) -> float:
        return self.distance.value


def _tree_from_shape(code: str, values: Sequence[Fraction], prefix: str) -> MergeTree:
    par = shape_parents(code)
    ids = [f"{prefix}{i}" for i in range(len(par))]
    return MergeTree(
        {ids[i]: (None if p is None else ids[p]) for i, p in enumerate(par)},
        {ids[i]: v for i, v in enumerate(values)},
    )


def edit_distance(
    theta: MergeTree,
    theta_new: MergeTree,
    max_nodes: int | None = None,
    max_steps: int = 3,
    max_evals: int = 200_000,
) -> EditDistanceResult:
    """Upper bound for the euclidean edit distance with an exactness flag.

    Sequences have at most ``max_steps`` steps and intermediate trees at most
    ``max_nodes`` nodes (default: the larger endpoint).  Intermediate values
    range over all reals; each combinatorial choice is solved as a cone
    program and then rounded to an exact rational witness, so the reported
    value is always attained by the returned path.

    The flag is true only for a zero bound, the one case no longer sequence
    can improve on.
    """
    validate(theta)
    validate(theta_new)
    if max_nodes is None:
        max_nodes = max(len(theta), len(theta_new))
    sa, va = theta.coordinates()
    sb, vb = theta_new.coordinates()
    res = editpath.search(TREE_SHAPES, sa, va, sb, vb, max_nodes, max_steps, max_evals)
    path = []
    for i, step in enumerate(res.path):
        if i == 0:
            path.append(theta)
        elif i == len(res.path) - 1:
            path.append(theta_new)
        else:
            path.append(_tree_from_shape(step.shape, step.values, f"t{i}."))
    return EditDistanceResult(res.distance, res.exact, path, res.evaluations, res.truncated)


# -- arrangements on tree space -----------------------------------------------------


def tree_arrangements(P: MergeTree) -> dict[str, list[tuple[str, str]]]:
    """Index sets of the leaf, order and braid arrangements on R^P.

    Leaf and order pairs are ``(lower, upper)``; braid pairs are sorted ids.
    """
    leaf = [(x, P.parent[x]) for x in P.leaves if P.parent[x] is not None]
    order = sorted((x, y) for x in P.nodes for y in P.ancestors(x))
    braid = list(combinations(P.nodes, 2))
    return {"leaf": sorted(leaf), "order": order, "braid": braid}
