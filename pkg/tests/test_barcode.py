from __future__ import annotations

from fractions import Fraction
from itertools import permutations
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linear_sum_assignment

from morsemoduli.assignment import min_assignment
from morsemoduli.barcode import (
    Barcode,
    BarcodeError,
    barcode_arrangements,
    barcode_edit_distance,
    elementary_barcode_distance,
    induced_barcode,
)
from morsemoduli.merge_tree import MergeTreeError, validate, WELL_BRANCHED
from test_merge_tree import CHERRY, random_tree, tree


def bars(*pairs) -> Barcode:
    return Barcode.from_pairs(pairs)


def brute_elementary(a: Barcode, b: Barcode) -> Fraction:
    small, big = (a, b) if len(a) <= len(b) else (b, a)
    sp, bp = small.sorted_pairs(), big.sorted_pairs()
    best = None
    for image in permutations(range(len(bp)), len(sp)):
        cost = sum(((x[0] - bp[j][0]) ** 2 + (x[1] - bp[j][1]) ** 2 for x, j in zip(sp, image)), Fraction(0))
        best = cost if best is None else min(best, cost)
    return best if best is not None else Fraction(0)


# -- elder rule ---------------------------------------------------------------------------


def test_elder_examples():
    assert induced_barcode(CHERRY).sorted_pairs() == [(0, 2), (1, 2)]
    nested = tree({"a": ("y", 0), "b": ("y", 1), "y": ("r", 3), "c": ("r", 2), "r": (None, 4)})
    assert induced_barcode(nested).sorted_pairs() == [(0, 3), (1, 4), (2, 4)]
    assert induced_barcode(tree({"b": (None, 1)})).sorted_pairs() == [(1, 1)]


def test_elder_rejects_ties():
    with pytest.raises(MergeTreeError):
        induced_barcode(tree({"a": ("r", 0), "b": ("r", 0), "r": (None, 1)}))


def test_elder_records_sources():
    b = induced_barcode(CHERRY)
    assert b.sources == {"a": ("a", "r"), "b": ("b", "r")}


def well_branched_tree(rng: random.Random, n_leaves: int):
    while True:
        t = random_tree(rng, n_leaves)
        # break ties among leaves so that subtree minima are unique
        vals = {n: v + Fraction(rng.randint(1, 999), 4000) if t.is_leaf(n) else v for n, v in t.values.items()}
        t = t.with_values(vals)
        try:
            if validate(t) == WELL_BRANCHED:
                return t
        except MergeTreeError:
            continue


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 7))
def test_elder_invariants(seed, n):
    t = well_branched_tree(random.Random(seed), n)
    b = induced_barcode(t)
    assert len(b) == len(t.leaves)
    assert sorted(x for x, _ in b.sorted_pairs()) == sorted(t.value(x) for x in t.leaves)
    inner_values = {t.value(y) for y in t.inner} or {t.value(t.root)}
    assert all(d in inner_values for _, d in b.sorted_pairs())
    # every inner node ends at least one bar
    deaths = [d for _, d in b.sorted_pairs()]
    for y in t.inner:
        assert t.value(y) in deaths


# -- barcodes and arrangements --------------------------------------------------------------


def test_barcode_validation():
    with pytest.raises(BarcodeError):
        bars((3, 1))


def test_arrangements():
    arr = barcode_arrangements(bars((0, 1), (2, 3)))
    assert len(arr["order"]) == 2
    assert len(arr["braid"]) == 6
    assert {tuple(sorted(p)) for p in arr["order"]} <= {tuple(sorted(p)) for p in arr["braid"]}
    assert barcode_arrangements(bars()) == {"order": [], "braid": []}


# -- assignment --------------------------------------------------------------------------------


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5), st.integers(0, 3), st.integers(0, 10**6))
def test_assignment_matches_scipy(rows, extra, seed):
    rng = np.random.default_rng(seed)
    cost = rng.integers(0, 30, size=(rows, rows + extra))
    total, cols = min_assignment([[Fraction(int(c)) for c in row] for row in cost])
    r, c = linear_sum_assignment(cost)
    assert total == int(cost[r, c].sum())
    assert len(set(cols)) == rows
    assert total == sum(int(cost[i, j]) for i, j in enumerate(cols))


def test_assignment_edge_cases():
    assert min_assignment([]) == (0, [])
    with pytest.raises(ValueError):
        min_assignment([[1], [2]])


# -- distances ------------------------------------------------------------------------------


def test_distance_examples():
    assert barcode_edit_distance(bars((0, 2)), bars((0, 2))).value == 0
    one = barcode_edit_distance(bars((0, 2)), bars((0, 3)), max_steps=1)
    assert one.distance.radicands == (1,)
    collapse = barcode_edit_distance(bars((0, 2), (1, 2)), bars((0, 2)))
    assert collapse.value == 0 and collapse.exact


def test_collapse_and_create_are_free():
    # a bar can be collapsed and a new one created at no cost, so any two
    # barcodes are joined by a zero-cost sequence once two steps are allowed
    res = barcode_edit_distance(bars((0, 2)), bars((0, 3)))
    assert res.value == 0
    assert res.exact
    assert all(r == 0 for r in res.distance.radicands)
    assert len(res.path) == 3


@pytest.mark.parametrize("seed", range(5))
def test_elementary_matches_brute_force(seed):
    rng = random.Random(seed)
    for _ in range(20):
        a = bars(*[(x, x + rng.randint(0, 3)) for x in (rng.randint(0, 4) for _ in range(rng.randint(0, 3)))])
        b = bars(*[(x, x + rng.randint(0, 3)) for x in (rng.randint(0, 4) for _ in range(rng.randint(0, 3)))])
        expected = brute_elementary(a, b)
        assert elementary_barcode_distance(a, b).radicands == (expected,)
        assert elementary_barcode_distance(b, a).radicands == (expected,)
        got = barcode_edit_distance(a, b, max_steps=1)
        assert got.distance.radicands == (expected,)


def test_search_agrees_with_exhaustive_small():
    rng = random.Random(9)
    for _ in range(10):
        a = bars(*[(x, x + 1) for x in (rng.randint(0, 3) for _ in range(rng.randint(1, 2)))])
        b = bars(*[(x, x + 2) for x in (rng.randint(0, 3) for _ in range(rng.randint(1, 2)))])
        res = barcode_edit_distance(a, b, max_bars=3, max_steps=2)
        assert res.value == 0


def test_assignment_distance_can_exceed_tree_distance():
    # the root value enters two bars, so moving it moves two coordinates
    moved = tree({"a": ("r", 0), "b": ("r", 1), "r": (None, 3)})
    d_bar = elementary_barcode_distance(induced_barcode(CHERRY), induced_barcode(moved))
    assert d_bar.radicands == (2,)
