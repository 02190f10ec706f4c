from __future__ import annotations

from fractions import Fraction
import random

import pytest

from corpus import BOUNDARY, HEX, HEX_F, HEX_MAP, INTERVAL, POINT, SIMPLEX2, SQUARE, random_morse
from morsemoduli.arrangement import sign_vector
from morsemoduli.cw_complex import edge_key
from morsemoduli.discrete_morse import dimension_function, induced_matching, is_discrete_morse
from morsemoduli.morphisms import (
    CellMap,
    MapError,
    classify,
    identity_map,
    inclusion_map,
    induced_arrangement_map,
    pullback,
    pushforward,
    pushforward_checked,
)

COLLAPSE = CellMap(INTERVAL, POINT, {"a": "a", "b": "a", "ab": "a"})
I_IN_SIMPLEX = inclusion_map(INTERVAL, SIMPLEX2)
BOUNDARY_IN_SIMPLEX = inclusion_map(BOUNDARY, SIMPLEX2)


def test_cell_map_validation():
    with pytest.raises(MapError):
        CellMap(INTERVAL, POINT, {"a": "a", "b": "a"})
    with pytest.raises(MapError):
        CellMap(INTERVAL, POINT, {"a": "a", "b": "a", "ab": "z"})
    with pytest.raises(MapError):
        CellMap(INTERVAL, POINT, {"a": "a", "b": "a", "ab": "a", "q": "a"})


def test_classify_examples():
    assert classify(HEX_MAP) == {
        "injective": False,
        "non_degenerate": False,
        "order_preserving": True,
        "simplicial": True,
    }
    assert classify(COLLAPSE) == {
        "injective": False,
        "non_degenerate": False,
        "order_preserving": True,
        "simplicial": True,
    }
    assert all(classify(identity_map(SIMPLEX2)).values())
    assert all(classify(I_IN_SIMPLEX).values())


def test_hexagon_pushforward():
    g = pushforward(HEX_MAP, HEX_F)
    # merged vertices and the merged edge
    assert g["G"] == 2
    assert g["P"] == 2
    assert g["GP"] == Fraction(7, 2)
    # unique preimages are copied
    for t in ("V", "W", "GV", "PV", "GW", "PW", "L", "R"):
        (src,) = HEX_MAP.preimage(t)
        assert g[t] == Fraction(HEX_F[src])
    assert set(g) == set(SQUARE.ids)


def test_hexagon_source_is_morse():
    assert is_discrete_morse(HEX, HEX_F)
    g, check = pushforward_checked(HEX_MAP, HEX_F)
    assert bool(check) == bool(is_discrete_morse(SQUARE, g))


def test_collapse_pushforward():
    assert pushforward(COLLAPSE, {"a": 4, "b": 1, "ab": 7}) == {"a": 0}


def test_identity_pushforward():
    rng = random.Random(1)
    for _ in range(20):
        f = random_morse(SIMPLEX2, rng)
        assert pushforward(identity_map(SIMPLEX2), f) == f


def test_injective_extension_above_faces():
    f = {"a": 0, "b": 1, "c": 2, "ab": 3, "bc": 5, "ac": 4}
    g = pushforward(BOUNDARY_IN_SIMPLEX, f)
    assert g["abc"] == 6
    assert all(g[c] == f[c] for c in BOUNDARY.ids)


def test_degenerate_non_simplicial_rejected():
    # the edge goes to a vertex while its ends go to different vertices
    bad = CellMap(INTERVAL, INTERVAL, {"a": "a", "b": "b", "ab": "a"})
    assert not classify(bad)["simplicial"] and not classify(bad)["non_degenerate"]
    with pytest.raises(MapError):
        pushforward(bad, {"a": 0, "b": 1, "ab": 2})


def _mix(lam: Fraction, f: dict, g: dict) -> dict:
    return {c: lam * Fraction(f[c]) + (1 - lam) * Fraction(g[c]) for c in f}


def test_affine_on_unique_preimages():
    rng = random.Random(2)
    unique = [t for t in SQUARE.ids if len(HEX_MAP.preimage(t)) == 1]
    for _ in range(50):
        f = {c: Fraction(rng.randint(-20, 20), 3) for c in HEX.ids}
        g = {c: Fraction(rng.randint(-20, 20), 3) for c in HEX.ids}
        lam = Fraction(rng.randint(0, 10), 10)
        lhs = pushforward(HEX_MAP, _mix(lam, f, g))
        pf, pg = pushforward(HEX_MAP, f), pushforward(HEX_MAP, g)
        for t in unique:
            assert lhs[t] == lam * pf[t] + (1 - lam) * pg[t]


def test_affine_when_choices_agree():
    # small perturbations keep every max and min on the same cell
    rng = random.Random(3)
    for _ in range(50):
        f = {c: Fraction(v) + Fraction(rng.randint(-9, 9), 100) for c, v in HEX_F.items()}
        lam = Fraction(rng.randint(0, 10), 10)
        lhs = pushforward(HEX_MAP, _mix(lam, HEX_F, f))
        pf, pg = pushforward(HEX_MAP, HEX_F), pushforward(HEX_MAP, f)
        assert lhs == {t: lam * pf[t] + (1 - lam) * pg[t] for t in SQUARE.ids}


def test_linearity_criterion():
    # the merged cell of the collapse is isolated, so zero goes to zero
    assert all(v == 0 for v in pushforward(COLLAPSE, {c: 0 for c in INTERVAL.ids}).values())
    # the merged vertices of the hexagon have cofaces
    zero = pushforward(HEX_MAP, {c: 0 for c in HEX.ids})
    assert zero["G"] != 0


@pytest.mark.parametrize("phi", [I_IN_SIMPLEX, BOUNDARY_IN_SIMPLEX, identity_map(SIMPLEX2)])
def test_injective_preserves_matching(phi):
    rng = random.Random(4)
    for _ in range(50):
        f = random_morse(phi.source, rng)
        g = pushforward(phi, f)
        assert is_discrete_morse(phi.target, g)
        image = {phi(c) for c in phi.source.ids}
        moved = {(phi(lo), phi(up)) for lo, up in induced_matching(phi.source, f)}
        kept = {(lo, up) for lo, up in induced_matching(phi.target, g) if lo in image and up in image}
        assert kept == moved


@pytest.mark.parametrize("phi", [I_IN_SIMPLEX, BOUNDARY_IN_SIMPLEX, identity_map(BOUNDARY)])
def test_pullback_of_pushforward_is_identity(phi):
    rng = random.Random(5)
    for _ in range(30):
        f = random_morse(phi.source, rng)
        assert pullback(phi, pushforward(phi, f)) == f


def test_pullback_examples():
    g = dimension_function(SIMPLEX2)
    assert pullback(identity_map(SIMPLEX2), g) == g
    assert pullback(I_IN_SIMPLEX, g) == dimension_function(INTERVAL)
    assert pullback(COLLAPSE, {"a": 5}) == {"a": 5, "b": 5, "ab": 5}


@pytest.mark.parametrize("phi", [I_IN_SIMPLEX, BOUNDARY_IN_SIMPLEX])
def test_pullback_along_inclusion_is_morse(phi):
    rng = random.Random(6)
    for _ in range(100):
        g = random_morse(phi.target, rng)
        assert is_discrete_morse(phi.source, pullback(phi, g))


def test_arrangement_map_counts():
    hit = induced_arrangement_map(I_IN_SIMPLEX)
    assert len(hit) == 2 and len(SIMPLEX2.edges) == 9
    assert set(hit.values()) == {("a", "ab"), ("b", "ab")}
    ident = induced_arrangement_map(identity_map(SIMPLEX2))
    assert sorted(ident.values()) == sorted(SIMPLEX2.edges)
    with pytest.raises(MapError):
        induced_arrangement_map(COLLAPSE)


def test_arrangement_map_preserves_signs():
    rng = random.Random(7)
    phi = BOUNDARY_IN_SIMPLEX
    corr = induced_arrangement_map(phi)
    for _ in range(50):
        f = {c: Fraction(rng.randint(0, 5)) for c in BOUNDARY.ids}
        src = sign_vector(BOUNDARY, f).to_dict()
        dst = sign_vector(SIMPLEX2, pushforward(phi, f)).to_dict()
        for e, img in corr.items():
            assert src[edge_key(*e)] == dst[edge_key(*img)]
