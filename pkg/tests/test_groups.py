import math
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from cayleysync.groups import (
    FAMILIES,
    GroupError,
    affine_pair,
    direct_product,
    group_from_json,
    make_affine,
    make_alternating,
    make_cyclic,
    make_dihedral,
    make_elementary_abelian,
    make_family,
    make_psl2,
    make_sl2,
    make_symmetric,
    match_generators,
)


def all_small_instances():
    out = [make_cyclic(n) for n in (1, 2, 5, 12)]
    out += [make_dihedral(n, g) for n in (3, 4, 7) for g in ("rot-refl", "two-refl")]
    out += [make_elementary_abelian(2, 3), make_elementary_abelian(3, 2)]
    out += [make_symmetric(4), make_symmetric(4, "transposition-cycle"), make_alternating(5)]
    out += [make_affine(5, 4), make_affine(7, 3), make_affine(3, 1)]
    out += [make_sl2(3), make_sl2(5), make_psl2(5)]
    return out


@pytest.mark.parametrize("gens", all_small_instances(), ids=lambda g: g.group.name + "/" + ",".join(g.names))
def test_axioms_and_generation(gens):
    G = gens.group
    assert G.check_axioms()
    assert gens.generates()
    assert G.mul(0, 0) == 0


@pytest.mark.parametrize(
    "gens,order",
    [
        (make_cyclic(9), 9),
        (make_dihedral(6), 12),
        (make_elementary_abelian(5, 2), 25),
        (make_symmetric(5), 120),
        (make_alternating(5), 60),
        (make_affine(7, 6), 42),
        (make_sl2(5), 120),
        (make_sl2(7), 336),
        (make_psl2(7), 168),
    ],
)
def test_orders(gens, order):
    assert gens.group.order == order


def test_sl2_order_formula():
    for p in (3, 5, 7):
        assert make_sl2(p).group.order == p * (p * p - 1)
        assert make_psl2(p).group.order == p * (p * p - 1) // 2


def test_dihedral_two_reflections_compose_to_rotation():
    gs = make_dihedral(7, "two-refl")
    s, t = gs.gens
    G = gs.group
    assert G.element_order(s) == 2 and G.element_order(t) == 2
    assert G.element_order(G.mul(s, t)) == 7


def test_dihedral_relations():
    gs = make_dihedral(8, "rot-refl")
    r, s = gs.gens
    G = gs.group
    assert G.power(r, 8) == 0 and G.mul(s, s) == 0
    assert G.mul(G.mul(s, r), s) == G.inv(r)


def test_affine_multiplication_rule():
    gs = make_affine(7, 3)
    G = gs.group
    for g, h in product(range(G.order), repeat=2):
        r1, s1 = affine_pair(gs, g)
        r2, s2 = affine_pair(gs, h)
        assert affine_pair(gs, G.mul(g, h)) == ((s2 * r1 + r2) % 7, (s1 * s2) % 7)


def test_elementary_abelian_is_abelian_with_exponent_p():
    G = make_elementary_abelian(3, 3).group
    for g in range(G.order):
        assert G.power(g, 3) == 0
        for h in range(G.order):
            assert G.mul(g, h) == G.mul(h, g)


def test_alternating_is_even_index_two():
    assert make_symmetric(5).group.order == 2 * make_alternating(5).group.order


def test_degenerate_cyclic():
    gs = make_cyclic(1)
    assert gs.degenerate and gs.group.order == 1


@given(st.integers(2, 40), st.integers(0, 100))
def test_cyclic_word_evaluation(n, length):
    assert make_cyclic(n).evaluate([0] * length) == length % n


@given(st.integers(3, 12), st.lists(st.integers(0, 1), max_size=20))
@settings(max_examples=50)
def test_evaluate_is_left_to_right_product(n, word):
    gs = make_dihedral(n)
    G = gs.group
    expected = 0
    for i in word:
        expected = G.mul(expected, gs.gens[i])
    assert gs.evaluate(word) == expected


def test_inverses_and_closure():
    G = make_symmetric(4).group
    for g in range(G.order):
        assert G.mul(g, G.inv(g)) == 0
    assert G.closure([]) == {0}
    assert G.is_subgroup(G.closure([1]))


def test_json_round_trip():
    gs = make_dihedral(5, "two-refl")
    back = group_from_json(gs.to_json())
    assert back.group.order == gs.group.order
    assert match_generators(gs, back) is not None


def test_match_generators_detects_non_isomorphic():
    assert match_generators(make_cyclic(6), make_cyclic(6)) is not None
    assert match_generators(make_cyclic(6), make_dihedral(3)) is None


def test_direct_product():
    gs = direct_product(make_cyclic(2), make_cyclic(3))
    assert gs.group.order == 6 and gs.generates()
    G = gs.group
    assert G.check_axioms()
    assert max(G.element_order(g) for g in range(6)) == 6


@pytest.mark.parametrize(
    "call",
    [
        lambda: make_cyclic(0),
        lambda: make_dihedral(2),
        lambda: make_dihedral(5, "bogus"),
        lambda: make_elementary_abelian(4, 2),
        lambda: make_affine(7, 4),
        lambda: make_sl2(4),
        lambda: make_sl2(11),
        lambda: make_symmetric(9),
        lambda: make_family("trivial"),
        lambda: make_family("cyclic"),
    ],
)
def test_invalid_parameters(call):
    with pytest.raises(GroupError):
        call()


def test_make_family_covers_every_family():
    params = {
        "cyclic": {"n": 5}, "dihedral": {"n": 5}, "elementary_abelian": {"p": 2, "m": 2},
        "affine": {"p": 5, "k": 2}, "dihedral_p2": {"p": 3}, "symmetric": {"n": 4},
        "alternating": {"n": 4}, "sl2": {"p": 3}, "psl2": {"p": 3},
    }
    assert set(params) == set(FAMILIES)
    for fam, kw in params.items():
        assert make_family(fam, **kw).generates()
    assert make_family("dihedral_p2", p=3).group.order == 18


def test_large_elementary_abelian_without_table():
    gs = make_elementary_abelian(2, 12)
    G = gs.group
    assert G.order == 4096 and not G.has_table
    assert G.check_axioms(sample=200)
    assert math.prod([2] * 12) == G.order
