from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from cayleysync.cayley import CayleyGraph, diameter, max_coset_word_length, shortest_word
from cayleysync.groups import (
    GroupError,
    GeneratorSet,
    make_affine,
    make_cyclic,
    make_dihedral,
    make_elementary_abelian,
    make_psl2,
    make_sl2,
    make_symmetric,
)


def word_enumeration_lengths(gs):
    """Oracle: evaluate every word by increasing length until all elements appear."""
    G = gs.group
    best = {0: 0}
    length = 0
    while len(best) < G.order:
        length += 1
        for word in product(range(len(gs.gens)), repeat=length):
            g = gs.evaluate(word)
            best.setdefault(g, length)
    return best


@pytest.mark.parametrize(
    "gs",
    [make_cyclic(7), make_dihedral(5), make_dihedral(5, "two-refl"), make_elementary_abelian(2, 3),
     make_symmetric(4), make_affine(5, 2)],
    ids=lambda g: g.group.name,
)
def test_bfs_matches_word_enumeration(gs):
    oracle = word_enumeration_lengths(gs)
    cg = CayleyGraph(gs)
    assert [cg.word_length(g) for g in range(gs.group.order)] == [oracle[g] for g in range(gs.group.order)]
    assert cg.diameter() == max(oracle.values())


@given(st.integers(2, 60))
def test_cyclic_diameter(n):
    assert diameter(make_cyclic(n)) == n - 1


@given(st.integers(3, 40))
@settings(max_examples=30)
def test_dihedral_rot_refl_diameter(n):
    assert diameter(make_dihedral(n)) <= -(-(n + 1) // 2)


@given(st.sampled_from(range(3, 40, 2)))
@settings(max_examples=15)
def test_dihedral_two_refl_diameter(n):
    assert diameter(make_dihedral(n, "two-refl")) <= n


def test_elementary_abelian_diameter():
    assert diameter(make_elementary_abelian(3, 2)) == 4
    assert diameter(make_elementary_abelian(5, 3)) == 12


def test_sl2_diameters():
    assert [diameter(make_sl2(p)) for p in (3, 5, 7)] == [5, 8, 10]
    assert [diameter(make_psl2(p)) for p in (3, 5, 7)] == [4, 6, 8]


@pytest.mark.parametrize("gs", [make_symmetric(4), make_dihedral(6), make_sl2(3)], ids=lambda g: g.group.name)
def test_shortest_word_is_witness(gs):
    cg = CayleyGraph(gs)
    for g in range(gs.group.order):
        w = cg.shortest_word(g)
        assert gs.evaluate(w) == g and len(w) == cg.word_length(g)


def test_module_level_helpers():
    gs = make_cyclic(6)
    assert shortest_word(gs, 4) == (0, 0, 0, 0)
    H = gs.group.closure([3])
    assert max_coset_word_length(gs, H) == 2


def test_coset_word_length_trivial_cases():
    gs = make_dihedral(5)
    G = gs.group
    assert max_coset_word_length(gs, [0]) == diameter(gs)
    assert max_coset_word_length(gs, range(G.order)) == 0
    with pytest.raises(GroupError):
        max_coset_word_length(gs, [1])


def test_non_generating_set_rejected():
    G = make_cyclic(6).group
    with pytest.raises(GroupError):
        CayleyGraph(GeneratorSet(G, (2,), ("x",))).diameter()
