# test_orbitals.py

import numpy as np
import pytest

from twoclosure.errors import DegreeMismatchError, TooLargeError
from twoclosure.orbitals import is_rank3, preserves_orbitals, two_orbits
from twoclosure.perm import Permutation, PermutationGroup, symmetric_group
from twoclosure.settings import Settings
from twoclosure.zoo import zoo_johnson_pairs


def test_symmetric_group_has_rank_two():
    structure = two_orbits(symmetric_group(5))
    assert structure.rank == 2
    assert structure.subdegrees == [4]
    ok, subdegrees = is_rank3(structure)
    assert not ok and subdegrees is None


def test_petersen_subdegrees():
    structure = two_orbits(zoo_johnson_pairs(5).group)
    assert structure.rank == 3
    assert structure.is_rank3() == (True, (3, 6))


def test_cyclic_four_has_rank_four():
    group = PermutationGroup(4, [Permutation.from_cycles(4, [(0, 1, 2, 3)])])
    structure = two_orbits(group)
    assert structure.rank == 4
    assert not structure.is_symmetric(structure.color(0, 1))
    assert structure.paired(structure.color(0, 1)) == structure.color(0, 3)


def test_pentagon_table(d5):
    structure = two_orbits(d5)
    assert structure.diagonal_colors == (0,)
    assert structure.transitive
    assert np.all(np.diagonal(structure.table) == 0)
    assert structure.color(0, 1) == structure.color(1, 2) == structure.color(0, 4)
    assert structure.color(0, 2) != structure.color(0, 1)
    assert sorted(structure.neighbours(structure.color(0, 1), 0).tolist()) == [1, 4]
    assert structure.subdegree(structure.smallest_color()) == 2


def test_table_is_group_invariant(d5):
    structure = two_orbits(d5)
    for g in d5.generators:
        assert structure.preserves(g)
        assert preserves_orbitals(structure, g)


def test_transposition_merges_orbitals(d5):
    structure = two_orbits(d5)
    assert not structure.preserves(Permutation.from_cycles(5, [(0, 1)]))
    with pytest.raises(DegreeMismatchError):
        structure.preserves(Permutation.identity(4))


def test_intransitive_group_gets_flood_table():
    group = PermutationGroup(4, [Permutation.from_cycles(4, [(0, 1)]), Permutation.from_cycles(4, [(2, 3)])])
    structure = two_orbits(group)
    assert not structure.transitive
    assert len(structure.diagonal_colors) == 2
    assert structure.is_rank3() == (False, None)


def test_subgroup_colours_refine_supergroup_colours(d5):
    inner = two_orbits(PermutationGroup(5, [Permutation.from_cycles(5, [(0, 1, 2, 3, 4)])]))
    outer = two_orbits(d5)
    for c in range(inner.rank):
        cells = outer.table[inner.table == c]
        assert len(set(cells.tolist())) == 1


def test_orbital_cap():
    with pytest.raises(TooLargeError):
        two_orbits(symmetric_group(6), Settings(orbital_cap=5))
