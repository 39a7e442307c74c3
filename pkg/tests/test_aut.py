# test_aut.py

import numpy as np
import pytest

from twoclosure.aut import OrderedPartition, automorphism_group, oracle_two_closure, refine
from twoclosure.errors import OracleUnavailableError
from twoclosure.orbitals import OrbitalStructure, two_orbits
from twoclosure.perm import Permutation, PermutationGroup
from twoclosure.settings import Settings
from twoclosure.zoo import zoo_imprimitive, zoo_johnson_pairs, zoo_paley, zoo_product


def test_pentagon_closure_is_dihedral(d5):
    closure = oracle_two_closure(PermutationGroup(5, [Permutation.from_cycles(5, [(0, 1, 2, 3, 4)])]))
    # the cyclic group has five 2-orbits, so its closure is itself
    assert closure.order == 5
    assert oracle_two_closure(d5).order == 10


def test_square_closure(d4):
    assert oracle_two_closure(d4).order == 8


def test_petersen_closure():
    group = zoo_johnson_pairs(5).group
    assert group.order == 60
    closure = oracle_two_closure(group)
    assert closure.order == 120
    structure = two_orbits(group)
    assert all(structure.preserves(g) for g in closure.generators)
    assert all(closure.contains(g) for g in group.generators)


def test_paley_thirteen_closure():
    assert oracle_two_closure(zoo_paley(13).group).order == 78


def test_closure_is_idempotent():
    closure = oracle_two_closure(zoo_johnson_pairs(5).group)
    assert oracle_two_closure(closure).order == closure.order


def test_small_imprimitive_closures():
    assert oracle_two_closure(zoo_imprimitive("S3", 2).group).order == 72
    assert oracle_two_closure(zoo_product("S3").group).order == 72


def test_refine_splits_by_degree():
    # a path 0-1-2 coloured as edge / non-edge
    table = np.array([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    structure = OrbitalStructure(3, table, (0,), False)
    cells = refine(structure, OrderedPartition.unit(3)).as_cells()
    assert sorted(map(sorted, cells)) == [[0, 2], [1]]


def test_refine_is_stable_on_transitive_table(d5):
    partition = refine(two_orbits(d5), OrderedPartition.unit(5))
    assert partition.count == 1
    assert not partition.is_discrete()


def test_individualised_partition_becomes_discrete(d5):
    start = OrderedPartition.from_cells(5, [[0], [1, 2, 3, 4]])
    partition = refine(two_orbits(d5), start)
    assert partition.count == 3
    assert sorted(map(sorted, partition.as_cells())) == [[0], [1, 4], [2, 3]]


def test_from_cells_requires_cover():
    with pytest.raises(ValueError):
        OrderedPartition.from_cells(3, [[0, 1]])


def test_oracle_cap():
    with pytest.raises(OracleUnavailableError):
        oracle_two_closure(zoo_johnson_pairs(5).group, Settings(oracle_cap=8))
    with pytest.raises(OracleUnavailableError):
        automorphism_group(two_orbits(zoo_johnson_pairs(5).group), Settings(oracle_cap=8))


@pytest.mark.slow
def test_larger_oracle_closures():
    assert oracle_two_closure(zoo_imprimitive("F20", 3).group).order == 10368000
    assert oracle_two_closure(zoo_product("F20").group).order == 28800
    assert oracle_two_closure(zoo_johnson_pairs(7).group).order == 5040
