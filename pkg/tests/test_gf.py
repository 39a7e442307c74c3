# test_gf.py

import numpy as np
import pytest

from twoclosure.errors import TooLargeError
from twoclosure.gf import (
    MatrixSpace,
    centralizer_space,
    companion_matrix,
    enumerate_field_structures,
    enumerate_units,
    field_from_element,
    has_order,
    inv_mod_mat,
    matmul_mod,
    nullspace_mod,
    prime_power,
    prime_power_field,
    rank_mod,
    semilinear_check,
    tuple_intertwiner,
)
from twoclosure.settings import Settings


def test_rank_and_nullspace():
    a = np.array([[1, 2, 0], [2, 4, 0], [0, 0, 1]])
    assert rank_mod(a, 5) == 2
    null = nullspace_mod(a, 5)
    assert null.shape == (3, 1)
    assert not matmul_mod(a, null, 5).any()


def test_inverse():
    a = np.array([[1, 1], [0, 1]])
    inv = inv_mod_mat(a, 3)
    np.testing.assert_array_equal(matmul_mod(a, inv, 3), np.eye(2, dtype=np.int64))


def test_prime_power():
    assert prime_power(81) == (3, 4)
    assert prime_power(2) == (2, 1)
    assert prime_power(12) is None
    assert prime_power(1) is None


def test_gf4_from_companion():
    c = companion_matrix([1, 1], 2)
    assert has_order(c, 3, 2)
    fs = field_from_element(c, 1, 2)
    assert fs is not None
    assert fs.q == 4 and fs.e == 2
    # c + c^2 = 1 in GF(4)
    assert fs.add(2, 3) == 1
    assert fs.add(1, 1) == 0
    assert fs.neg_one == 1


def test_non_field_element_rejected():
    # a 3-cycle permutation matrix plus a fixed coordinate: order 3, but 1 + c is singular
    c = np.zeros((4, 4), dtype=np.int64)
    c[0, 1] = c[1, 2] = c[2, 0] = c[3, 3] = 1
    assert field_from_element(c, 2, 2) is None


def test_wrong_order_rejected():
    assert field_from_element(np.eye(2, dtype=np.int64), 1, 2) is None


def test_field_arithmetic_gf9():
    fs = prime_power_field(9)
    assert fs.p == 3 and fs.q == 9
    for x in range(1, 9):
        assert fs.mul(x, fs.inv(x)) == 1
        assert fs.add(x, fs.neg(x)) == 0
        assert fs.sub(x, x) == 0
    assert fs.power(2, 8) == 1
    # Frobenius is a field automorphism
    for x in range(9):
        for y in range(9):
            assert fs.frobenius(fs.add(x, y), 1) == fs.add(fs.frobenius(x, 1), fs.frobenius(y, 1))
    np.testing.assert_array_equal(fs.mul_table[3], [fs.mul(3, y) for y in range(9)])
    np.testing.assert_array_equal(fs.add_table[5], [fs.add(5, y) for y in range(9)])


def test_prime_field_codes():
    fs = prime_power_field(7)
    codes = fs.prime_field_codes
    assert codes[0] == 0 and codes[1] == 1
    assert len(set(codes)) == 7
    assert fs.add(codes[3], codes[4]) == codes[0]


def test_poly_codes_are_a_bijection():
    fs = prime_power_field(8)
    assert sorted(fs.poly_codes.tolist()) == list(range(8))
    for code in range(8):
        index = sum(int(x) * 2**j for j, x in enumerate(fs.code_polys[code]))
        assert fs.poly_codes[index] == code


def test_rank_codes():
    fs = prime_power_field(4)
    assert fs.rank_codes([[1, 2], [2, 3]]) == 1
    assert fs.rank_codes([[1, 0], [0, 1]]) == 2
    assert fs.rank_codes([[0, 0]]) == 0


def test_prime_power_field_rejects_composite():
    with pytest.raises(ValueError):
        prime_power_field(6)


def test_centralizer_of_scalar_is_everything():
    space = centralizer_space([2 * np.eye(2, dtype=np.int64)], 3)
    assert space.dimension == 4


def test_centralizer_of_field_generator_is_the_field():
    fs = prime_power_field(4)
    space = centralizer_space([fs.c], 2)
    assert space.dimension == 2
    assert len(enumerate_units(space)) == 3


def test_enumerate_units_cap():
    space = MatrixSpace(2, 3, tuple(np.eye(9, dtype=np.int64)[k].reshape(3, 3) for k in range(9)))
    with pytest.raises(TooLargeError):
        enumerate_units(space, cap=100)


def test_semilinear_check():
    fs = prime_power_field(4)
    assert semilinear_check([fs.c], fs) == [0]
    # x -> x^2 swaps c and c^2
    frob = np.array([[1, 0], [1, 1]])
    assert semilinear_check([frob], fs) == [1]
    assert semilinear_check([np.array([[0, 1], [1, 0]]), fs.c], fs) == [1, 0]


def test_field_structures_of_gamma_l_1_4():
    fs = prime_power_field(4)
    found, complete = enumerate_field_structures([fs.c], [], 2, 2)
    assert complete
    qs = sorted(f.q for _, f in found)
    assert qs == [2, 4]


def test_tuple_intertwiner():
    g = np.array([[0, 1], [1, 0]])
    t = np.array([[1, 1], [0, 1]])
    h = matmul_mod(matmul_mod(inv_mod_mat(t, 3), g, 3), t, 3)
    found = tuple_intertwiner([g], [h], 3, Settings())
    assert found is not None
    np.testing.assert_array_equal(matmul_mod(g, found, 3), matmul_mod(found, h, 3))


def test_tuple_intertwiner_none_for_different_orders():
    g = np.eye(2, dtype=np.int64)
    h = np.array([[0, 1], [1, 0]])
    assert tuple_intertwiner([g], [h], 3) is None
