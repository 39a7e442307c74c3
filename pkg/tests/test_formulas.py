# test_formulas.py

import pytest

from twoclosure.formulas import (
    affine_polar_subdegrees,
    bilinear_subdegrees,
    hamming_subdegrees,
    isotropic_count,
    order_gl,
    order_orthogonal,
    order_sl,
    product_order,
    qform_closure_order,
    sign,
    tensor_closure_order,
    wreath_order,
)


def test_sign():
    assert sign("+") == sign(1) == 1
    assert sign("-") == sign(-1) == -1
    with pytest.raises(ValueError):
        sign("0")


def test_linear_group_orders():
    assert order_gl(2, 2) == 6
    assert order_gl(3, 2) == 168
    assert order_sl(2, 3) == 24


def test_orthogonal_orders():
    assert order_orthogonal("+", 4, 2) == 72
    assert order_orthogonal("-", 4, 2) == 120
    assert order_orthogonal("+", 6, 2) == 40320
    with pytest.raises(ValueError):
        order_orthogonal("+", 3, 2)


def test_subdegree_formulas():
    assert hamming_subdegrees(5) == (8, 16)
    assert bilinear_subdegrees(2, 3) == (21, 42)
    assert bilinear_subdegrees(3, 2) == (32, 48)
    assert bilinear_subdegrees(2, 4) == (45, 210)
    assert bilinear_subdegrees(3, 3) == (104, 624)
    assert affine_polar_subdegrees("-", 2, 2) == (5, 10)
    assert affine_polar_subdegrees("+", 2, 3) == (32, 48)
    assert affine_polar_subdegrees("+", 3, 2) == (28, 35)
    assert isotropic_count("+", 3, 2) == 35


def test_bilinear_and_polar_coincide_in_dimension_four():
    assert bilinear_subdegrees(3, 2) == affine_polar_subdegrees("+", 2, 3)


def test_closure_orders():
    assert wreath_order(5, 3) == 10368000
    assert product_order(5) == 28800
    assert tensor_closure_order(2, 3) == 64512
    assert tensor_closure_order(3, 2) == 186624
    assert qform_closure_order("-", 2, 2) == 1920
    assert qform_closure_order("+", 2, 2) == 1152
    assert qform_closure_order("+", 2, 3) == 186624
    assert qform_closure_order("+", 3, 2) == 64 * 40320
