# test_tensor.py

import numpy as np
import pytest

from twoclosure.affine import detect_affine
from twoclosure.errors import ClosureError
from twoclosure.formulas import order_sl, tensor_closure_order
from twoclosure.gf import prime_field, prime_power_field
from twoclosure.orbitals import two_orbits
from twoclosure.outcome import candidate_is_sound
from twoclosure.perm import PermutationGroup
from twoclosure.tensor import (
    TensorBasis,
    _simple_mask,
    check_tensor_basis,
    emit_tensor_closure,
    extract_slw,
    find_tensor_basis,
    gl_generators,
    kron_codes,
    run_tensor,
    shift_independent,
    tensor_parameters,
)
from twoclosure.zoo import zoo_bilinear, zoo_clebsch, zoo_johnson_pairs, zoo_paley


def bilinear_setup(q: int, m: int):
    group = zoo_bilinear(q, m).group
    return group, detect_affine(group), two_orbits(group)


def test_tensor_parameters():
    assert tensor_parameters(two_orbits(zoo_bilinear(2, 2).group), 2) == (2, 2)
    assert tensor_parameters(two_orbits(zoo_paley(13).group), 13) is None


def test_kron_codes_identity():
    fs = prime_power_field(3)
    out = kron_codes(fs, np.eye(2, dtype=np.int64), np.eye(3, dtype=np.int64))
    np.testing.assert_array_equal(out, np.eye(6, dtype=np.int64))


def test_gl_generators():
    assert len(gl_generators(prime_power_field(2), 3)) == 3
    assert len(gl_generators(prime_power_field(3), 2)) == 4
    assert len(gl_generators(prime_power_field(4), 1)) == 1


def test_bilinear_two_by_two():
    outcome = run_tensor(zoo_bilinear(2, 2).group)
    assert outcome.succeeded
    assert outcome.order == 1152
    assert (outcome.flags["q"], outcome.flags["m"]) == (2, 2)


def test_clebsch_is_not_a_tensor_product():
    group = zoo_clebsch().group
    outcome = run_tensor(group, frame=detect_affine(group))
    assert not outcome.succeeded


def test_nonaffine_input_fails():
    outcome = run_tensor(zoo_johnson_pairs(5).group)
    assert not outcome.succeeded
    assert outcome.reason == "not affine"


@pytest.mark.slow
def test_bilinear_two_by_three():
    outcome = run_tensor(zoo_bilinear(2, 3).group)
    assert outcome.succeeded
    assert outcome.order == 64512


@pytest.mark.slow
def test_bilinear_three_by_two():
    outcome = run_tensor(zoo_bilinear(3, 2).group)
    assert outcome.succeeded
    assert outcome.order == 186624


def test_find_and_check_tensor_basis():
    _, frame, structure = bilinear_setup(2, 2)
    fs = prime_field(2, 4)
    basis = find_tensor_basis(frame, fs, 2, structure)
    assert basis is not None
    assert basis.vectors.shape == (2, 2)
    assert check_tensor_basis(frame, fs, basis)

    colour = structure.table[frame.zero][frame.point_at]
    simple = colour[basis.vectors[0, 0]]
    other = int(np.flatnonzero((colour != simple) & (colour != colour[0]))[0])
    vectors = basis.vectors.copy()
    vectors[0, 0] = other
    assert not check_tensor_basis(frame, fs, TensorBasis(fs, 2, vectors))


def test_dependent_basis_is_rejected():
    _, frame, structure = bilinear_setup(2, 2)
    fs = prime_field(2, 4)
    basis = find_tensor_basis(frame, fs, 2, structure)
    vectors = basis.vectors.copy()
    vectors[1, 1] = vectors[0, 0]
    assert not check_tensor_basis(frame, fs, TensorBasis(fs, 2, vectors))


def test_emit_tensor_closure():
    group, frame, structure = bilinear_setup(2, 2)
    basis = find_tensor_basis(frame, prime_field(2, 4), 2, structure)
    closure = emit_tensor_closure(frame, basis)
    assert closure.order == 1152
    assert candidate_is_sound(group, closure, structure)


def test_extract_slw_needs_m_at_least_four():
    _, frame, _ = bilinear_setup(2, 2)
    with pytest.raises(ClosureError):
        extract_slw(frame, prime_field(2, 4), 3)


def test_shift_independent():
    _, frame, structure = bilinear_setup(2, 2)
    colour = structure.table[frame.zero][frame.point_at]
    v, w = (int(x) for x in np.flatnonzero(colour != colour[0])[:2])

    g = shift_independent(frame.g0, {0, v}, {0, v}, frame)
    assert g is not None
    assert int(frame.index_map_of(g)[v]) not in (0, v)

    assert shift_independent(frame.g0, {0, v}, {0, w}, frame).is_identity()
    assert shift_independent(PermutationGroup(frame.n), {0, v}, {0, v}, frame) is None


@pytest.mark.slow
def test_constructive_basis_in_dimension_eight():
    group, frame, structure = bilinear_setup(2, 4)
    fs = prime_field(2, 8)
    notes = []
    basis = find_tensor_basis(frame, fs, 4, structure, notes=notes)
    assert basis is not None
    assert not any("scanning" in n for n in notes)
    assert check_tensor_basis(frame, fs, basis)

    slw = extract_slw(frame, fs, 4, _simple_mask(frame, structure, 2, 4))
    assert slw.order == order_sl(4, 2) == 20160

    outcome = run_tensor(group, structure, frame=frame)
    assert outcome.order == tensor_closure_order(2, 4)
