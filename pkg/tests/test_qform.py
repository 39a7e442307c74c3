# test_qform.py

import numpy as np
import pytest

from twoclosure.affine import FieldFrame, detect_affine, frobenius_codes
from twoclosure.gf import prime_field, prime_power_field
from twoclosure.orbitals import two_orbits
from twoclosure.outcome import candidate_is_sound
from twoclosure.qform import (
    QuadraticFormTable,
    emit_qform_closure,
    form_closure,
    isotropic_orbit,
    propagate_form,
    reduce_generators,
    run_qform,
    standard_basis,
    validate_form,
)
from twoclosure.zoo import zoo_affine_polar, zoo_johnson_pairs, zoo_paley


def elliptic_setup():
    """GF(2)^4 under the elliptic polar group, with the isotropic mask and generator index maps."""
    group = zoo_affine_polar("-", 2, 2).group
    frame = detect_affine(group)
    structure = two_orbits(group)
    ff = FieldFrame.with_standard_basis(frame, prime_field(2, 4))
    colour = structure.table[frame.zero][frame.point_at]
    isotropic = colour == isotropic_orbit(structure, 2)
    index_maps = [frame.index_map_of(g) for g in frame.g0.generators]
    return group, frame, structure, ff, isotropic, index_maps


def elliptic_table(ff, isotropic, index_maps):
    seed = int(np.flatnonzero(~isotropic)[1])
    return propagate_form(ff, index_maps, [(1, 0)] * len(index_maps), seed, 1, isotropic)


def test_isotropic_orbit():
    structure = two_orbits(zoo_affine_polar("-", 2, 2).group)
    colour = isotropic_orbit(structure, 2)
    assert colour is not None
    assert structure.subdegree(colour) == 5
    assert isotropic_orbit(two_orbits(zoo_paley(13).group), 13) is None


def test_reduce_generators_keeps_short_lists():
    frame = detect_affine(zoo_paley(13).group)
    gens = reduce_generators(frame.g0, 6)
    assert gens == [g for g in frame.g0.generators if not g.is_identity()]


def test_form_table_scaling():
    fs = prime_power_field(5)
    table = QuadraticFormTable(fs, np.array([0, 1, 2, 3, 4]))
    assert table.total
    np.testing.assert_array_equal(table.scaled(2).values, fs.mul_table[2, [0, 1, 2, 3, 4]])
    assert not QuadraticFormTable(fs, np.array([0, -1])).total


def test_elliptic_dimension_four_by_brute_force():
    outcome = run_qform(zoo_affine_polar("-", 2, 2).group)
    assert outcome.succeeded
    assert outcome.order == 1920
    assert outcome.flags["route"] == "brute"


def test_hyperbolic_dimension_four_by_brute_force():
    outcome = run_qform(zoo_affine_polar("+", 2, 2).group)
    assert outcome.order == 1152


def test_form_route_recovers_elliptic_form():
    group = zoo_affine_polar("-", 2, 2).group
    frame = detect_affine(group)
    notes = []
    closure = form_closure(group, frame, two_orbits(group), notes=notes)
    assert closure is not None
    assert closure.order == 1920
    assert any("type -1" in n for n in notes)


def test_nonaffine_input_fails():
    outcome = run_qform(zoo_johnson_pairs(5).group)
    assert not outcome.succeeded


@pytest.mark.slow
def test_hyperbolic_over_gf3_uses_the_form():
    outcome = run_qform(zoo_affine_polar("+", 2, 3).group)
    assert outcome.order == 186624
    assert outcome.flags["route"] == "form"


@pytest.mark.slow
def test_hyperbolic_dimension_six():
    outcome = run_qform(zoo_affine_polar("+", 3, 2).group)
    assert outcome.order == 64 * 40320
    assert outcome.flags["route"] == "form"


def test_propagated_table_is_the_elliptic_form():
    _, _, _, ff, isotropic, index_maps = elliptic_setup()
    table = elliptic_table(ff, isotropic, index_maps)
    assert table is not None
    assert table.total
    # over GF(2) the form is 1 exactly on the nonisotropic vectors
    expected = (~isotropic).astype(np.int64)
    expected[0] = 0
    np.testing.assert_array_equal(table.values, expected)
    fs = ff.fs
    for index_map in index_maps:
        np.testing.assert_array_equal(table.values[index_map], fs.mul_table[1, frobenius_codes(fs, table.values, 0)])


def test_propagation_rejects_a_clash_with_the_isotropic_orbit():
    _, _, _, ff, isotropic, index_maps = elliptic_setup()
    seed = int(np.flatnonzero(isotropic)[0])
    assert propagate_form(ff, index_maps, [(1, 0)] * len(index_maps), seed, 1, isotropic) is None


def test_validate_form_accepts_the_elliptic_form():
    _, _, _, ff, isotropic, index_maps = elliptic_setup()
    table = elliptic_table(ff, isotropic, index_maps)
    nondegenerate, witness, gram = validate_form(ff, index_maps, table)
    assert nondegenerate
    assert witness == [(1, 0)] * len(index_maps)
    assert ff.fs.rank_codes(gram.tolist()) == 4


def test_validate_form_rejections():
    _, _, _, ff, isotropic, index_maps = elliptic_setup()
    table = elliptic_table(ff, isotropic, index_maps)
    n = len(table.values)

    partial = table.values.copy()
    partial[-1] = -1
    assert validate_form(ff, index_maps, QuadraticFormTable(ff.fs, partial))[:2] == (False, None)

    # the indicator of a single vector is not a quadratic form
    flipped = table.values.copy()
    flipped[int(np.flatnonzero(~isotropic)[1])] = 0
    assert validate_form(ff, index_maps, QuadraticFormTable(ff.fs, flipped))[:2] == (False, None)

    zero = QuadraticFormTable(ff.fs, np.zeros(n, dtype=np.int64))
    assert validate_form(ff, index_maps, zero)[:2] == (False, None)


def test_emit_elliptic_closure():
    group, frame, structure, ff, isotropic, index_maps = elliptic_setup()
    table = elliptic_table(ff, isotropic, index_maps)
    basis, eps = standard_basis(ff, table)
    assert eps == -1
    assert table.eps == -1
    notes = []
    closure = emit_qform_closure(frame, ff.fs, table, basis, eps, notes=notes)
    assert closure.order == 1920
    assert candidate_is_sound(group, closure, structure)


def test_both_routes_run_and_equal_orders_keep_brute():
    outcome = run_qform(zoo_affine_polar("-", 2, 2).group)
    assert outcome.flags["route"] == "brute"
    assert any("form of type -1" in n for n in outcome.notes)
