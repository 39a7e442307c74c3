# test_affine.py

import numpy as np
import pytest

from twoclosure.affine import FieldFrame, detect_affine, frobenius_codes, matrix_of
from twoclosure.errors import InconsistentFrameError
from twoclosure.gf import companion_matrix, field_from_element, prime_field
from twoclosure.perm import Permutation, symmetric_group
from twoclosure.zoo import zoo_clebsch, zoo_imprimitive, zoo_johnson_pairs, zoo_paley


@pytest.fixture
def s4_frame():
    frame = detect_affine(symmetric_group(4))
    assert frame is not None
    return frame


def test_s4_is_affine(s4_frame):
    assert (s4_frame.p, s4_frame.d) == (2, 2)
    assert s4_frame.g0.order == 6
    assert s4_frame.point_at[0] == 0
    assert sorted(s4_frame.point_at.tolist()) == [0, 1, 2, 3]


def test_paley_frame():
    frame = detect_affine(zoo_paley(13).group)
    assert frame is not None
    assert (frame.p, frame.d) == (13, 1)
    assert frame.g0.order == 6


def test_non_affine_groups():
    assert detect_affine(zoo_johnson_pairs(5).group) is None
    assert detect_affine(zoo_imprimitive("S3", 2).group) is None


def test_translations_lie_in_the_group():
    frame = detect_affine(zoo_clebsch().group)
    assert frame is not None and frame.d == 4
    for k in range(frame.d):
        v = np.zeros(frame.d, dtype=np.int64)
        v[k] = 1
        t = frame.translation(v)
        assert frame.group.contains(t)
        assert t(frame.zero) == frame.point(v)


def test_matrices_reproduce_stabilizer():
    frame = detect_affine(zoo_clebsch().group)
    for g, m in zip(frame.g0.generators, frame.g0_matrices):
        assert frame.permutation_from_matrix(m) == g
        np.testing.assert_array_equal(frame.index_map_of(g), frame.indices(frame.vectors @ m))


def test_matrix_of_rejects_non_stabilizer(s4_frame):
    moving = Permutation.from_cycles(4, [(0, 1)])
    with pytest.raises(InconsistentFrameError):
        matrix_of(s4_frame, moving)


def test_field_frame_over_gf4(s4_frame):
    fs = field_from_element(companion_matrix([1, 1], 2), 1, 2)
    ff = FieldFrame.with_standard_basis(s4_frame, fs)
    assert ff.q == 4 and ff.dim == 1
    assert sorted(ff.coords[:, 0].tolist()) == [0, 1, 2, 3]
    np.testing.assert_array_equal(ff.index_from_coords(ff.coords), np.arange(4))
    assert sorted(set(ff.span([1]).tolist())) == [0, 1, 2, 3]
    np.testing.assert_array_equal(ff.matrix_codes(fs.c, 0), [[2]])

    scalar = ff.semilinear_permutation(np.array([[2]]))
    assert scalar.order() == 3
    assert scalar(0) == 0
    assert s4_frame.group.contains(scalar)
    assert s4_frame.group.contains(ff.semilinear_permutation(np.array([[1]]), frob=1))


def test_field_frame_over_prime_field(s4_frame):
    ff = FieldFrame.with_standard_basis(s4_frame, prime_field(2, 2))
    assert ff.dim == 2
    np.testing.assert_array_equal(ff.coords, s4_frame.vectors)
    assert len(set(ff.span([1]).tolist())) == 2
    np.testing.assert_array_equal(ff.apply(np.eye(2, dtype=np.int64)), ff.coords)


def test_frobenius_codes():
    fs = field_from_element(companion_matrix([1, 1], 2), 1, 2)
    np.testing.assert_array_equal(frobenius_codes(fs, np.arange(4), 1), [0, 1, 3, 2])
    np.testing.assert_array_equal(frobenius_codes(fs, np.arange(4), 2), np.arange(4))
