# test_small.py

import pytest

from twoclosure.affine import detect_affine
from twoclosure.errors import TooLargeError
from twoclosure.settings import Settings
from twoclosure.small import (
    brute_closure_in_agl,
    embeddings_small,
    order_gate,
    run_small,
    small_generating_tuple,
)
from twoclosure.zoo import zoo_clebsch, zoo_johnson_pairs, zoo_paley


def test_order_gate():
    assert order_gate(zoo_paley(13).group)


def test_generating_tuple_pads_with_identity():
    frame = detect_affine(zoo_paley(13).group)
    gens = small_generating_tuple(frame.g0, 4)
    assert len(gens) == 4
    assert sum(1 for g in gens if not g.is_identity()) >= 1


def test_generating_tuple_cap():
    frame = detect_affine(zoo_clebsch().group)
    with pytest.raises(TooLargeError):
        small_generating_tuple(frame.g0, 4, Settings(point_stabilizer_cap=4))


def test_embeddings_of_paley():
    frame = detect_affine(zoo_paley(13).group)
    candidates, class_s, complete = embeddings_small(frame)
    assert complete and class_s
    assert [(c.a, c.fs.q) for c in candidates] == [(1, 13)]


def test_paley_closures():
    outcome = run_small(zoo_paley(13).group)
    assert outcome.succeeded
    assert outcome.order == 78
    assert outcome.flags["a_min"] == 1
    assert run_small(zoo_paley(9).group).order == 72


def test_clebsch_closure():
    outcome = run_small(zoo_clebsch().group)
    assert outcome.succeeded
    assert outcome.order == 1920


def test_agl_cap():
    group = zoo_paley(13).group
    frame = detect_affine(group)
    candidates, _, _ = embeddings_small(frame)
    with pytest.raises(TooLargeError):
        brute_closure_in_agl(group, frame, candidates[0], settings=Settings(agl_cap=10))


def test_nonaffine_input_fails():
    outcome = run_small(zoo_johnson_pairs(5).group)
    assert not outcome.succeeded
    assert outcome.reason == "not affine"
