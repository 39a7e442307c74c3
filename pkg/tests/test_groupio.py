# test_groupio.py

import pytest

from twoclosure.errors import GroupParseError, MalformedPermutationError
from twoclosure.groupio import format_group, parse_group, parse_permutation, read_group
from twoclosure.perm import Permutation
from twoclosure.zoo import ZOO, build_instance


def test_cycle_form():
    degree, gens = parse_group("5\n(0 1 2 3 4)\n(0 1)\n")
    assert degree == 5
    assert gens == [Permutation.from_cycles(5, [(0, 1, 2, 3, 4)]), Permutation.from_cycles(5, [(0, 1)])]


def test_image_form():
    degree, gens = parse_group("4\n[1,0,3,2]\n")
    assert degree == 4
    assert gens == [Permutation([1, 0, 3, 2])]


def test_comments_blank_lines_and_identity():
    text = "# header\n\n3  # degree\n()\n(0 1 2) # rotation\n\n"
    degree, gens = parse_group(text)
    assert degree == 3
    assert gens[0].is_identity()
    assert gens[1] == Permutation([1, 2, 0])


def test_unclosed_cycle_column():
    with pytest.raises(GroupParseError) as info:
        parse_permutation("(0 1", 5)
    assert info.value.column == 4
    assert info.value.line == 1


def test_error_line_numbers():
    with pytest.raises(GroupParseError) as info:
        parse_group("3\n(0 1)\n(0 x)\n")
    assert info.value.line == 3
    assert info.value.column == 3


def test_point_out_of_range():
    with pytest.raises(GroupParseError):
        parse_group("3\n(0 3)\n")


def test_bad_degree_and_empty():
    with pytest.raises(GroupParseError):
        parse_group("x\n")
    with pytest.raises(GroupParseError):
        parse_group("# only a comment\n")


def test_image_form_errors():
    with pytest.raises(MalformedPermutationError):
        parse_group("3\n[0,1]\n")
    with pytest.raises(MalformedPermutationError):
        parse_group("3\n[0,0,1]\n")
    with pytest.raises(GroupParseError):
        parse_group("3\n[0,1,2\n")
    with pytest.raises(GroupParseError):
        parse_group("3\n[0,a,2]\n")


def test_repeated_point_in_cycle():
    with pytest.raises(MalformedPermutationError):
        parse_group("4\n(0 1 0)\n")


def test_format_group():
    group = read_group("4\n[1,0,3,2]\n()\n")
    assert format_group(group) == "4\n(0 1)(2 3)\n()\n"
    assert format_group(group, header=["klein"]).startswith("# klein\n4\n")


def test_zoo_round_trip():
    for name, params in [("johnson", ["5"]), ("paley", ["13"]), ("imprimitive", ["F20", "3"]), ("clebsch", [])]:
        assert name in ZOO
        descriptor = build_instance(name, params)
        degree, gens = parse_group(format_group(descriptor.group, header=descriptor.header()))
        assert degree == descriptor.degree
        assert gens == list(descriptor.group.generators)
