# test_cli.py

import json

import pytest

from twoclosure.cli import main
from twoclosure.settings import get_settings


@pytest.fixture
def petersen(tmp_path):
    path = tmp_path / "petersen.txt"
    assert main(["zoo", "johnson", "5", "-o", str(path)]) == 0
    return path


def test_zoo_to_stdout(capsys):
    assert main(["zoo", "paley", "13"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("# paley q=13\n")
    assert "\n13\n" in out


def test_zoo_file_header(petersen):
    text = petersen.read_text()
    assert "# closure order 120" in text
    assert "\n10\n" in text


def test_rank(petersen, capsys):
    assert main(["rank", str(petersen)]) == 0
    assert capsys.readouterr().out.splitlines() == ["rank 3", "subdegrees 3 6"]


def test_rank_two_exits_three(tmp_path, capsys):
    path = tmp_path / "s3.txt"
    path.write_text("3\n(0 1 2)\n(0 1)\n")
    assert main(["rank", str(path)]) == 3
    assert capsys.readouterr().out.splitlines()[0] == "rank 2"
    assert main(["closure", str(path)]) == 3


def test_closure_json(petersen, capsys):
    assert main(["closure", "--json", str(petersen)]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["order"] == "120"
    assert data["verified"] is True
    assert data["subdegrees"] == [3, 6]


def test_closure_group_file(petersen, tmp_path, capsys):
    assert main(["closure", "--oracle", "off", str(petersen)]) == 0
    out = capsys.readouterr().out
    assert "# chosen nonaffine, order 120, verified true" in out
    closure = tmp_path / "closure.txt"
    closure.write_text(out)
    assert main(["verify", str(petersen), str(closure)]) == 0
    assert capsys.readouterr().out.strip() == "true"


def test_oracle(petersen, capsys):
    assert main(["oracle", str(petersen)]) == 0
    assert capsys.readouterr().out.startswith("# oracle order 120\n10\n")


def test_verify_rejects(tmp_path, capsys):
    group = tmp_path / "d5.txt"
    group.write_text("5\n(0 1 2 3 4)\n(1 4)(2 3)\n")
    rotations = tmp_path / "c5.txt"
    rotations.write_text("5\n(0 1 2 3 4)\n")
    assert main(["verify", str(group), str(rotations)]) == 1
    assert capsys.readouterr().out.strip() == "false"


def test_parse_error(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("5\n(0 1\n")
    assert main(["closure", str(path)]) == 2
    assert "parse error" in capsys.readouterr().err


def test_missing_file(tmp_path, capsys):
    assert main(["rank", str(tmp_path / "missing.txt")]) == 2
    assert "cannot read input" in capsys.readouterr().err


def test_unknown_zoo_name(capsys):
    assert main(["zoo", "nonsense"]) == 2
    assert "unknown zoo instance" in capsys.readouterr().err


def test_unresolved(petersen, monkeypatch, capsys):
    monkeypatch.setenv("TWOCLOSURE_ORACLE_CAP", "5")
    get_settings.cache_clear()
    try:
        assert main(["closure", str(petersen)]) == 4
        captured = capsys.readouterr()
        assert "unresolved" in captured.err
        assert "# chosen None, order None, verified false" in captured.out
    finally:
        get_settings.cache_clear()
