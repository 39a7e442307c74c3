# test_settings.py

import pytest

from twoclosure.settings import Settings


def test_defaults(monkeypatch):
    monkeypatch.delenv("TWOCLOSURE_ORACLE_CAP", raising=False)
    assert Settings.from_env() == Settings()


def test_env_override(monkeypatch):
    monkeypatch.setenv("TWOCLOSURE_ORACLE_CAP", "64")
    monkeypatch.setenv("TWOCLOSURE_SEED", "")
    settings = Settings.from_env()
    assert settings.oracle_cap == 64
    assert settings.seed == 0


def test_bad_value(monkeypatch):
    monkeypatch.setenv("TWOCLOSURE_AGL_CAP", "lots")
    with pytest.raises(ValueError, match="TWOCLOSURE_AGL_CAP"):
        Settings.from_env()
