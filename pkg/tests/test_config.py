from __future__ import annotations

import pytest

from lmax_ptas.config import DEFAULT_BRANCH_BOUND_CAP, DEFAULT_GUESS_BUDGET, DEFAULT_ORACLE_CAP, SolverConfig, load_config


def test_defaults_without_environment() -> None:
    assert load_config() == SolverConfig(DEFAULT_GUESS_BUDGET, DEFAULT_ORACLE_CAP, DEFAULT_BRANCH_BOUND_CAP)
    assert DEFAULT_GUESS_BUDGET == 10**7


def test_environment_overrides(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("LMAX_PTAS_GUESS_BUDGET", " 500 ")
    monkeypatch.setenv("LMAX_PTAS_ORACLE_CAP", "7")
    monkeypatch.setenv("LMAX_PTAS_BB_CAP", "11")
    assert load_config() == SolverConfig(500, 7, 11)


@pytest.mark.parametrize("raw", ["", "many", "-3", "0", "1.5"])
def test_unusable_values_fall_back_to_defaults(monkeypatch: pytest.MonkeyPatch, raw: str) -> None:
    monkeypatch.setenv("LMAX_PTAS_GUESS_BUDGET", raw)
    assert load_config().guess_budget == DEFAULT_GUESS_BUDGET


def test_flag_override_keeps_unset_fields() -> None:
    base = SolverConfig(guess_budget=100, oracle_cap=5, branch_bound_cap=12)
    assert base.override(oracle_cap=3) == SolverConfig(100, 3, 12)
    assert base.override() == base


def test_version_fallback_when_package_not_installed(monkeypatch: pytest.MonkeyPatch) -> None:
    import importlib

    import lmax_ptas._version as vmod

    def _raise(*_args, **_kwargs):
        raise importlib.metadata.PackageNotFoundError("fake")

    monkeypatch.setattr(importlib.metadata, "version", _raise)
    # Re-execute the module body with the patched function.
    importlib.reload(vmod)
    try:
        assert vmod.__version__ == "0.0.0+dev"
    finally:
        monkeypatch.undo()
        importlib.reload(vmod)
