from __future__ import annotations

import json
import logging
from collections.abc import Callable, Iterator
from pathlib import Path
from typing import Any

import pytest

from lmax_ptas.core import Instance
from lmax_ptas.instance_file import InstanceFile, emit_instance

_ENV_KEYS = ("LMAX_PTAS_LOG_LEVEL", "LMAX_PTAS_GUESS_BUDGET", "LMAX_PTAS_ORACLE_CAP", "LMAX_PTAS_BB_CAP")


@pytest.fixture(autouse=True)
def clean_env(monkeypatch: pytest.MonkeyPatch) -> Iterator[None]:
    """Start every test from a clean environment and an unconfigured logger."""
    for key in _ENV_KEYS:
        monkeypatch.delenv(key, raising=False)
    yield
    log = logging.getLogger("lmax-ptas")
    for h in list(log.handlers):
        log.removeHandler(h)
    log.setLevel(logging.NOTSET)
    log.propagate = True


@pytest.fixture()
def example_instance() -> Instance:
    # Schrage: (1, 2, 3) with lmax 12; optimum 11 via (2, 1, 3).
    return Instance.from_rows([(2, 0, 5), (3, 1, 7), (2, 2, 1)])


@pytest.fixture()
def write_instance(tmp_path: Path) -> Callable[..., Path]:
    def _write(doc: InstanceFile | dict[str, Any] | str, name: str = "instance.json", directory: Path | None = None) -> Path:
        target = (directory or tmp_path) / name
        target.parent.mkdir(parents=True, exist_ok=True)
        if isinstance(doc, InstanceFile):
            text = emit_instance(doc)
        elif isinstance(doc, dict):
            text = json.dumps(doc)
        else:
            text = doc
        target.write_text(text, encoding="utf-8")
        return target

    return _write
