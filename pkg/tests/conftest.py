from __future__ import annotations

from pathlib import Path

import pytest

from srprio import Model, parse_model

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def prodco_path() -> Path:
    return FIXTURES / "prodco.srp"


@pytest.fixture
def finserv_path() -> Path:
    return FIXTURES / "finserv.srp"


@pytest.fixture
def broken_path() -> Path:
    return FIXTURES / "broken.srp"


def load_fixture(path: Path) -> Model:
    result = parse_model(path.read_text(encoding="utf-8"))
    assert result.ok, result.diagnostics
    return result.model


@pytest.fixture
def prodco(prodco_path) -> Model:
    return load_fixture(prodco_path)


@pytest.fixture
def finserv(finserv_path) -> Model:
    return load_fixture(finserv_path)
