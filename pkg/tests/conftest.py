from __future__ import annotations

from importlib import resources
from pathlib import Path

import pytest

from circlecert.eqcalc import load_model
from circlecert.fixdata import load_dataset

ACCEPTANCE_LINES: list[str] = []


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("circlecert") / "data" / name))


def load_fixture(stem: str):
    d = load_dataset(fixture_path(f"{stem}.json"))
    model_file = fixture_path(f"{stem}.model.json")
    return d, (load_model(model_file, d) if model_file.exists() else None)


@pytest.fixture
def record_acceptance():
    def record(number: int, ok: bool, detail: str) -> None:
        ACCEPTANCE_LINES.append(f"AC{number}: {'PASS' if ok else 'FAIL'} - {detail}")
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s[2:s.index(":")])):
            terminalreporter.write_line(line)
