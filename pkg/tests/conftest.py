from __future__ import annotations

import pytest

from rising_orbits.config import bundled_config_path, load_config

_VERDICTS: list[str] = []


def record(criterion: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"{'PASS' if ok else 'FAIL'}  criterion {criterion}: {title}"
    if detail:
        line += f"  [{detail}]"
    print(line)
    _VERDICTS.append(line)


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def cfg():
    return load_config(bundled_config_path())


@pytest.fixture(scope="session")
def float_map(cfg):
    return cfg.build(mode="float")


@pytest.fixture(scope="session")
def exact_map(cfg):
    return cfg.build(mode="exact")
