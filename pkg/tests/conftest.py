from __future__ import annotations

import os

import pytest

from support import ACCEPTANCE

HEAVY_ENV = "GOSSET_FIBERING_SKIP_HEAVY"
EXHAUSTIVE_ENV = "GOSSET_FIBERING_EXHAUSTIVE"


def pytest_addoption(parser: pytest.Parser) -> None:
    parser.addoption(
        "--skip-heavy",
        action="store_true",
        default=False,
        help="skip the 4_21 orbit check",
    )
    parser.addoption(
        "--exhaustive",
        action="store_true",
        default=False,
        help="also sum over all 2^15 colour subsets of 4_21 without symmetry reduction (about an hour)",
    )


def pytest_configure(config: pytest.Config) -> None:
    config.addinivalue_line("markers", "properties: fast property suites (pytest -m properties)")
    config.addinivalue_line("markers", "exhaustive: unreduced 4_21 subset sum, opt-in via --exhaustive")


def skip_heavy(config: pytest.Config) -> bool:
    return bool(config.getoption("--skip-heavy") or os.environ.get(HEAVY_ENV))


def pytest_collection_modifyitems(config: pytest.Config, items: list[pytest.Item]) -> None:
    exhaustive = config.getoption("--exhaustive") or os.environ.get(EXHAUSTIVE_ENV)
    for item in items:
        if "heavy" in item.keywords and skip_heavy(config):
            item.add_marker(pytest.mark.skip(reason=f"heavy tier disabled (--skip-heavy or ${HEAVY_ENV})"))
        if "exhaustive" in item.keywords and not exhaustive:
            item.add_marker(pytest.mark.skip(reason=f"opt-in (--exhaustive or ${EXHAUSTIVE_ENV}=1)"))


def pytest_terminal_summary(terminalreporter, exitstatus, config) -> None:  # noqa: ARG001
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture
def heavy_enabled(request: pytest.FixtureRequest) -> bool:
    return not skip_heavy(request.config)
