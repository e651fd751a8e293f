import numpy as np
import pytest

from scatlite import Family, FilterBankConfig, build_filter_bank


def pytest_configure(config):
    config._acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance report")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture()
def acceptance(request):
    """Record one [PASS]/[FAIL] line per acceptance check, then assert it."""

    def _report(name: str, ok: bool, detail: str) -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
        print(line)
        request.config._acceptance_lines.append(line)
        assert ok, line

    return _report


@pytest.fixture(scope="session")
def bank64():
    """Default (Morlet) bank on a small grid."""
    return build_filter_bank(FilterBankConfig(grid_size=64, scale_J=3))


@pytest.fixture(scope="session")
def bank64_gabor():
    return build_filter_bank(
        FilterBankConfig(grid_size=64, scale_J=3, family=Family.GABOR))


@pytest.fixture(scope="session")
def bank32():
    return build_filter_bank(FilterBankConfig(grid_size=32, scale_J=2))


@pytest.fixture(scope="session")
def bank16():
    return build_filter_bank(FilterBankConfig(grid_size=16, scale_J=3))


@pytest.fixture()
def rng():
    return np.random.default_rng(0)
