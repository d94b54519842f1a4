import numpy as np
import pytest
from hypothesis import settings

from rssdetect.channel import NetworkConfig
from rssdetect.geometry import SUBURBAN, URBAN

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def net():
    """Evaluation setup: 20 dBm powers, 5.8 GHz, h = 300 m, lambda = 1e-5."""
    return NetworkConfig()


@pytest.fixture(params=[SUBURBAN, URBAN], ids=["suburban", "urban"])
def env(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_configure(config):
    config._acceptance_lines = []


@pytest.fixture
def report(request):
    """Record one PASS/FAIL line for an acceptance criterion; returns the verdict."""
    def record(number, passed, detail):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
        print(line)
        request.config._acceptance_lines.append(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
