from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

DEFAULT_SEED = 20240917
FIXTURES = Path(__file__).parent / "fixtures"

settings.register_profile("repro", derandomize=True, max_examples=40, deadline=None)
settings.load_profile("repro")


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=DEFAULT_SEED, help="seed for randomized tests")


def pytest_report_header(config):
    return f"homlie random seed: {config.getoption('--seed')}"


@pytest.fixture
def seed(request) -> int:
    return request.config.getoption("--seed")


@pytest.fixture
def rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


_ACCEPTANCE: list[str] = []


@pytest.fixture
def acceptance():
    """Record one summary line per acceptance criterion; printed after the run."""

    def record(number: int, title: str, ok: bool, detail: str, elapsed: float, limit: float):
        status = "PASS" if ok else "FAIL"
        line = f"[{status}] criterion {number}: {title} | {detail} | {elapsed:.2f}s (limit {limit:g}s)"
        _ACCEPTANCE.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
