"""
Shared fixtures for the bisqueeze test suite.
"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from bisqueeze.core.cache import computation_cache  # noqa: E402
from bisqueeze.core.config import Config, configure_logging, use_config  # noqa: E402
from bisqueeze.generation import PumpParameters, decouple, state_from_decoupled  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running numerical cross-checks")
    # Keep stdout free for report and CSV assertions
    configure_logging("INFO")


@pytest.fixture(autouse=True)
def default_config():
    """Every test starts from default settings and an empty computation cache."""
    use_config(Config())
    computation_cache.clear()
    yield
    use_config(Config())
    configure_logging("INFO")


@pytest.fixture
def equal_pumps():
    return PumpParameters(R_ab=0.5, R_bc=0.5)


@pytest.fixture
def vacuum_bisqueezed(equal_pumps):
    """Bi-squeezed state grown from vacuum with R_ab = R_bc = 0.5."""
    return state_from_decoupled(decouple(equal_pumps), (1.0, 1.0, 1.0))


@pytest.fixture
def unequal_occupations():
    return (1.05, 1.3, 1.7)
