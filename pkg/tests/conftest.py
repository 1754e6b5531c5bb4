"""
Shared fixtures.

Every test runs in an empty working directory with no FRIENDRUN_* variables
and a fresh configuration manager, so a friendrun.yaml in the checkout or the
developer's environment cannot leak into the results.
"""

import logging
import math

import numpy as np
import pytest

from friendrun.config import UnifiedConfigManager
from friendrun.config.loader import ConfigLoader
from friendrun.dynamics import CollapseAt, UnitaryOnly
from friendrun.protocol import build_necker_script, build_wigner_script


@pytest.fixture(autouse=True)
def isolated_config(monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    for env_var in ConfigLoader().env_mapping:
        monkeypatch.delenv(env_var, raising=False)
    UnifiedConfigManager._instance = None
    UnifiedConfigManager._initialized = False
    yield
    UnifiedConfigManager._instance = None
    UnifiedConfigManager._initialized = False
    logger = logging.getLogger("friendrun")
    logger.handlers = []
    logger.propagate = True


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def wigner_half():
    """Wigner script at theta = pi/2 with the definite query."""
    return build_wigner_script(math.pi / 2)


@pytest.fixture
def wigner_third():
    return build_wigner_script(math.pi / 3)


@pytest.fixture
def necker_half():
    return build_necker_script(math.pi / 2)


@pytest.fixture
def unitary():
    return UnitaryOnly()


@pytest.fixture
def collapse_at_observation():
    return CollapseAt(step_label="bob_observes", subsystem="bob")
