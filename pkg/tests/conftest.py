import math
from pathlib import Path

import pytest

from magnomit.config import load_config

REPO_ROOT = Path(__file__).resolve().parent.parent
PRESETS = REPO_ROOT / "presets"

TWO_PI = 2.0 * math.pi


@pytest.fixture(scope="session")
def default_params():
    """The shipped default operating point (effective mode)."""
    return load_config(str(PRESETS / "default.preset")).params


@pytest.fixture(scope="session")
def default_config():
    return load_config(str(PRESETS / "default.preset"))


@pytest.fixture(scope="session")
def far_detuned_params():
    return load_config(str(PRESETS / "atom_far_detuned.preset")).params


@pytest.fixture()
def preset_path():
    return str(PRESETS / "default.preset")
