from pathlib import Path

import numpy as np
import pytest

from equivect.config import Settings
from equivect.spec_io import context_from_spec, load_spec

SPEC_DIR = Path(__file__).parent / "specs"


def spec_path(name: str) -> str:
    return str(SPEC_DIR / f"{name}.json")


def load_context(name: str, chi: int = 0):
    return context_from_spec(load_spec(spec_path(name)), chi, Settings())


@pytest.fixture
def context():
    return load_context


@pytest.fixture
def rng():
    return np.random.default_rng(7)
