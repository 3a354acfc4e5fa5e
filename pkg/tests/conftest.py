from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

CONFIG_DIR = Path(__file__).parents[1] / "src" / "casimir_networks" / "configs"
SHIPPED = sorted(p for p in CONFIG_DIR.glob("*.json") if not p.name.endswith(".expected.json"))


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(12345)
