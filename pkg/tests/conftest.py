import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

SCENES_DIR = Path(__file__).parent.parent / "scenes"


@pytest.fixture
def scenes_dir() -> Path:
    return SCENES_DIR


@pytest.fixture
def scene_corpus() -> list:
    return sorted(SCENES_DIR.rglob("*.x3d"))
