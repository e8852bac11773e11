import sys
from pathlib import Path

import pytest

# Add the repo root to PYTHONPATH so `import sampling.*` and `import config` work
ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT))

DATA_DIR = Path(__file__).resolve().parent / "data"


@pytest.fixture
def golden_dir() -> Path:
    return DATA_DIR
