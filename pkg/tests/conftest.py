import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from semshift.store import write_store


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_pair(rng, n_a, n_b, d):
    """Two random usage matrices with unit-scale gaussian rows."""
    return rng.standard_normal((n_a, d)), rng.standard_normal((n_b, d))


@pytest.fixture
def tiny_store(tmp_path, rng):
    """A minimal two-word store on disk, D=4."""
    matrices = {
        "head": (
            rng.standard_normal((5, 4)).astype(np.float32),
            rng.standard_normal((3, 4)).astype(np.float32),
        ),
        "plane": (
            rng.standard_normal((4, 4)).astype(np.float32),
            rng.standard_normal((6, 4)).astype(np.float32),
        ),
    }
    root = tmp_path / "store"
    write_store(root, encoder_name="test", language="en", matrices=matrices)
    return root
