from __future__ import annotations

import sys
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

# the fixed photo corpus for the acceptance gate: bundled photographs,
# cropped to 224x224 at windows chosen once and frozen
ACCEPTANCE_CROPS = [
    ("astronaut", 144, 144),
    ("chelsea", 38, 113),
    ("coffee", 88, 188),
    ("rocket", 203, 0),
    ("hubble_deep_field", 324, 388),
    ("immunohistochemistry", 144, 144),
]


@lru_cache(maxsize=None)
def photo(name: str, top: int, left: int, size: int = 224) -> np.ndarray:
    from skimage import data

    img = getattr(data, name)()
    crop = img[top:top + size, left:left + size]
    assert crop.shape == (size, size, 3)
    return crop.astype(np.float64) / 255.0


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_palette_image(rng, max_side=8, max_colors=4, min_side=1):
    h = int(rng.integers(min_side, max_side + 1))
    w = int(rng.integers(min_side, max_side + 1))
    k = int(rng.integers(1, max_colors + 1))
    palette = rng.uniform(0.0, 1.0, (k, 3))
    return palette[rng.integers(0, k, (h, w))]
