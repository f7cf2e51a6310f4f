"""Input validation helpers shared by the functional API and the estimators."""
from __future__ import annotations

import numpy as np


def check_image(x, name: str = "image") -> np.ndarray:
    """Validate an RGB image and return it as a float64 (H, W, 3) array in [0, 1].

    8-bit arrays are accepted and normalized by v / 255.  Anything else must
    already be real-valued in [0, 1].
    """
    arr = np.asarray(x)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"{name} must have shape (H, W, 3), got {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} is empty: shape {arr.shape}")
    if arr.dtype == np.uint8:
        return arr.astype(np.float64) / 255.0
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite values")
    lo, hi = float(arr.min()), float(arr.max())
    if lo < 0.0 or hi > 1.0:
        raise ValueError(f"{name} values must lie in [0, 1], got [{lo:g}, {hi:g}]")
    return arr


def check_label_matrix(labels, name: str = "labels") -> np.ndarray:
    """Validate a label matrix: 2-d, non-negative integers."""
    arr = np.asarray(labels)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must be a non-empty 2-d array, got shape {arr.shape}")
    if not np.issubdtype(arr.dtype, np.integer):
        raise ValueError(f"{name} must be integer-typed, got {arr.dtype}")
    if arr.min() < 0:
        raise ValueError(f"{name} contains negative ids")
    return np.ascontiguousarray(arr, dtype=np.int64)


def check_positive(value: float, name: str) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0.0:
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")
    return value


def check_fraction(value: float, name: str, *, closed_right: bool = False) -> float:
    """Validate a value in ]0, 1[ (or ]0, 1] with closed_right)."""
    value = float(value)
    hi_ok = value <= 1.0 if closed_right else value < 1.0
    if not np.isfinite(value) or value <= 0.0 or not hi_ok:
        bracket = "]0, 1]" if closed_right else "]0, 1["
        raise ValueError(f"{name} must lie in {bracket}, got {value!r}")
    return value
