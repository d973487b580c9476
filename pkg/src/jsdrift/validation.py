"""Input validation helpers shared across modules."""

from __future__ import annotations

import numpy as np

from .errors import InvalidInputError


def as_sample_vector(values) -> np.ndarray:
    """Coerce ``values`` to a 1-D float64 array of finite samples.

    Raises
    ------
    InvalidInputError
        If the input is empty, not 1-D, or contains NaN/infinity.
    """
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 1:
        raise InvalidInputError(f"samples must be 1-D, got shape {x.shape}")
    if x.size == 0:
        raise InvalidInputError("samples must be non-empty")
    if not np.all(np.isfinite(x)):
        raise InvalidInputError("samples must be finite (no NaN/inf)")
    return x


def check_positive(value: float, name: str) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0:
        raise InvalidInputError(f"{name} must be a positive finite real, got {value}")
    return value


def check_fraction(value: float, name: str, *, allow_one: bool = True) -> float:
    value = float(value)
    hi_ok = value <= 1.0 if allow_one else value < 1.0
    if not (np.isfinite(value) and 0.0 <= value and hi_ok):
        bound = "[0, 1]" if allow_one else "[0, 1)"
        raise InvalidInputError(f"{name} must lie in {bound}, got {value}")
    return value


def check_finite_scalar(value: float, name: str) -> float:
    value = float(value)
    if not np.isfinite(value):
        raise InvalidInputError(f"{name} must be finite, got {value}")
    return value
