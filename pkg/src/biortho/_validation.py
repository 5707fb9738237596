"""Input validation helpers shared by the public operations.

sklearn's ``check_array`` rejects complex input, so the checks live here.
"""

import numpy as np

from .exceptions import ShapeMismatch, ZeroState


def check_square(M, name="matrix"):
    """Return ``M`` as a finite complex128 square array."""
    a = np.asarray(M)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ShapeMismatch(f"{name} must be a non-empty square 2-d array, got shape {a.shape}")
    a = a.astype(np.complex128, copy=True)
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains NaN or Inf")
    return a


def check_vector(v, dim=None, name="vector"):
    a = np.asarray(v)
    if a.ndim != 1:
        raise ShapeMismatch(f"{name} must be 1-d, got shape {a.shape}")
    if dim is not None and a.shape[0] != dim:
        raise ShapeMismatch(f"{name} has length {a.shape[0]}, expected {dim}")
    a = a.astype(np.complex128, copy=True)
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains NaN or Inf")
    return a


def check_nonzero(v, name="state"):
    if not np.any(v):
        raise ZeroState(f"{name} is the zero vector")
    return v


def check_positive(x, name):
    x = float(x)
    if not np.isfinite(x) or x <= 0:
        raise ValueError(f"{name} must be a positive finite number, got {x}")
    return x


def frozen(a):
    """Read-only view so that values stored on immutable records stay immutable."""
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a
