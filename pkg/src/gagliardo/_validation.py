"""Argument checks shared by the public entry points."""

import math
import numbers

import numpy as np


class DomainError(ValueError):
    """An argument lies outside the domain of a mathematical function."""


class SingularityError(ValueError):
    """A kernel was evaluated on its diagonal."""


class NoChainError(RuntimeError):
    """No chain of neighbouring cubes connects two cubes of a decomposition."""


def check_positive(value, name, allow_inf=False):
    if not isinstance(value, numbers.Real) or math.isnan(value):
        raise TypeError(f"{name} must be a real number, got {value!r}")
    if value <= 0 or (math.isinf(value) and not allow_inf):
        raise DomainError(f"{name} must be positive and finite, got {value!r}")
    return float(value)


def check_interval(value, name, lo, hi, lo_open=True, hi_open=True):
    if not isinstance(value, numbers.Real) or math.isnan(value):
        raise TypeError(f"{name} must be a real number, got {value!r}")
    bad_lo = value <= lo if lo_open else value < lo
    bad_hi = value >= hi if hi_open else value > hi
    if bad_lo or bad_hi:
        left = "(" if lo_open else "["
        right = ")" if hi_open else "]"
        raise DomainError(f"{name} must lie in {left}{lo}, {hi}{right}, got {value!r}")
    return float(value)


def check_points(x, d, name="x"):
    """Coerce to a float array of shape (..., d)."""
    x = np.asarray(x, dtype=float)
    if d == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        x = x[..., None]
    if x.shape[-1] != d:
        raise ValueError(f"{name} must have trailing dimension {d}, got shape {x.shape}")
    return x


def check_radii(r, name="r"):
    r = np.asarray(r, dtype=float)
    if np.any(~(r > 0)):
        raise DomainError(f"{name} must be positive")
    return r
