"""Explicit test functions for the seminorm quadrature.

Each function knows its dimension, where it fails to be smooth (so the
quadrature can put breakpoints there) and a sup or Lipschitz bound when
one is available.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import DomainError, check_points

__all__ = ["TestFunction"]


@dataclass(frozen=True, eq=False)
class TestFunction:
    """``f(x) = scale * g(x - shift)`` for one of the named variants ``g``.

    Variants
    --------
    power_gamma(gamma, axis)   x_axis ** -gamma (gamma < 1/2, gamma != 0)
    capped_reciprocal(n)       min(n, 1/x)
    strip_ramp(n)              max(1 - |x_1| / n, 0)
    coordinate(i)              x_i
    product(i, j)              x_i * x_j
    bump(center, width)        exp(-|x - center|^2 / (2 width^2))
    constant(c)                c
    sparse_fourier(coeffs)     sum_m c_m exp(2 pi i m x_1), real part
    """

    __test__ = False  # not a pytest class

    variant: str
    params: dict = field(default_factory=dict)
    d: int = 1
    scale: float = 1.0
    shift: tuple = ()

    # constructors

    @classmethod
    def power_gamma(cls, gamma, d=1, axis=0):
        if not gamma < 0.5 or gamma == 0:
            raise DomainError(f"power_gamma needs gamma < 1/2 and gamma != 0, got {gamma}")
        return cls("power_gamma", {"gamma": float(gamma), "axis": int(axis)}, d)

    @classmethod
    def capped_reciprocal(cls, n):
        if n < 1:
            raise DomainError("capped_reciprocal needs n >= 1")
        return cls("capped_reciprocal", {"n": float(n)}, 1)

    @classmethod
    def strip_ramp(cls, n, d=2):
        if n < 1:
            raise DomainError("strip_ramp needs n >= 1")
        return cls("strip_ramp", {"n": float(n)}, d)

    @classmethod
    def coordinate(cls, i=0, d=1):
        return cls("coordinate", {"i": int(i)}, d)

    @classmethod
    def product(cls, i=0, j=1, d=2):
        return cls("product", {"i": int(i), "j": int(j)}, d)

    @classmethod
    def bump(cls, center, width):
        center = tuple(float(c) for c in np.atleast_1d(center))
        return cls("bump", {"center": center, "width": float(width)}, len(center))

    @classmethod
    def constant(cls, c=1.0, d=1):
        return cls("constant", {"c": float(c)}, d)

    @classmethod
    def sparse_fourier(cls, series):
        coeffs = series.coeffs if hasattr(series, "coeffs") else dict(series)
        return cls("sparse_fourier", {"coeffs": {int(m): complex(v) for m, v in coeffs.items()}}, 1)

    # transformations

    def scaled(self, c):
        return TestFunction(self.variant, self.params, self.d, self.scale * float(c), self.shift)

    def shifted(self, t):
        t = tuple(np.broadcast_to(np.asarray(t, dtype=float), (self.d,)).tolist())
        old = self.shift or (0.0,) * self.d
        return TestFunction(self.variant, self.params, self.d, self.scale, tuple(a + b for a, b in zip(old, t)))

    # evaluation

    def __call__(self, x):
        x = check_points(x, self.d)
        if self.shift:
            x = x - np.asarray(self.shift)
        return self.scale * self._raw(x)

    def _raw(self, x):
        v, p = self.variant, self.params
        if v == "power_gamma":
            return x[..., p["axis"]] ** (-p["gamma"])
        if v == "capped_reciprocal":
            with np.errstate(divide="ignore"):
                return np.minimum(p["n"], 1.0 / x[..., 0])
        if v == "strip_ramp":
            return np.maximum(1.0 - np.abs(x[..., 0]) / p["n"], 0.0)
        if v == "coordinate":
            return x[..., p["i"]].copy()
        if v == "product":
            return x[..., p["i"]] * x[..., p["j"]]
        if v == "bump":
            r2 = np.sum((x - np.asarray(p["center"])) ** 2, axis=-1)
            return np.exp(-r2 / (2.0 * p["width"] ** 2))
        if v == "constant":
            return np.full(x.shape[:-1], p["c"])
        if v == "sparse_fourier":
            out = np.zeros(x.shape[:-1])
            for m, c in p["coeffs"].items():
                out += (c * np.exp(2j * np.pi * m * x[..., 0])).real
            return out
        raise ValueError(f"unknown variant {v!r}")

    @property
    def is_constant(self):
        return self.variant == "constant" or self.scale == 0.0

    def kinks(self, axis=0):
        """Coordinates along ``axis`` where the function is not smooth."""
        v, p = self.variant, self.params
        s = self.shift[axis] if self.shift else 0.0
        if v == "power_gamma" and axis == p["axis"]:
            return [s]
        if v == "capped_reciprocal":
            return [s, s + 1.0 / p["n"]]
        if v == "strip_ramp" and axis == 0:
            return [s - p["n"], s, s + p["n"]]
        return []

    def sup_bound(self):
        """Bound on ``|f|`` on the unit cube (shifted), inf when unbounded."""
        v, p = self.variant, self.params
        a = abs(self.scale)
        if v == "power_gamma":
            return a * (1.0 if p["gamma"] < 0 else math.inf)
        if v == "capped_reciprocal":
            return a * p["n"]
        if v in ("strip_ramp", "bump", "coordinate", "product"):
            return a
        if v == "constant":
            return a * abs(p["c"])
        if v == "sparse_fourier":
            return a * sum(abs(c) for c in p["coeffs"].values())
        return math.inf

    def lipschitz_bound(self):
        """Lipschitz constant on the natural domain, inf when not Lipschitz."""
        v, p = self.variant, self.params
        a = abs(self.scale)
        if v == "capped_reciprocal":
            return a * p["n"] ** 2
        if v == "strip_ramp":
            return a / p["n"]
        if v == "coordinate":
            return a
        if v == "product":
            return a * math.sqrt(2.0)
        if v == "bump":
            return a / (p["width"] * math.sqrt(math.e))
        if v == "constant":
            return 0.0
        if v == "sparse_fourier":
            return a * sum(2 * math.pi * abs(m) * abs(c) for m, c in p["coeffs"].items())
        return math.inf

    def to_dict(self):
        params = dict(self.params)
        if self.variant == "sparse_fourier":
            params["coeffs"] = {str(m): [c.real, c.imag] for m, c in params["coeffs"].items()}
        return {"variant": self.variant, "params": params, "d": self.d, "scale": self.scale, "shift": list(self.shift)}

    def __repr__(self):
        extra = "" if self.scale == 1.0 else f", scale={self.scale}"
        return f"TestFunction.{self.variant}({self.params}{extra})"
