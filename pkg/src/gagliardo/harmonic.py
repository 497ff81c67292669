"""Maximal-function and Fourier-side checks.

* :class:`GridFunction` holds nonnegative piecewise-constant data on a
  uniform grid over a box (d = 1 or 2).
* :func:`maximal_function` is the non-centered maximal operator over
  boxes with grid-corner endpoints, exact for such data.
* :func:`check_maximal_far` and :func:`check_maximal_far_log` compare a
  far-field kernel integral of ``g`` with ``Mg(x)``.
* The Fourier part computes coefficients, the weighted sums
  ``sum |f^(m)|^2 log|m|`` and ``sum |f^(m)|^2 log^2|m|``, the cosine
  integrals behind them, and a sparse series where the first sum converges
  and the second diverges.

Logarithms are natural throughout.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from ._rules import graded_breaks, panel_rule
from ._validation import DomainError, check_positive
from .domains import Box

__all__ = [
    "GridFunction",
    "maximal_function",
    "MaximalRatio",
    "check_maximal_far",
    "check_maximal_far_log",
    "FourierSeries",
    "fourier_coefficients",
    "cosine_log_integrals",
    "WeightedSumReport",
    "weighted_sum",
    "step3_counterexample",
]


# ---------------------------------------------------------------------------
# grid data and the maximal operator


class GridFunction:
    """Nonnegative cell values on a uniform grid over ``prod [lo_i, hi_i]``."""

    def __init__(self, lo, hi, values):
        self.values = np.asarray(values, dtype=float)
        self.lo = np.atleast_1d(np.asarray(lo, dtype=float))
        self.hi = np.atleast_1d(np.asarray(hi, dtype=float))
        self.d = self.values.ndim
        if self.d not in (1, 2) or self.lo.shape != (self.d,) or self.hi.shape != (self.d,):
            raise ValueError("GridFunction needs 1-D or 2-D values and matching lo, hi")
        if np.any(self.hi <= self.lo):
            raise ValueError("empty grid box")
        if np.any(self.values < 0) or not np.all(np.isfinite(self.values)):
            raise DomainError("grid values must be finite and nonnegative")
        self.h = (self.hi - self.lo) / np.asarray(self.values.shape)

    @classmethod
    def from_function(cls, func, lo, hi, shape):
        """Sample ``func`` (on points of shape (..., d)) at cell centres."""
        lo, hi = np.atleast_1d(lo).astype(float), np.atleast_1d(hi).astype(float)
        shape = tuple(np.atleast_1d(shape).astype(int))
        axes = [lo[i] + (np.arange(n) + 0.5) * (hi[i] - lo[i]) / n for i, n in enumerate(shape)]
        pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
        return cls(lo, hi, np.asarray(func(pts), dtype=float).reshape(shape))

    @property
    def cell_volume(self):
        return float(np.prod(self.h))

    @property
    def domain(self):
        return Box(np.stack([self.lo, self.hi], 1))

    def edges(self, axis):
        return self.lo[axis] + self.h[axis] * np.arange(self.values.shape[axis] + 1)

    def centers(self):
        axes = [self.lo[i] + (np.arange(n) + 0.5) * self.h[i] for i, n in enumerate(self.values.shape)]
        return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)

    def __call__(self, y):
        """Piecewise-constant evaluation; zero outside the box."""
        y = np.asarray(y, dtype=float)
        idx = np.floor((y - self.lo) / self.h).astype(int)
        shape = np.asarray(self.values.shape)
        inside = np.all((idx >= 0) & (idx < shape), axis=-1)
        idx = np.clip(idx, 0, shape - 1)
        return np.where(inside, self.values[tuple(np.moveaxis(idx, -1, 0))], 0.0)

    def scaled(self, c):
        return GridFunction(self.lo, self.hi, c * self.values)

    def __add__(self, other):
        if not (np.allclose(self.lo, other.lo) and np.allclose(self.hi, other.hi)
                and self.values.shape == other.values.shape):
            raise ValueError("grid functions live on different grids")
        return GridFunction(self.lo, self.hi, self.values + other.values)


def _corner_ranges(g, x, axis):
    """Grid edges at or below and at or above x along one axis."""
    e = g.edges(axis)
    below = np.flatnonzero(e <= x[axis] + 1e-12 * g.h[axis])
    above = np.flatnonzero(e >= x[axis] - 1e-12 * g.h[axis])
    return below, above


def maximal_function(g, x):
    """``sup`` of box averages of ``g`` over grid-corner boxes containing ``x``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (g.d,) or np.any(x < g.lo) or np.any(x > g.hi):
        raise DomainError(f"x = {x} lies outside the grid box")
    # prefix sums of cell masses
    S = np.zeros(tuple(n + 1 for n in g.values.shape))
    S[(slice(1, None),) * g.d] = np.cumsum(np.cumsum(g.values, axis=0), axis=1) if g.d == 2 else np.cumsum(g.values)
    S *= g.cell_volume
    if g.d == 1:
        lo, hi = _corner_ranges(g, x, 0)
        e = g.edges(0)
        i, j = lo[:, None], hi[None, :]
        length = e[j] - e[i]
        with np.errstate(invalid="ignore", divide="ignore"):
            avg = np.where(length > 0, (S[j] - S[i]) / length, -np.inf)
        return float(avg.max())
    (lo0, hi0), (lo1, hi1) = _corner_ranges(g, x, 0), _corner_ranges(g, x, 1)
    e0, e1 = g.edges(0), g.edges(1)
    best = -np.inf
    i1, j1 = lo1[:, None], hi1[None, :]
    area1 = e1[j1] - e1[i1]
    for i0 in lo0:
        for j0 in hi0:
            w0 = e0[j0] - e0[i0]
            if w0 <= 0:
                continue
            mass = S[j0, j1] - S[i0, j1] - S[j0, i1] + S[i0, i1]
            with np.errstate(invalid="ignore", divide="ignore"):
                avg = np.where(area1 > 0, mass / (w0 * area1), -np.inf)
            best = max(best, float(avg.max()))
    return best


@dataclass
class MaximalRatio:
    """``ratio = lhs * scale / maximal`` for one (x, r)."""

    lhs: float
    maximal: float
    scale: float
    ratio: float
    r: float
    x: list

    def to_dict(self):
        return dict(self.__dict__)


def _far_integral(g, x, r, weight, order=12, n_angles=512):
    """``int_{box, |y - x| > r} g(y) weight(|y - x|) dy`` with a radial weight."""
    if g.d == 1:
        e = g.edges(0)
        xs = x[0]
        br = np.unique(np.concatenate([e, [xs - r, xs + r]]))
        br = np.clip(br, g.lo[0], g.hi[0])
        # geometric refinement away from the excluded ball, where the weight is steep
        extra = [xs - r - r * 2.0 ** k for k in range(0, 40)] + [xs + r + r * 2.0 ** k for k in range(0, 40)]
        br = np.unique(np.concatenate([br, np.clip(extra, g.lo[0], g.hi[0])]))
        y, w = panel_rule(br, order)
        rho = np.abs(y - xs)
        vals = np.where(rho > r, g(y[:, None]) * weight(np.maximum(rho, r)), 0.0)
        return float(np.sum(w * vals))
    # polar around x: radial Gauss panels, composite midpoint in angle
    corners = np.array([[a, b] for a in (g.lo[0], g.hi[0]) for b in (g.lo[1], g.hi[1])])
    R = float(np.max(np.linalg.norm(corners - x, axis=1)))
    if r >= R:
        return 0.0
    br = np.unique(np.concatenate([np.geomspace(r, R, 80), np.linspace(r, R, 80)]))
    rho, w = panel_rule(br, order)
    ang = (np.arange(n_angles) + 0.5) * 2 * math.pi / n_angles
    y = x + rho[:, None, None] * np.stack([np.cos(ang), np.sin(ang)], -1)[None]
    ring = g(y).mean(axis=1) * 2 * math.pi
    return float(np.sum(w * rho * weight(rho) * ring))


def _diam(g):
    return float(np.linalg.norm(g.hi - g.lo))


def check_maximal_far(g, kernel, eta, r, x, exps=None):
    """``lhs = int_{|y-x| > r} g(y) / (|x-y|^d phi(|x-y|)^eta) dy``; ratio ``lhs phi(r)^eta / Mg(x)``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    check_positive(r, "r")
    if r >= 3 * _diam(g) * (1 + 1e-12):
        raise DomainError("r must be below three times the diameter")
    if exps is not None and eta < exps.t1:
        raise DomainError(f"eta must be >= min(q, p - p/q) = {exps.t1}, got {eta}")
    phi = kernel.profile
    d = g.d
    weight = lambda rho: rho ** (-d) * np.asarray(phi(rho), dtype=float) ** (-eta)  # noqa: E731
    lhs = _far_integral(g, x, r, weight)
    mg = maximal_function(g, x)
    scale = float(phi(r)) ** eta
    ratio = 0.0 if lhs == 0.0 else (lhs * scale / mg if mg > 0 else math.inf)
    return MaximalRatio(lhs, mg, scale, ratio, float(r), x.tolist())


def check_maximal_far_log(g, r, x):
    """``lhs = int_{|y-x| > r} g(y) / |x-y|^d dy``; ratio ``lhs / (Mg(x) max(|log r|, 1))``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    check_positive(r, "r")
    d = g.d
    lhs = 0.0 if r >= _diam(g) else _far_integral(g, x, r, lambda rho: rho ** (-float(d)))
    mg = maximal_function(g, x)
    scale = 1.0 / max(abs(math.log(r)), 1.0)
    ratio = 0.0 if lhs == 0.0 else (lhs * scale / mg if mg > 0 else math.inf)
    return MaximalRatio(lhs, mg, scale, ratio, float(r), x.tolist())


# ---------------------------------------------------------------------------
# Fourier side


@dataclass
class FourierSeries:
    """Sparse period-1 coefficients ``m -> f^(m)``; ``M`` is the largest ``|m|``."""

    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = {int(m): complex(v) for m, v in self.coeffs.items() if v != 0}

    @property
    def M(self):
        return max((abs(m) for m in self.coeffs), default=0)

    def __getitem__(self, m):
        return self.coeffs.get(int(m), 0j)

    @property
    def is_real(self):
        """Conjugate symmetry ``f^(-m) = conj f^(m)``."""
        return all(abs(self[-m] - v.conjugate()) <= 1e-14 * max(1.0, abs(v)) for m, v in self.coeffs.items())

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        for m, c in self.coeffs.items():
            out += c * np.exp(2j * math.pi * m * x)
        return out

    def to_dict(self):
        return {str(m): [v.real, v.imag] for m, v in sorted(self.coeffs.items())}

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        return cls({int(m): complex(*v) if isinstance(v, (list, tuple)) else complex(v) for m, v in data.items()})


def fourier_coefficients(f, M, panels=None, order=16):
    """``f^(m) = int_0^1 f(x) exp(-2 pi i m x) dx`` for ``|m| <= M``.

    ``f`` may be a callable on (0,1), an array of equispaced samples of a
    periodic function (``x_k = k/N``, summed exactly by FFT), or a
    ``sparse_fourier`` test function, whose coefficients are read off.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    if getattr(f, "variant", None) == "sparse_fourier":
        out = {}
        for m, c in f.params["coeffs"].items():
            # Re(c e(mx)) = (c e(mx) + conj(c) e(-mx)) / 2
            out[m] = out.get(m, 0j) + 0.5 * c * f.scale
            out[-m] = out.get(-m, 0j) + 0.5 * c.conjugate() * f.scale
        return FourierSeries({m: v for m, v in out.items() if abs(m) <= M})
    if not callable(f):
        samples = np.asarray(f)
        N = samples.shape[0]
        if N <= 2 * M:
            raise ValueError(f"need more than 2M = {2 * M} samples, got {N}")
        c = np.fft.fft(samples) / N
        return FourierSeries({m: c[m % N] for m in range(-M, M + 1)})
    panels = panels or max(64, 4 * M)
    x, w = panel_rule(np.linspace(0.0, 1.0, panels + 1), order)
    fx = np.asarray(f(x), dtype=complex)
    m = np.arange(-M, M + 1)
    vals = (fx * w) @ np.exp(-2j * math.pi * np.outer(x, m))
    return FourierSeries(dict(zip(m.tolist(), vals)))


def cosine_log_integrals(m, order=20, levels=30):
    """``I_0 = int_0^1 (1 - cos 2 pi m h) / h dh`` and
    ``I_log = int_0^1 (1 - cos 2 pi m h) max(-log h, 1) / h dh``.

    Below ``h = 1/|m|`` the integrand is smooth (graded panels toward 0);
    beyond it one panel per period.
    """
    m = abs(int(m))
    if m == 0:
        return 0.0, 0.0
    h0 = 1.0 / m
    br = np.concatenate([graded_breaks(0.0, h0, (0.0,), levels), np.arange(1, m + 1) * h0, [math.exp(-1.0)]])
    br = np.unique(np.clip(br, 0.0, 1.0))
    h, w = panel_rule(br, order)
    osc = 2.0 * np.sin(math.pi * m * h) ** 2  # 1 - cos without cancellation
    base = osc / h
    return float(np.sum(w * base)), float(np.sum(w * base * np.maximum(-np.log(h), 1.0)))


WEIGHTS = {"log": lambda m: math.log(m), "log_squared": lambda m: math.log(m) ** 2}


@dataclass
class WeightedSumReport:
    """Partial sums of ``|f^(m)|^2 log|m|`` and ``|f^(m)|^2 log^2|m|`` over ``0 < |m| <= cutoff``."""

    cutoffs: list
    sum_log: list
    sum_log2: list
    weight: str
    verdict: str
    increment: float

    @property
    def sums(self):
        return self.sum_log if self.weight == "log" else self.sum_log2

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["cutoff", "sum_log", "sum_log2"])
        for row in zip(self.cutoffs, self.sum_log, self.sum_log2):
            w.writerow([row[0], repr(row[1]), repr(row[2])])
        return buf.getvalue()

    def to_dict(self):
        return {"cutoffs": [str(c) for c in self.cutoffs], "sum_log": self.sum_log, "sum_log2": self.sum_log2,
                "weight": self.weight, "verdict": self.verdict, "increment": self.increment}


def weighted_sum(series, weight="log", cutoffs=None, cauchy_tol=1e-6):
    """Partial sums at each cutoff (Python ints, any size).

    ``increment`` is the last term added before the final cutoff and the
    verdict is ``"cauchy"`` when it is below ``cauchy_tol``, else
    ``"growing"``.
    """
    if weight not in WEIGHTS:
        raise ValueError(f"weight is one of {sorted(WEIGHTS)}")
    items = sorted((abs(m), abs(v) ** 2) for m, v in series.coeffs.items() if m != 0)
    cutoffs = sorted(int(c) for c in (cutoffs if cutoffs is not None else [series.M or 1]))
    sums = {"log": [], "log_squared": []}
    acc = {"log": [], "log_squared": []}
    last = {"log": 0.0, "log_squared": 0.0}
    k = 0
    for c in cutoffs:
        while k < len(items) and items[k][0] <= c:
            m, a2 = items[k]
            for name, wf in WEIGHTS.items():
                term = a2 * wf(m)
                acc[name].append(term)
                last[name] = term
            k += 1
        for name in sums:
            sums[name].append(math.fsum(acc[name]))
    inc = last[weight]
    return WeightedSumReport(cutoffs, sums["log"], sums["log_squared"], weight,
                             "cauchy" if inc < cauchy_tol else "growing", inc)


def step3_counterexample(n, L):
    """``f^((2n+1) 2^l) = l^(-3/2)`` for ``l = 1..L``, zero elsewhere."""
    if n < 2 or L < 1:
        raise ValueError("need n >= 2 and L >= 1")
    base = 2 * n + 1
    return FourierSeries({base * 2 ** l: l ** -1.5 for l in range(1, L + 1)})

