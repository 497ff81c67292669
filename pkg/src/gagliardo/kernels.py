"""Radial jump kernels ``K(x, y) = |x - y|^-d phi(|x - y|)^-q`` and checks
of the three structural assumptions placed on the profile ``phi``:

* A1, Levy integrability of ``(1 ^ |y|^q) K(0, y)``;
* A2, summability of the dyadic ratio series with exponents ``t1``, ``t2``;
* A3, the doubling bound ``phi(2r) <= C3 phi(r)``.

It also estimates lower Matuszewska indices of ``phi`` by log-log fits.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from ._rules import panel_rule
from ._validation import (
    DomainError,
    SingularityError,
    check_points,
    check_positive,
    check_radii,
)

__all__ = [
    "KernelProfile",
    "Kernel",
    "FlatKernel",
    "ExponentPair",
    "A1Result",
    "A2Result",
    "A3Result",
    "AssumptionReport",
    "MatuszewskaEstimate",
    "phi_eval",
    "kernel_eval",
    "check_a1",
    "check_a2",
    "check_a3",
    "audit_kernel",
    "default_r_grid",
    "dyadic_steps",
    "estimate_matuszewska_lower",
    "sphere_area",
]

VARIANTS = ("power", "log1p_power", "constant_one", "inv_log_power", "tabulated")


def sphere_area(d):
    """Surface measure of the unit sphere in R^d (2 for d = 1)."""
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


@dataclass(frozen=True, eq=False)
class KernelProfile:
    """The profile ``phi: (0, inf) -> (0, inf)`` of a radial kernel.

    Build instances with the classmethods rather than the raw constructor:

    >>> KernelProfile.power(0.5)(4.0)
    2.0
    """

    variant: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown profile variant {self.variant!r}; expected one of {VARIANTS}")
        p = self.params
        if self.variant == "power":
            check_positive(p["s"], "s")
            check_positive(p.get("c", 1.0), "c")
        elif self.variant == "log1p_power":
            g = p["gamma"]
            if not 0 < g <= 1:
                raise DomainError(f"gamma must lie in (0, 1], got {g!r}")
        elif self.variant == "inv_log_power":
            check_positive(p["beta"], "beta")
        elif self.variant == "tabulated":
            knots = np.asarray(p["knots"], dtype=float)
            values = np.asarray(p["values"], dtype=float)
            if knots.ndim != 1 or knots.shape != values.shape or knots.size < 2:
                raise ValueError("tabulated profile needs matching 1-D knots and values (>= 2)")
            if np.any(knots <= 0) or np.any(np.diff(knots) <= 0):
                raise ValueError("knots must be positive and strictly increasing")
            if np.any(values <= 0):
                raise ValueError("tabulated values must be positive")
            object.__setattr__(self, "_logk", np.log(knots))
            object.__setattr__(self, "_logv", np.log(values))

    # constructors -----------------------------------------------------
    @classmethod
    def power(cls, s, c=1.0):
        return cls("power", {"s": float(s), "c": float(c)})

    @classmethod
    def log1p_power(cls, gamma):
        return cls("log1p_power", {"gamma": float(gamma)})

    @classmethod
    def constant_one(cls):
        return cls("constant_one", {})

    @classmethod
    def inv_log_power(cls, beta):
        return cls("inv_log_power", {"beta": float(beta)})

    @classmethod
    def tabulated(cls, knots, values):
        return cls("tabulated", {"knots": [float(k) for k in knots], "values": [float(v) for v in values]})

    @classmethod
    def stable(cls, alpha, c=1.0):
        """``phi(r) = c r^(alpha/2)``: with q = 2 this is ``|x-y|^(-d-alpha)`` up to ``c^-2``."""
        return cls.power(alpha / 2.0, c)

    # evaluation -------------------------------------------------------
    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        v, p = self.variant, self.params
        if v == "power":
            out = p.get("c", 1.0) * r ** p["s"]
        elif v == "log1p_power":
            out = np.log1p(r) ** p["gamma"]
        elif v == "constant_one":
            out = np.ones_like(r)
        elif v == "inv_log_power":
            out = np.maximum(np.abs(np.log(r)), 1.0) ** (-p["beta"])
        else:
            out = np.exp(np.interp(np.log(r), self._logk, self._logv))
        return out if out.ndim else float(out)

    @property
    def is_nondecreasing(self):
        """Whether ``phi`` is nondecreasing on the whole half-line."""
        if self.variant in ("power", "log1p_power", "constant_one"):
            return True
        if self.variant == "tabulated":
            return bool(np.all(np.diff(self._logv) >= 0))
        return False

    def to_dict(self):
        return {"variant": self.variant, "params": dict(self.params)}

    @classmethod
    def from_dict(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["variant"], dict(data.get("params", {})))

    def __eq__(self, other):
        return isinstance(other, KernelProfile) and self.to_dict() == other.to_dict()

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.params.items())
        return f"KernelProfile.{self.variant}({args})"


def phi_eval(profile, r):
    """Evaluate ``phi(r)``; raises DomainError for nonpositive radii."""
    check_radii(r)
    return profile(r)


@dataclass(frozen=True)
class ExponentPair:
    """Outer/inner exponents ``1 < q <= p < inf`` and the derived A2 exponents."""

    p: float = 2.0
    q: float = 2.0

    def __post_init__(self):
        if not (1 < self.q <= self.p < math.inf):
            raise DomainError(f"need 1 < q <= p < inf, got p={self.p!r}, q={self.q!r}")

    @property
    def t1(self):
        return min(self.q, self.p - self.p / self.q)

    @property
    def t2(self):
        return 1.0 / (self.q - 1.0)

    @property
    def p_conj(self):
        return self.p / (self.p - 1.0)


@dataclass(frozen=True)
class Kernel:
    """``K(x, y) = |x - y|^-d * phi(|x - y|)^-q``."""

    d: int
    q: float
    profile: KernelProfile

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise DomainError(f"dimension must be a positive integer, got {self.d!r}")
        check_positive(self.q, "q")

    def radial(self, r):
        r = np.asarray(r, dtype=float)
        return r ** (-self.d) * np.asarray(self.profile(r), dtype=float) ** (-self.q)

    def __call__(self, x, y):
        return kernel_eval(self, x, y)

    def to_dict(self):
        return {"type": "radial", "d": self.d, "q": self.q, "profile": self.profile.to_dict()}


@dataclass(frozen=True)
class FlatKernel:
    """The integrable kernel ``K == value``; it has no ``|x-y|^-d phi^-q`` form."""

    d: int = 1
    value: float = 1.0

    def radial(self, r):
        return np.full_like(np.asarray(r, dtype=float), self.value)

    def __call__(self, x, y):
        return kernel_eval(self, x, y)

    def to_dict(self):
        return {"type": "flat", "d": self.d, "value": self.value}


def kernel_eval(kernel, x, y):
    """``K(x, y)`` for points (or broadcastable point arrays) of dimension d."""
    x = check_points(x, kernel.d)
    y = check_points(y, kernel.d)
    r = np.linalg.norm(x - y, axis=-1)
    if np.any(r == 0):
        raise SingularityError("kernel evaluated at x == y")
    out = kernel.radial(r)
    return float(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# grids and dyadic step counts


def default_r_grid(diam=math.inf, n=48, upper_factor=1.0):
    """Logarithmic radii: [1e-6 diam, upper_factor*diam) or [1e-6, 1e6]."""
    if math.isinf(diam):
        return np.geomspace(1e-6, 1e6, n)
    return np.geomspace(1e-6 * diam, upper_factor * diam, n + 1)[:-1]


def dyadic_steps(r, diam):
    """``N(r) = inf{k : 2^k r > diam}``; ``inf`` for unbounded domains."""
    if math.isinf(diam):
        return math.inf
    k = max(0, math.ceil(math.log2(diam / r)))
    while 2.0**k * r <= diam:
        k += 1
    while k > 0 and 2.0 ** (k - 1) * r > diam:
        k -= 1
    return k


def _geometric_tail(terms):
    """Tail estimate after the last term from the last observed ratio."""
    if len(terms) < 2 or terms[-2] == 0:
        return 0.0 if len(terms) and terms[-1] == 0 else math.inf
    rho = terms[-1] / terms[-2]
    if rho >= 1.0:
        return math.inf
    return float(terms[-1] * rho / (1.0 - rho))


# ---------------------------------------------------------------------------
# A1


@dataclass
class A1Result:
    value: float
    abs_error: float
    near: float
    far: float
    finite_near: bool
    finite_far: bool
    levels: int

    @property
    def finite(self):
        return self.finite_near and self.finite_far


def _dyadic_pieces(g, k_lo, k_hi, order):
    # pieces over [2^k, 2^(k+1)] in the variable t = log r
    edges = np.log(2.0) * np.arange(k_lo, k_hi + 1, dtype=float)
    t, w = panel_rule(edges, order)
    r = np.exp(t)
    vals = (g(r) * r * w).reshape(-1, order).sum(axis=1)
    return vals


def check_a1(kernel, cap=1e8, levels=60, order=12):
    """Integrability of ``(1 ^ |y|^q) K(0, y)`` over R^d.

    The integral is reduced to ``|S^{d-1}| int_0^inf (1 ^ r^q) r^-1 phi(r)^-q dr``
    and summed over dyadic shells ``[2^k, 2^(k+1)]`` in log coordinates, which
    removes the ``1/r`` singularity. Each half (near 0 and near infinity) is
    declared divergent when its shell contributions stop decaying or the
    partial sum exceeds ``cap``.
    """
    if isinstance(kernel, FlatKernel):
        raise TypeError("A1 applies to kernels of the |x-y|^-d phi^-q form")
    q = kernel.q

    def g(r):
        return np.minimum(1.0, r**q) / r * np.asarray(kernel.profile(r), dtype=float) ** (-q)

    area = sphere_area(kernel.d)
    out = {}
    for side, (lo, hi) in {"near": (-levels, 0), "far": (0, levels)}.items():
        coarse = _dyadic_pieces(g, lo, hi, order)
        fine = _dyadic_pieces(g, lo, hi, 2 * order)
        # order the shells so the last entries are the ones toward the open end
        shells = fine[::-1] if side == "near" else fine
        total = float(np.sum(fine))
        tail = _geometric_tail(shells[-3:])
        nondecreasing = shells[-1] >= shells[-2] * (1 - 1e-9) and shells[-1] > 0
        finite = math.isfinite(tail) and not nondecreasing and area * total <= cap
        err = abs(float(np.sum(fine) - np.sum(coarse))) + (tail if finite else math.inf)
        out[side] = (total + (tail if finite else 0.0), finite, err)
    near, fin_near, err_near = out["near"]
    far, fin_far, err_far = out["far"]
    value = area * (near + far) if fin_near and fin_far else math.inf
    return A1Result(
        value=value,
        abs_error=area * (err_near + err_far),
        near=area * near if fin_near else math.inf,
        far=area * far if fin_far else math.inf,
        finite_near=fin_near,
        finite_far=fin_far,
        levels=levels,
    )


# ---------------------------------------------------------------------------
# A2 / A3


@dataclass
class A2Result:
    r_grid: np.ndarray
    s1: np.ndarray
    s2: np.ndarray
    s1_tail: np.ndarray
    s2_tail: np.ndarray
    k_max: int

    @property
    def s1_total(self):
        return self.s1 + self.s1_tail

    @property
    def s2_total(self):
        return self.s2 + self.s2_tail

    @property
    def constant(self):
        """Empirical C2: sup over the grid of both (tail-extrapolated) series."""
        return float(max(np.max(self.s1_total), np.max(self.s2_total)))

    @property
    def tail_bound(self):
        return float(max(np.max(self.s1_tail), np.max(self.s2_tail)))

    def passes(self, cap=1e6):
        return math.isfinite(self.constant) and self.constant <= cap


def _profile_of(kernel_or_profile):
    if isinstance(kernel_or_profile, KernelProfile):
        return kernel_or_profile
    if isinstance(kernel_or_profile, FlatKernel):
        raise TypeError("a flat kernel has no profile")
    return kernel_or_profile.profile


def check_a2(kernel, exps, diam=math.inf, r_grid=None, k_max=64):
    """Dyadic series of A2 on a radius grid.

    ``S1(r) = sum_{k=1}^{min(N(r), k_max)} (phi(r)/phi(2^k r))^t1`` and
    ``S2(r) = sum_{k=1}^{k_max} (phi(2^-k r)/phi(r))^t2``. Series cut at
    ``k_max`` get a geometric tail from the last observed term ratio
    (infinite when that ratio is >= 1).
    """
    profile = _profile_of(kernel)
    if profile.variant == "tabulated" and not profile.is_nondecreasing:
        raise DomainError("A2 needs a nondecreasing profile; tabulated values decrease somewhere")
    r_grid = default_r_grid(diam) if r_grid is None else np.asarray(r_grid, dtype=float)
    check_radii(r_grid, "r_grid")
    if not math.isinf(diam) and np.any(r_grid >= diam):
        raise DomainError("r_grid must lie in (0, diam)")
    t1, t2 = exps.t1, exps.t2
    k = np.arange(1, k_max + 1, dtype=float)
    s1 = np.empty(r_grid.size)
    s2 = np.empty(r_grid.size)
    s1_tail = np.zeros(r_grid.size)
    s2_tail = np.empty(r_grid.size)
    for i, r in enumerate(r_grid):
        phi_r = profile(r)
        n_r = dyadic_steps(r, diam)
        m = int(min(n_r, k_max))
        up = (phi_r / profile(2.0 ** k[:m] * r)) ** t1
        s1[i] = up.sum()
        if n_r > k_max:
            s1_tail[i] = _geometric_tail(up)
        down = (profile(2.0 ** (-k) * r) / phi_r) ** t2
        s2[i] = down.sum()
        s2_tail[i] = _geometric_tail(down)
    return A2Result(r_grid, s1, s2, s1_tail, s2_tail, k_max)


@dataclass
class A3Result:
    r_grid: np.ndarray
    ratios: np.ndarray

    @property
    def constant(self):
        return float(np.max(self.ratios))

    def passes(self, cap=1e6):
        return self.constant <= cap


def check_a3(profile, diam=math.inf, r_grid=None):
    """Empirical ``C3 = sup phi(2r)/phi(r)`` over ``r_grid`` in (0, 3 diam)."""
    profile = _profile_of(profile)
    r_grid = default_r_grid(diam, upper_factor=3.0) if r_grid is None else np.asarray(r_grid, float)
    check_radii(r_grid, "r_grid")
    if not math.isinf(diam) and np.any(r_grid >= 3 * diam):
        raise DomainError("r_grid must lie in (0, 3 diam)")
    ratios = np.asarray(profile(2.0 * r_grid), float) / np.asarray(profile(r_grid), float)
    return A3Result(r_grid, ratios)


@dataclass
class AssumptionReport:
    a1_integral: float
    a1_error: float
    a2_constant: float
    a2_tail_bound: float
    a3_constant: float
    r_grid: np.ndarray
    truncation_terms: int
    pass_a1: bool
    pass_a2: bool
    pass_a3: bool
    rows: list

    @property
    def passed(self):
        return self.pass_a1 and self.pass_a2 and self.pass_a3

    def to_dict(self):
        return {
            "a1_integral": self.a1_integral,
            "a1_error": self.a1_error,
            "a2_constant": self.a2_constant,
            "a2_tail_bound": self.a2_tail_bound,
            "a3_constant": self.a3_constant,
            "truncation_terms": self.truncation_terms,
            "pass": {"a1": self.pass_a1, "a2": self.pass_a2, "a3": self.pass_a3},
            "r_grid": [float(r) for r in self.r_grid],
        }

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), default=_json_default, **kwargs)

    def csv_rows(self):
        """Rows ``(r, S1, S2, ratio)`` with ``ratio = phi(2r)/phi(r)``."""
        return [("r", "S1", "S2", "ratio"), *self.rows]


def _json_default(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(type(obj))


def audit_kernel(kernel, exps=None, diam=math.inf, r_grid=None, k_max=64, cap=1e6):
    """Run A1, A2 and A3 together on one grid."""
    exps = exps or ExponentPair(2.0, kernel.q if kernel.q > 1 else 2.0)
    a1 = check_a1(kernel)
    r_grid = default_r_grid(diam) if r_grid is None else np.asarray(r_grid, float)
    try:
        a2 = check_a2(kernel, exps, diam, r_grid, k_max)
        a2_const, a2_tail, a2_ok = a2.constant, a2.tail_bound, a2.passes(cap)
        s1, s2 = a2.s1_total, a2.s2_total
    except DomainError:
        a2_const, a2_tail, a2_ok = math.inf, math.inf, False
        s1 = s2 = np.full(r_grid.size, math.inf)
    a3 = check_a3(kernel.profile, diam, r_grid)
    rows = [(float(r), float(a), float(b), float(c)) for r, a, b, c in zip(r_grid, s1, s2, a3.ratios)]
    return AssumptionReport(
        a1_integral=a1.value,
        a1_error=a1.abs_error,
        a2_constant=a2_const,
        a2_tail_bound=a2_tail,
        a3_constant=a3.constant,
        r_grid=r_grid,
        truncation_terms=k_max,
        pass_a1=a1.finite,
        pass_a2=a2_ok,
        pass_a3=a3.passes(cap),
        rows=rows,
    )


# ---------------------------------------------------------------------------
# Matuszewska indices


@dataclass
class MatuszewskaEstimate:
    lower_index_at_zero: float | None
    lower_index_at_infinity: float | None
    fit_range: np.ndarray
    fit_residual: float
    min_local_exponent: float
    low_confidence: bool


DEFAULT_FIT = {"zero": (1e-8, 1e-4), "infinity": (1e6, 1e12)}


def estimate_matuszewska_lower(profile, end="zero", fit_range=None, n=16, residual_threshold=1e-2):
    """Lower-index estimate of ``phi`` at 0 or at infinity.

    The estimate is the least-squares slope of ``log phi`` against ``log r``
    over the dyadic pairs ``(r, 2r)`` with ``r`` in ``fit_range``. The
    smallest local exponent ``log2(phi(2r)/phi(r))`` is reported too.
    """
    if end not in DEFAULT_FIT:
        raise ValueError("end must be 'zero' or 'infinity'")
    profile = _profile_of(profile)
    if fit_range is None:
        fit_range = np.geomspace(*DEFAULT_FIT[end], n)
    fit_range = np.asarray(fit_range, dtype=float)
    if fit_range.size < 8:
        raise ValueError("fit_range needs at least 8 points")
    check_radii(fit_range, "fit_range")
    r = np.concatenate([fit_range, 2.0 * fit_range])
    logr, logphi = np.log(r), np.log(np.asarray(profile(r), dtype=float))
    slope, intercept = np.polyfit(logr, logphi, 1)
    resid = float(np.sqrt(np.mean((logphi - (slope * logr + intercept)) ** 2)))
    local = np.log2(np.asarray(profile(2.0 * fit_range), float) / np.asarray(profile(fit_range), float))
    return MatuszewskaEstimate(
        lower_index_at_zero=float(slope) if end == "zero" else None,
        lower_index_at_infinity=float(slope) if end == "infinity" else None,
        fit_range=fit_range,
        fit_residual=resid,
        min_local_exponent=float(np.min(local)),
        low_confidence=resid > residual_threshold,
    )
