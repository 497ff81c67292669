"""Seminorms on strips ``R x (0,1)^l`` by exact reduction to 1-D integrals.

For a function of ``x_1`` alone and a power kernel ``K = c^-q |x-y|^-(d+alpha)``
with ``p = q`` the double integral factors. Integrating out the bounded
variables leaves

    full      = 2 int_0^inf D(a) kappa_l(a) da,
    truncated = int_0^(1/2) T(theta t) 2l (1 - 2t)^(l-1) dt,

where ``D(a) = int |g(x) - g(x+a)|^q dx`` is the difference energy of the
profile ``g``, ``kappa_l`` is the cross-section kernel

    kappa_l(a) = int_{(-1,1)^l} prod(1 - |u_j|) (a^2 + |u|^2)^(-(d+alpha)/2) du,

``(1 - 2t)^l`` is the volume of ``{delta > t}`` in the unit cube, and
``T(R)`` is the inner ball integral, whose cross-section weight is an
incomplete beta function. Every remaining integral is one-dimensional
with explicit singular points, so no spatial window is needed; the only
truncation is the far range ``a > A`` of the full integral, bounded
analytically by ``2 D(inf) c^-q A^(1-d-alpha) / (d+alpha-1)``.
"""

import math

import numpy as np
from scipy import integrate, special

from ._rules import graded_breaks, panel_rule
from ._validation import DomainError, check_positive
from .domains import Strip
from .kernels import ExponentPair, Kernel
from .seminorm import SeminormEstimate, SeminormSet

__all__ = [
    "difference_energy",
    "cross_section_kernel",
    "strip_effective_kernel",
    "strip_kernel_ratio",
    "ball_energy",
    "strip_seminorm_set",
    "TailCondition",
    "strip_tail_condition",
]


def _power_kernel_params(kernel):
    """(c^-q, alpha) for ``K = c^-q r^-(d+alpha)``; other kernels are rejected."""
    prof = getattr(kernel, "profile", None)
    if not isinstance(kernel, Kernel) or prof is None or prof.variant != "power":
        raise NotImplementedError("strip seminorms need a power-profile kernel phi(r) = c r^s")
    c, s = prof.params.get("c", 1.0), prof.params["s"]
    return c ** (-kernel.q), s * kernel.q


# ---------------------------------------------------------------------------
# one-dimensional pieces


def difference_energy(f, a, q=2.0, order=8):
    """``D(a) = int_R |g(x) - g(x + a)|^q dx`` for a strip ramp ``f``, vectorized in ``a >= 0``."""
    if f.variant != "strip_ramp":
        raise NotImplementedError("difference_energy is implemented for strip_ramp profiles")
    n = f.params["n"]
    a = np.atleast_1d(np.asarray(a, dtype=float))
    # kinks of g(x) and g(x + a), plus the zero of their difference
    br = np.sort(np.stack([-n - a, -n + 0 * a, -a, 0 * a, n - a, n + 0 * a, -0.5 * a], axis=-1), axis=-1)
    x, w = panel_rule(br, order)
    m = lambda t: np.minimum(np.abs(t), n)  # noqa: E731
    diff = (m(x + a[:, None]) - m(x)) / n
    return abs(f.scale) ** q * np.sum(w * np.abs(diff) ** q, axis=-1)


def _section_weight(rho, l):
    """``W_l(rho) = int_{S^(l-1)} prod (1 - rho |w_j|)_+ dw`` for l in {1, 2}."""
    rho = np.asarray(rho, dtype=float)
    if l == 1:
        return 2.0 * np.maximum(1.0 - rho, 0.0)
    if l == 2:
        inner = 2 * math.pi - 8 * rho + 2 * rho ** 2
        with np.errstate(invalid="ignore", divide="ignore"):
            r = np.clip(rho, 1.0, math.sqrt(2.0))
            outer = 4 * (math.pi / 2 - 2 * np.arccos(1 / r) - 1 + 2 * np.sqrt(r * r - 1) - r * r / 2)
        return np.where(rho <= 1, inner, np.where(rho < math.sqrt(2.0), np.maximum(outer, 0.0), 0.0))
    raise NotImplementedError("cross sections are implemented for l in {1, 2}")


def cross_section_kernel(a, l, sigma, order=10, levels=40):
    """``kappa_l(a)`` for the exponent ``sigma = d + alpha``, vectorized in ``a > 0``."""
    a = np.atleast_1d(np.asarray(a, dtype=float))
    top = math.sqrt(l)
    j = 2.0 ** np.arange(-levels, levels + 1)
    g = 0.5 ** np.arange(1, levels + 1)
    fixed = np.concatenate([[0.0, 1.0, top], 1 - g, 1 + g * (top - 1), top - g * (top - 1)])
    br = np.concatenate([np.broadcast_to(fixed, (len(a), len(fixed))), a[:, None] * j], axis=1)
    br = np.sort(np.clip(br, 0.0, top), axis=1)
    rho, w = panel_rule(br, order)
    vals = rho ** (l - 1) * (a[:, None] ** 2 + rho ** 2) ** (-0.5 * sigma) * _section_weight(rho, l)
    return np.sum(w * vals, axis=1)


def strip_effective_kernel(x1, y1, alpha):
    """``int_0^1 int_0^1 |x - y|^(-2-alpha) dy_2 dx_2`` for points of ``R x (0,1)``."""
    check_positive(alpha, "alpha")
    a = abs(float(x1) - float(y1))
    if a == 0:
        raise DomainError("x1 == y1: the cross-section integral diverges")
    # the difference x_2 - y_2 has density (1 - |u|) on (-1, 1)
    return float(cross_section_kernel(a, 1, 2.0 + alpha)[0])


def strip_kernel_ratio(x1, y1, alpha):
    """``kappa / |x1 - y1|^(-2-alpha)`` at long range, ``kappa / |x1 - y1|^(-1-alpha)`` below 1."""
    a = abs(float(x1) - float(y1))
    k = strip_effective_kernel(x1, y1, alpha)
    return k * a ** (2.0 + alpha) if a >= 1 else k * a ** (1.0 + alpha)


def ball_energy(f, R, l, alpha, q=2.0, order=10, levels=40):
    """``T(R) = int_R dx_1 int_{|z| < R} |g(x_1) - g(x_1 + z_1)|^q |z|^-(1+l+alpha) dz``, vectorized in R."""
    R = np.atleast_1d(np.asarray(R, dtype=float))
    sigma = 1.0 + l + alpha
    a_, b_ = 0.5 * l, 0.5 * (sigma - l)
    sphere = 2 * math.pi ** (0.5 * l) / math.gamma(0.5 * l)
    tau, wt = panel_rule(graded_breaks(0.0, 1.0, (0.0, 1.0), levels), order)
    h = R[:, None] * tau[None]
    D = difference_energy(f, h.ravel(), q).reshape(h.shape)
    # int_{|v| < sqrt(R^2-h^2)} (h^2 + |v|^2)^(-sigma/2) dv over R^l
    section = sphere * 0.5 * special.beta(a_, b_) * special.betainc(a_, b_, 1.0 - tau ** 2)
    vals = D * h ** (l - sigma) * section[None]
    return 2.0 * R * np.sum(wt * vals, axis=1)


# ---------------------------------------------------------------------------
# seminorms


def _full_energy(f, l, alpha, q, order, per_decade):
    n = f.params["n"]
    sigma = 1.0 + l + alpha
    lo = 1e-12 * min(1.0, n)
    A = 1e4 * max(2 * n, math.sqrt(l))
    decades = math.log10(A / lo)
    br = np.unique(np.concatenate([[0.0, 1.0, math.sqrt(l), n, 2 * n],
                                   np.geomspace(lo, A, int(per_decade * decades) + 1)]))
    a, w = panel_rule(br, order)
    body = 2.0 * float(np.sum(w * difference_energy(f, a, q) * cross_section_kernel(a, l, sigma)))
    d_inf = float(difference_energy(f, [2 * n + 1.0], q)[0])
    tail = 2.0 * d_inf * A ** (1 - sigma) / (sigma - 1)
    return body, tail


def _truncated_energy(f, l, alpha, q, theta, order, levels):
    t, w = panel_rule(graded_breaks(0.0, 0.5, (0.0, 0.5), levels), order)
    T = ball_energy(f, theta * t, l, alpha, q, order, levels)
    return float(np.sum(w * T * 2 * l * (1 - 2 * t) ** (l - 1)))


def strip_seminorm_set(f, domain, kernel, exps=None, thetas=(1.0,), cfg=None):
    """Full and truncated seminorms of a strip ramp on ``R x (0,1)^l``.

    Needs ``p = q``, a power kernel and ``k = 1``. The error estimate is
    the gap to a rule of half the order plus the far-range bound.
    """
    exps = exps or ExponentPair()
    if not isinstance(domain, Strip):
        raise TypeError("strip_seminorm_set needs a Strip domain")
    if domain.k != 1 or domain.l not in (1, 2):
        raise NotImplementedError("strip seminorms are implemented for R x (0,1)^l with l in {1, 2}")
    if exps.p != exps.q:
        raise NotImplementedError("the strip reduction needs p = q")
    if f.d != domain.d:
        raise ValueError(f"function dimension {f.d} does not match domain dimension {domain.d}")
    scale, alpha = _power_kernel_params(kernel)
    if kernel.d != domain.d:
        raise ValueError("kernel dimension does not match the strip")
    q, l = exps.q, domain.l
    add_tail = cfg is not None and cfg.tail_bound_mode == "add"
    rel_tol = cfg.rel_tol if cfg is not None else 1e-4
    abs_tol = cfg.abs_tol if cfg is not None else 1e-12
    root = lambda v: max(v, 0.0) ** (1.0 / exps.p)  # noqa: E731

    def estimate(fine, coarse, theta, tail, evals):
        value = root(fine)
        err = abs(value - root(coarse))
        if tail:
            tail_val = root(fine + tail) - value
            err += tail_val
            if add_tail:
                value += tail_val
        flags = [] if err <= rel_tol * value + abs_tol else ["low_confidence"]
        return SeminormEstimate(value, err, evals, exps.p, exps.q, theta, False, tail, flags)

    if f.is_constant:
        zero = lambda th: SeminormEstimate(0.0, 0.0, 0, exps.p, exps.q, th)  # noqa: E731
        return SeminormSet(zero(None), {th: zero(th) for th in thetas})
    ef, tail = _full_energy(f, l, alpha, q, 10, 6)
    ec, _ = _full_energy(f, l, alpha, q, 5, 6)
    full = estimate(scale * ef, scale * ec, None, scale * tail, 0)
    trunc = {}
    for th in thetas:
        tf = _truncated_energy(f, l, alpha, q, th, 10, 40)
        tc = _truncated_energy(f, l, alpha, q, th, 5, 40)
        trunc[th] = estimate(scale * tf, scale * tc, th, 0.0, 0)
    return SeminormSet(full, trunc)


# ---------------------------------------------------------------------------
# far-range condition on R x (0,1)


class TailCondition:
    """Terms ``t_n = int_{strip, |x| > n} K(0, x) dx`` at ``n = 2^j`` and a convergence verdict.

    ``exponent`` is the local decay rate of ``t_n`` from the last two
    terms; the series converges when it exceeds ``1 + margin`` (a plain
    ``1/n`` decay lands a rounding error above 1), and ``tail_bound``
    bounds the sum past the last term by the corresponding power law.
    """

    def __init__(self, ns, terms, margin=0.01):
        self.ns = np.asarray(ns, dtype=float)
        self.terms = np.asarray(terms, dtype=float)
        t1, t2 = self.terms[-2], self.terms[-1]
        self.exponent = math.log(t1 / t2) / math.log(self.ns[-1] / self.ns[-2]) if t2 > 0 else math.inf
        self.converges = bool(self.exponent > 1.0 + margin)
        n = self.ns[-1]
        self.tail_bound = t2 * n / (self.exponent - 1.0) if self.converges else math.inf

    def to_dict(self):
        return {"n": self.ns.tolist(), "terms": self.terms.tolist(), "exponent": self.exponent,
                "converges": self.converges, "tail_bound": self.tail_bound}


def strip_tail_condition(kernel, levels=10):
    """Check ``sum_n int_{B(0,n)^c cap (R x (0,1))} K(0, x) dx < inf`` for a radial kernel on the plane."""
    if kernel.d != 2:
        raise ValueError("the tail condition is stated on R x (0,1), so d = 2")
    ns = 2.0 ** np.arange(levels + 1)
    terms = []
    for n in ns:
        def inner(x2, n=n):
            t0 = math.sqrt(max(n * n - x2 * x2, 0.0))
            val, _ = integrate.quad(lambda t: float(kernel.radial(math.hypot(t, x2))), t0, np.inf, limit=200)
            return 2.0 * val
        terms.append(integrate.quad(inner, 0.0, 1.0, limit=100)[0])
    return TailCondition(ns, terms)
