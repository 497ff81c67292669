"""Full and boundary-truncated seminorms by singular quadrature.

For ``x`` in the domain the inner integral is written in polar form

    I(x) = int_0^Rmax r^(d-1) K(r) A(x, r) dr,
    A(x, r) = int_{|w|=1, x + r w in domain} |f(x) - f(x + r w)|^q dw,

on radial panels with breakpoints at the annuli ``delta(x) c^-j``,
at ``theta delta(x)``, and at the edge and corner distances of ``x``
(graded geometrically from both sides). The truncated integrand is the
same node set masked to ``r < theta delta(x)``, so ``truncated <= full``
holds exactly, not just up to quadrature error. The outer integral is a
tensor Gauss rule graded toward the boundary and toward kinks of ``f``.

Boxes in d = 1 and d = 2 are handled here; strips are delegated to
:mod:`gagliardo.strip`.
"""

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from ._rules import gauss_unit, graded_breaks, panel_rule
from ._validation import DomainError, check_interval
from .domains import Box, Strip
from .kernels import ExponentPair

__all__ = [
    "QuadratureConfig",
    "SeminormEstimate",
    "SeminormSet",
    "full_seminorm",
    "truncated_seminorm",
    "seminorm_set",
    "seminorm_table",
    "comparability_ratio",
    "exact_const_kernel_full",
    "const_kernel_truncated_bound",
    "exact_hilbert_subintegral",
    "hilbert_subintegral_quadrature",
]


@dataclass(frozen=True)
class QuadratureConfig:
    """Quadrature knobs.

    ``sing_split`` annuli (radius ratio ``annulus_ratio``) resolve the diagonal; ``outer_levels`` and
    ``edge_layers`` geometric layers (ratio ``grading``) resolve the
    boundary, kinks, and the edge/corner radii of the inner integral.
    ``max_refine`` bounds how often all orders are doubled when the
    embedded error estimate misses ``rel_tol``.
    """

    rel_tol: float = 1e-4
    abs_tol: float = 1e-12
    max_refine: int = 1
    sing_split: int = 40
    outer_levels: int = 30
    outer_order: int = 10
    radial_order: int = 10
    angular_order: int = 8
    edge_layers: int = 30
    grading: float = 0.15
    annulus_ratio: float = 2.0
    window: float = None
    tail_bound_mode: str = "report"

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_refine < 0:
            raise ValueError("max_refine must be >= 0")
        if self.tail_bound_mode not in ("report", "add"):
            raise ValueError("tail_bound_mode is 'report' or 'add'")
        check_interval(self.grading, "grading", 0.0, 1.0)
        if not self.annulus_ratio > 1:
            raise ValueError("annulus_ratio must exceed 1")

    @classmethod
    def desk_2d(cls, **kw):
        """Coarser defaults that keep square-domain runs to seconds."""
        base = dict(sing_split=10, outer_levels=4, outer_order=4, radial_order=4, angular_order=4, edge_layers=2,
                    annulus_ratio=4.0, max_refine=0)
        base.update(kw)
        return cls(**base)

    def refined(self):
        """Doubled Gauss orders and half again as many graded layers."""
        more = lambda n: n + (n + 1) // 2  # noqa: E731
        return replace(self, outer_order=2 * self.outer_order, radial_order=2 * self.radial_order,
                       angular_order=2 * self.angular_order, outer_levels=more(self.outer_levels),
                       edge_layers=more(self.edge_layers))

    def coarse(self):
        """Embedded lower rule: halved orders and two thirds of the layers."""
        half = lambda n: max(2, n // 2)  # noqa: E731
        less = lambda n: max(1, (2 * n) // 3)  # noqa: E731
        return replace(self, outer_order=half(self.outer_order), radial_order=half(self.radial_order),
                       angular_order=half(self.angular_order), outer_levels=less(self.outer_levels),
                       edge_layers=less(self.edge_layers))


def _default_cfg(domain, cfg):
    if cfg is not None:
        return cfg
    return QuadratureConfig.desk_2d() if domain.d >= 2 else QuadratureConfig()


@dataclass
class SeminormEstimate:
    """One seminorm value with the outer ``1/p`` power applied.

    ``energy`` is the un-rooted double integral (``value ** p``); ``theta``
    is None for the full seminorm.
    """

    value: float
    abs_error: float
    evaluations: int
    p: float = 2.0
    q: float = 2.0
    theta: float = None
    truncated_domain: bool = False
    tail_bound: float = 0.0
    flags: list = field(default_factory=list)

    @property
    def inner_power(self):
        return self.p / self.q

    @property
    def value_squared(self):
        return self.value ** 2

    @property
    def energy(self):
        return self.value ** self.p

    @property
    def low_confidence(self):
        return "low_confidence" in self.flags

    def to_dict(self):
        return {"value": self.value, "value_squared": self.value_squared, "abs_error": self.abs_error,
                "evaluations": self.evaluations, "theta": self.theta, "inner_power": self.inner_power,
                "tail_bound": self.tail_bound, "truncated_domain": self.truncated_domain, "flags": list(self.flags)}

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


@dataclass
class SeminormSet:
    """Full and truncated estimates computed on one shared node set."""

    full: SeminormEstimate
    truncated: dict

    def ratio(self, theta):
        t = self.truncated[theta].value
        f = self.full.value
        if t == 0.0:
            return math.nan if f == 0.0 else math.inf
        return f / t

    @property
    def monotone(self):
        """truncated(theta_1) <= truncated(theta_2) <= full, exact comparison."""
        vals = [self.truncated[t].value for t in sorted(self.truncated)] + [self.full.value]
        return all(a <= b for a, b in zip(vals, vals[1:]))


# ---------------------------------------------------------------------------
# node sets


def _outer_rule(box, funcs, cfg):
    axes_x, axes_w = [], []
    for i in range(box.d):
        a, b = box.lo[i], box.hi[i]
        kinks = sorted({k for f in funcs for k in f.kinks(i) if a < k < b})
        br = graded_breaks(a, b, singular=(a, b, *kinks), levels=cfg.outer_levels,
                           interior=(0.5 * (a + b),), ratio=cfg.grading)
        x, w = panel_rule(br, cfg.outer_order)
        axes_x.append(x)
        axes_w.append(w)
    grids = np.meshgrid(*axes_x, indexing="ij")
    wgrid = np.meshgrid(*axes_w, indexing="ij")
    x = np.stack([g.ravel() for g in grids], axis=-1)
    w = np.prod(np.stack([g.ravel() for g in wgrid], axis=-1), axis=-1)
    return x, w


def _edge_distances(box, x):
    """Distances to the faces, ordered by outward normal angle in 2-D (+x, +y, -x, -y)."""
    if box.d == 1:
        return np.stack([box.hi[0] - x[:, 0], x[:, 0] - box.lo[0]], axis=-1)
    return np.stack([box.hi[0] - x[:, 0], box.hi[1] - x[:, 1], x[:, 0] - box.lo[0], x[:, 1] - box.lo[1]], axis=-1)


def _radial_breaks(box, x, funcs, thetas, cfg):
    e = _edge_distances(box, x)
    delta = e.min(axis=1)
    if box.d == 1:
        special = [e]
        rmax = e.max(axis=1)
    else:
        corners = np.sqrt(e ** 2 + np.roll(e, -1, axis=1) ** 2)
        special = [e, corners]
        rmax = corners.max(axis=1)
    for i in range(box.d):
        ks = [k for f in funcs for k in f.kinks(i) if box.lo[i] < k < box.hi[i]]
        if ks:
            special.append(np.abs(x[:, i:i + 1] - np.asarray(ks)[None]))
    special = np.concatenate(special, axis=1)
    g = cfg.grading ** np.arange(1, cfg.edge_layers + 1)
    graded = np.concatenate([special, (special[..., None] * (1 - g)).reshape(len(x), -1),
                             (special[..., None] * (1 + g)).reshape(len(x), -1)], axis=1)
    down = delta[:, None] * cfg.annulus_ratio ** (-np.arange(1, cfg.sing_split + 1))
    n_up = int(np.ceil(np.log2(np.max(rmax / delta)) / 2)) + 1
    up = delta[:, None] * 4.0 ** np.arange(n_up)
    trunc = delta[:, None] * np.asarray(sorted(thetas), dtype=float)[None]
    br = np.concatenate([np.zeros((len(x), 1)), down, up, trunc, graded], axis=1)
    br = np.sort(np.clip(br, 0.0, rmax[:, None]), axis=1)
    return br, e, delta


def _line_breaks(box, x, funcs, thetas, cfg):
    """1-D inner breakpoints in y: annuli around x, theta-points, and fixed
    geometric layers toward the endpoints and kinks (built in y, so layers
    next to an endpoint keep full relative precision)."""
    a, b = box.lo[0], box.hi[0]
    xc = x[:, :1]
    e = np.stack([b - x[:, 0], x[:, 0] - a], axis=-1)
    delta = e.min(axis=1)
    dj = delta[:, None] * cfg.annulus_ratio ** (-np.arange(0, cfg.sing_split + 1))
    n_up = int(np.ceil(np.log2(np.max((b - a) / delta)) / 2)) + 1
    up = delta[:, None] * 4.0 ** np.arange(1, n_up + 1)
    th = delta[:, None] * np.asarray(thetas, dtype=float)[None]
    ks = sorted({k for f in funcs for k in f.kinks(0) if a < k < b})
    fixed = graded_breaks(a, b, singular=(a, b, *ks), levels=cfg.edge_layers, ratio=cfg.grading)
    br = np.concatenate([xc, xc - dj, xc + dj, xc - up, xc + up, xc - th, xc + th,
                         np.broadcast_to(fixed, (len(x), len(fixed)))], axis=1)
    return np.sort(np.clip(br, a, b), axis=1), e, delta


class _PolarGrid:
    """Outer nodes with per-node inner nodes.

    In 2-D the inner nodes are radial panels combined with the angular arcs
    of the box; in 1-D they are points ``y`` and ``r = |x - y|``.
    """

    def __init__(self, box, funcs, thetas, cfg):
        self.box, self.cfg = box, cfg
        self.d = box.d
        self.x, self.wx = _outer_rule(box, funcs, cfg)
        if self.d == 1:
            br, self.e, self.delta = _line_breaks(box, self.x, funcs, thetas, cfg)
            self.y, self.wr = panel_rule(br, cfg.radial_order)
            self.r = np.abs(self.y - self.x[:, :1])
        else:
            br, self.e, self.delta = _radial_breaks(box, self.x, funcs, thetas, cfg)
            self.r, self.wr = panel_rule(br, cfg.radial_order)
        self.J = cfg.sing_split
        self.ratio = cfg.annulus_ratio

    def angular_moment(self, f, q, chunk=2_000_000):
        """A(x, r) for every outer node and inner node."""
        fx = f(self.x)
        if self.d == 1:
            # zero-length padding panels may put nodes on a singular endpoint
            live = self.wr > 0
            with np.errstate(divide="ignore", invalid="ignore"):
                vals = np.abs(fx[:, None] - f(np.where(live, self.y, self.x[:, :1])[..., None])) ** q
            return np.where(live, vals, 0.0)
        n_x, n_r = self.r.shape
        A = np.empty((n_x, n_r))
        t, wt = gauss_unit(self.cfg.angular_order)
        step = max(1, chunk // (n_r * 4 * len(t)))
        for s in range(0, n_x, step):
            sl = slice(s, min(s + step, n_x))
            r = self.r[sl][..., None]
            e = self.e[sl][:, None, :]
            w = np.arccos(np.minimum(e / np.maximum(r, 1e-300), 1.0))  # (b, n_r, 4)
            acc = np.zeros(r.shape[:2])
            for k in range(4):
                lo = k * math.pi / 2 + w[..., k]
                hi = (k + 1) * math.pi / 2 - w[..., (k + 1) % 4]
                span = np.maximum(hi - lo, 0.0)
                ang = lo[..., None] + span[..., None] * t
                y = self.x[sl][:, None, None, :] + r[..., None] * np.stack([np.cos(ang), np.sin(ang)], -1)
                y = np.clip(y, self.box.lo, self.box.hi)  # arc ends sit on the boundary up to rounding
                vals = np.abs(fx[sl][:, None, None] - f(y)) ** q
                acc += span * np.sum(vals * wt, axis=-1)
            A[sl] = acc
        return A

    @property
    def evaluations(self):
        n = self.r.size * (1 if self.d == 1 else 4 * self.cfg.angular_order)
        return int(n + len(self.x))

    def energies(self, A, kernel, exps, thetas):
        """Outer energies for the full integral and each theta, plus a tail bound."""
        # padding nodes at r = 0 give inf * 0; they are masked out right after
        with np.errstate(over="ignore", invalid="ignore"):
            dens = self.wr * self.r ** (self.d - 1) * kernel.radial(np.maximum(self.r, 1e-300)) * A
        dens = np.where((self.r > 0) & (self.wr > 0), dens, 0.0)
        inner = dens.sum(axis=1)
        pw = exps.p / exps.q
        full = float(np.sum(self.wx * inner ** pw))
        trunc = {}
        for th in thetas:
            mask = self.r < th * self.delta[:, None]
            trunc[th] = float(np.sum(self.wx * np.where(mask, dens, 0.0).sum(axis=1) ** pw))
        # geometric tail of the annuli below delta * ratio^-J
        edges = self.delta[:, None] * self.ratio ** -np.array([self.J - 2, self.J - 1, self.J])[None]
        cum = np.stack([np.where(self.r < edges[:, [k]], dens, 0.0).sum(axis=1) for k in range(3)], axis=1)
        t_outer, t_inner = cum[:, 0] - cum[:, 1], cum[:, 1] - cum[:, 2]
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(t_outer > 0, t_inner / t_outer, 0.0)
        tail = np.where(ratio < 1.0, t_inner * ratio / np.maximum(1.0 - ratio, 1e-300), np.inf)
        # annuli at roundoff level carry no information about decay
        tail = np.where(t_inner > 1e-12 * inner, tail, 0.0) + cum[:, 2]
        full_tail = float(np.sum(self.wx * (inner + tail) ** pw)) - full if np.all(np.isfinite(tail)) else math.inf
        return full, trunc, full_tail


def _estimates(grid_f, grid_c, A_f, A_c, kernel, exps, thetas, cfg, evals):
    ef, tf, tail = grid_f.energies(A_f, kernel, exps, thetas)
    ec, tc, _ = grid_c.energies(A_c, kernel, exps, thetas)
    p = exps.p
    root = lambda v: max(v, 0.0) ** (1.0 / p)  # noqa: E731

    def make(fine, coarse, theta, tail_bound):
        value = root(fine)
        flags = []
        err = abs(value - root(coarse))
        if theta is None and tail_bound > 0:
            tail_val = root(fine + tail_bound) - value if math.isfinite(tail_bound) else math.inf
            if not math.isfinite(tail_val):
                flags.append("divergent")
            elif cfg.tail_bound_mode == "add":
                value += tail_val
            err += tail_val
        if not err <= cfg.rel_tol * value + cfg.abs_tol:
            flags.append("low_confidence")
        return SeminormEstimate(value, err, evals, exps.p, exps.q, theta, False,
                                tail_bound if theta is None else 0.0, flags)

    full = make(ef, ec, None, tail)
    return SeminormSet(full, {th: make(tf[th], tc[th], th, 0.0) for th in thetas})


def _as_box(domain):
    if isinstance(domain, Box) and domain.d in (1, 2):
        return domain
    raise NotImplementedError(f"seminorm quadrature supports intervals, 2-D boxes and strips, not {domain!r}")


def _check_args(f, domain, thetas):
    if f.d != domain.d:
        raise ValueError(f"function dimension {f.d} does not match domain dimension {domain.d}")
    for th in thetas:
        check_interval(th, "theta", 0.0, 1.0, hi_open=False)


def seminorm_table(funcs, domain, kernels, exps=None, thetas=(1.0,), cfg=None):
    """Seminorms of several functions under several kernels on shared nodes.

    Returns ``table[i][k]``, a :class:`SeminormSet` for ``funcs[i]`` and
    ``kernels[k]``. The angular moments ``A(x, r)`` are computed once per
    function and reused for every kernel and every theta.
    """
    exps = exps or ExponentPair()
    thetas = tuple(sorted(float(t) for t in thetas))
    funcs, kernels = list(funcs), list(kernels)
    for f in funcs:
        _check_args(f, domain, thetas)
    if isinstance(domain, Strip):
        from .strip import strip_seminorm_set
        return [[strip_seminorm_set(f, domain, k, exps, thetas, cfg) for k in kernels] for f in funcs]
    box = _as_box(domain)
    cfg = _default_cfg(domain, cfg)
    for attempt in range(cfg.max_refine + 1):
        gf = _PolarGrid(box, funcs, thetas, cfg)
        gc = _PolarGrid(box, funcs, thetas, cfg.coarse())
        evals = gf.evaluations + gc.evaluations
        table = []
        for f in funcs:
            if f.is_constant:
                zero = SeminormSet(SeminormEstimate(0.0, 0.0, 0, exps.p, exps.q),
                                   {th: SeminormEstimate(0.0, 0.0, 0, exps.p, exps.q, th) for th in thetas})
                table.append([zero for _ in kernels])
                continue
            Af, Ac = gf.angular_moment(f, exps.q), gc.angular_moment(f, exps.q)
            table.append([_estimates(gf, gc, Af, Ac, k, exps, thetas, cfg, evals) for k in kernels])
        low = any(s.full.low_confidence or any(t.low_confidence for t in s.truncated.values())
                  for row in table for s in row)
        if not low or attempt == cfg.max_refine:
            return table
        cfg = cfg.refined()
    return table


def seminorm_set(f, domain, kernel, exps=None, thetas=(1.0,), cfg=None):
    """Full seminorm and truncated seminorms for every theta on one node set."""
    return seminorm_table([f], domain, [kernel], exps, thetas, cfg)[0][0]


def full_seminorm(f, domain, kernel, exps=None, cfg=None):
    """``( int ( int |f(x)-f(y)|^q K(x,y) dy )^(p/q) dx )^(1/p)`` over the domain."""
    return seminorm_set(f, domain, kernel, exps, (1.0,), cfg).full


def truncated_seminorm(f, domain, kernel, exps=None, theta=1.0, cfg=None):
    """Same as :func:`full_seminorm` with the inner integral over ``|x-y| < theta delta(x)``."""
    return seminorm_set(f, domain, kernel, exps, (theta,), cfg).truncated[float(theta)]


def comparability_ratio(f, domain, kernel, exps=None, theta=1.0, cfg=None):
    """full / truncated on shared nodes; inf if only the truncated value is 0, nan for 0/0."""
    return seminorm_set(f, domain, kernel, exps, (theta,), cfg).ratio(float(theta))


# ---------------------------------------------------------------------------
# closed forms for the one-dimensional examples


def exact_const_kernel_full(gamma):
    """Squared full seminorm of ``x^-gamma`` on (0,1) for ``K == 1``: ``2(1/(1-2g) - 1/(1-g)^2)``."""
    if not 0 < gamma < 0.5:
        raise DomainError(f"gamma must lie in (0, 1/2); the value has a pole at 1/2, got {gamma}")
    return 2.0 * (1.0 / (1.0 - 2.0 * gamma) - 1.0 / (1.0 - gamma) ** 2)


def const_kernel_truncated_bound(gamma, eps):
    """Upper bound for the squared truncated seminorm of ``x^-gamma`` with ``K == 1``, ``theta = eps``."""
    if not 0 < gamma < 0.5:
        raise DomainError(f"gamma must lie in (0, 1/2), got {gamma}")
    check_interval(eps, "eps", 0.0, 1.0, hi_open=False)
    g = gamma
    return (eps / (1 - g)
            - ((1 + eps) ** (1 - g) - (1 - eps) ** (1 - g)) / (1 - g) ** 2
            + ((1 + eps) ** (1 - 2 * g) - (1 - eps) ** (1 - 2 * g)) / ((1 - 2 * g) * (2 - 2 * g)))


def exact_hilbert_subintegral(n):
    """``n ln n - 2n + ln n + 2``: the part ``1/n < y < x < 1`` of the energy of ``min(n, 1/x)`` under ``|x-y|^-1``."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return n * math.log(n) - 2 * n + math.log(n) + 2


def hilbert_subintegral_quadrature(n, order=16, levels=40):
    """Quadrature of ``int_{1/n}^1 int_{1/n}^x (1/x - 1/y)^2 / (x - y) dy dx``."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    a = 1.0 / n
    if n == 1:
        return 0.0
    # the integrand equals (x - y) / (x y)^2: smooth, but steep near y = 1/n
    xs = np.geomspace(a, 1.0, levels + 1)
    x, wx = panel_rule(xs, order)
    br = a * (x[:, None] / a) ** np.linspace(0.0, 1.0, levels + 1)[None]
    y, wy = panel_rule(br, order)
    inner = np.sum(wy * (x[:, None] - y) / (x[:, None] * y) ** 2, axis=1)
    return float(np.sum(wx * inner))
