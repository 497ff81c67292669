"""Composite Gauss-Legendre rules on (possibly batched) panel breakpoints."""

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=64)
def gauss_unit(n):
    """Gauss-Legendre nodes and weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def panel_rule(breaks, n):
    """Nodes and weights of an n-point rule on every panel of ``breaks``.

    ``breaks`` has shape (..., B) and must be sorted along the last axis.
    Returns arrays of shape (..., (B - 1) * n). Zero-length panels get
    zero weight, which lets callers pad breakpoint lists to a fixed size.
    """
    breaks = np.asarray(breaks, dtype=float)
    t, w = gauss_unit(n)
    lo = breaks[..., :-1, None]
    h = breaks[..., 1:, None] - lo
    nodes = lo + h * t
    weights = h * w
    shape = breaks.shape[:-1] + (-1,)
    return nodes.reshape(shape), weights.reshape(shape)


def geometric_toward(point, span, levels, ratio=0.5):
    """Breakpoints ``point + span * ratio**j`` for j = 0..levels (signed span)."""
    j = np.arange(levels + 1)
    return point + span * ratio ** j


def graded_breaks(a, b, singular=(), levels=40, interior=(), ratio=0.5):
    """Sorted breakpoints on [a, b] graded geometrically toward ``singular``.

    Each singular point s in [a, b] gets ``levels`` geometric layers with
    the given ``ratio`` on both sides (clipped to the interval);
    ``interior`` points are plain breakpoints.
    """
    pts = [a, b, *interior]
    for s in singular:
        # layers closer than a few ulps of s would collapse onto s
        tiny = 64 * np.spacing(max(abs(s), np.finfo(float).tiny))
        if s > a:
            g = geometric_toward(s, -(s - a), levels, ratio)[1:]
            pts.extend(g[s - g > tiny])
        if s < b:
            g = geometric_toward(s, b - s, levels, ratio)[1:]
            pts.extend(g[g - s > tiny])
        pts.append(s)
    pts = np.unique(np.clip(np.asarray(pts, dtype=float), a, b))
    return pts


def integrate_1d(func, a, b, singular=(), levels=40, order=10, interior=(), ratio=0.5):
    """Composite Gauss integral of a vectorized ``func`` over [a, b]."""
    x, w = panel_rule(graded_breaks(a, b, singular, levels, interior, ratio), order)
    return float(np.sum(w * func(x)))
