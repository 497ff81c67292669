"""Domains in R^d: intervals, boxes, strips ``R^k x (0,1)^l`` and finite
unions of axis-aligned boxes (d <= 2).

Every domain answers ``contains(x)`` and ``delta(x) = d(x, boundary)`` on
point arrays of shape (..., d), and the cube queries used by the Whitney
builder. ``delta`` is set to 0 outside the domain so that ``delta > 0``
exactly on the domain.
"""

import itertools
import math

import numpy as np

from ._validation import check_points

__all__ = ["Domain", "Interval", "Box", "Strip", "BoxUnion", "unit_square", "l_shape", "domain_from_dict"]

INSIDE, OUTSIDE, STRADDLE = "inside", "outside", "straddle"


class Domain:
    d: int
    diam: float

    @property
    def bounded(self):
        return math.isfinite(self.diam)

    def contains(self, x):
        return self.delta(x) > 0

    def delta(self, x):
        raise NotImplementedError

    def bounding_box(self):
        """(lo, hi) arrays, or None when the domain is unbounded."""
        raise NotImplementedError

    def cube_status(self, lo, hi):
        raise NotImplementedError

    def cube_boundary_distance(self, lo, hi):
        """Euclidean distance from the closed cube [lo, hi] to the boundary."""
        raise NotImplementedError


class Box(Domain):
    """Open box ``prod (a_i, b_i)``; ``Interval`` is the 1-D case."""

    def __init__(self, bounds):
        b = np.asarray(bounds, dtype=float).reshape(-1, 2)
        if np.any(b[:, 1] <= b[:, 0]):
            raise ValueError("empty box: need a_i < b_i on every axis")
        self.lo, self.hi = b[:, 0].copy(), b[:, 1].copy()
        self.d = b.shape[0]
        self.diam = float(np.linalg.norm(self.hi - self.lo))

    def delta(self, x):
        x = check_points(x, self.d)
        gap = np.minimum(x - self.lo, self.hi - x).min(axis=-1)
        return np.maximum(gap, 0.0)

    def bounding_box(self):
        return self.lo.copy(), self.hi.copy()

    def cube_status(self, lo, hi):
        if np.any(hi <= self.lo) or np.any(lo >= self.hi):
            return OUTSIDE
        if np.all(lo >= self.lo) and np.all(hi <= self.hi):
            return INSIDE
        return STRADDLE

    def cube_boundary_distance(self, lo, hi):
        if self.cube_status(lo, hi) != INSIDE:
            return 0.0
        return float(np.minimum(lo - self.lo, self.hi - hi).min())

    def to_dict(self):
        return {"type": "box", "bounds": np.stack([self.lo, self.hi], 1).tolist()}

    def __repr__(self):
        return f"Box({np.stack([self.lo, self.hi], 1).tolist()})"


class Interval(Box):
    def __init__(self, a=0.0, b=1.0):
        super().__init__([[a, b]])
        self.a, self.b = float(a), float(b)

    def to_dict(self):
        return {"type": "interval", "a": self.a, "b": self.b}

    def __repr__(self):
        return f"Interval({self.a}, {self.b})"


def unit_square():
    return Box([[0.0, 1.0], [0.0, 1.0]])


class Strip(Domain):
    """``R^k x (0,1)^l``: the first k axes are unbounded."""

    def __init__(self, k=1, l=1):
        if k < 1 or l < 1:
            raise ValueError("a strip needs k >= 1 unbounded and l >= 1 bounded axes")
        self.k, self.l = int(k), int(l)
        self.d = self.k + self.l
        self.diam = math.inf

    def delta(self, x):
        x = check_points(x, self.d)[..., self.k:]
        return np.maximum(np.minimum(x, 1.0 - x).min(axis=-1), 0.0)

    def bounding_box(self):
        return None

    def cube_status(self, lo, hi):
        lo, hi = lo[self.k:], hi[self.k:]
        if np.any(hi <= 0) or np.any(lo >= 1):
            return OUTSIDE
        if np.all(lo >= 0) and np.all(hi <= 1):
            return INSIDE
        return STRADDLE

    def cube_boundary_distance(self, lo, hi):
        if self.cube_status(lo, hi) != INSIDE:
            return 0.0
        return float(np.minimum(lo[self.k:], 1.0 - hi[self.k:]).min())

    def to_dict(self):
        return {"type": "strip", "k": self.k, "l": self.l}

    def __repr__(self):
        return f"Strip(k={self.k}, l={self.l})"


def _box_distance(lo1, hi1, lo2, hi2):
    """Euclidean distance between closed boxes; broadcasts over leading axes."""
    gap = np.maximum(0.0, np.maximum(lo1 - hi2, lo2 - hi1))
    return np.sqrt(np.sum(gap * gap, axis=-1))


class BoxUnion(Domain):
    """Interior of a finite union of closed axis-aligned boxes, d in {1, 2}.

    The true boundary is assembled from box faces whose two sides are not
    both covered, so shared internal faces do not count as boundary.
    """

    def __init__(self, boxes):
        self.boxes = [Box(b) for b in boxes]
        dims = {b.d for b in self.boxes}
        if len(dims) != 1 or dims.pop() not in (1, 2):
            raise ValueError("BoxUnion supports boxes of one common dimension, 1 or 2")
        self.d = self.boxes[0].d
        self._blo = np.array([b.lo for b in self.boxes])
        self._bhi = np.array([b.hi for b in self.boxes])
        self._faces_lo, self._faces_hi = self._boundary_faces()
        lo, hi = self.bounding_box()
        corners = np.array(list(itertools.product(*zip(lo, hi))))
        self.diam = float(np.max(np.linalg.norm(corners[:, None] - corners[None], axis=-1)))

    def _in_closed(self, pts):
        pts = np.asarray(pts, dtype=float)[..., None, :]
        return np.any(np.all((pts >= self._blo) & (pts <= self._bhi), axis=-1), axis=-1)

    def _boundary_faces(self):
        eps = 1e-9 * max(1.0, float(np.max(self._bhi - self._blo)))
        los, his = [], []
        if self.d == 1:
            for x in np.unique(np.concatenate([self._blo[:, 0], self._bhi[:, 0]])):
                if self._in_closed([[x - eps]])[0] != self._in_closed([[x + eps]])[0]:
                    los.append([x])
                    his.append([x])
            return np.array(los), np.array(his)
        for axis in (0, 1):
            other = 1 - axis
            cuts = np.unique(np.concatenate([self._blo[:, other], self._bhi[:, other]]))
            for c in np.unique(np.concatenate([self._blo[:, axis], self._bhi[:, axis]])):
                for s0, s1 in zip(cuts[:-1], cuts[1:]):
                    m = np.empty(2)
                    m[axis], m[other] = c, 0.5 * (s0 + s1)
                    a, b = m.copy(), m.copy()
                    a[axis] -= eps
                    b[axis] += eps
                    if self._in_closed([a])[0] != self._in_closed([b])[0]:
                        lo, hi = np.empty(2), np.empty(2)
                        lo[axis] = hi[axis] = c
                        lo[other], hi[other] = s0, s1
                        los.append(lo)
                        his.append(hi)
        return np.array(los), np.array(his)

    def _dist_to_faces(self, x):
        x = check_points(x, self.d)
        return _box_distance(x[..., None, :], x[..., None, :], self._faces_lo, self._faces_hi).min(axis=-1)

    def delta(self, x):
        x = check_points(x, self.d)
        dist = self._dist_to_faces(x)
        return np.where(self._in_closed(x) & (dist > 0), dist, 0.0)

    def bounding_box(self):
        return self._blo.min(axis=0), self._bhi.max(axis=0)

    def cube_boundary_distance(self, lo, hi):
        return float(_box_distance(lo, hi, self._faces_lo, self._faces_hi).min())

    def cube_status(self, lo, hi):
        dist = self.cube_boundary_distance(lo, hi)
        centre = 0.5 * (lo + hi)
        if dist > 0:
            return INSIDE if self._in_closed(centre[None])[0] else OUTSIDE
        # the cube touches the boundary; outside if no box overlaps its interior
        overlap = np.all((np.minimum(hi, self._bhi) - np.maximum(lo, self._blo)) > 0, axis=-1)
        return STRADDLE if np.any(overlap) else OUTSIDE

    def to_dict(self):
        return {"type": "box_union", "boxes": [np.stack([b.lo, b.hi], 1).tolist() for b in self.boxes]}

    def __repr__(self):
        return f"BoxUnion({len(self.boxes)} boxes, d={self.d})"


def l_shape():
    """``(0,2)^2`` minus ``[1,2]^2`` as a union of three unit squares."""
    return BoxUnion([[[0, 1], [0, 1]], [[1, 2], [0, 1]], [[0, 1], [1, 2]]])


def domain_from_dict(data):
    kind = data["type"]
    if kind == "interval":
        return Interval(data["a"], data["b"])
    if kind == "box":
        return Box(data["bounds"])
    if kind == "strip":
        return Strip(data["k"], data["l"])
    if kind == "box_union":
        return BoxUnion(data["boxes"])
    raise ValueError(f"unknown domain type {kind!r}")
