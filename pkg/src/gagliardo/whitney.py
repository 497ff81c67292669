"""Dyadic Whitney decompositions, neighbour graphs, admissible chains,
shadows and the cube-sum inequalities built on them.

Cubes are stored column-wise (level, integer index, lower corner, side) so
that the pairwise checks and lemma sums are plain numpy broadcasts.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import breadth_first_order
from scipy.spatial import cKDTree

from ._validation import NoChainError
from .domains import INSIDE, OUTSIDE, _box_distance
from .kernels import KernelProfile

__all__ = [
    "DyadicCube",
    "WhitneyDecomposition",
    "Chain",
    "LemmaReport",
    "WhitneyReport",
    "whitney_decompose",
    "decomposition_from_cubes",
    "long_distance",
    "admissible_chain",
    "shadow",
    "verify_whitney",
    "check_rho",
    "lemma_sum_all_over",
    "lemma_shadow_sum",
    "lemma_chain_sum",
    "default_rho",
]

_CHUNK = 512
ACCEPT_LADDER = (2.0, 3.0, 4.0, 6.0)


@dataclass(frozen=True)
class DyadicCube:
    """Closed cube ``origin + side * (index + [0,1]^d)`` with ``side = base * 2**-level``."""

    level: int
    index: tuple
    base: float = 1.0
    origin: tuple = None

    @property
    def d(self):
        return len(self.index)

    @property
    def side(self):
        return self.base * 2.0 ** (-self.level)

    @property
    def lo(self):
        o = np.zeros(self.d) if self.origin is None else np.asarray(self.origin, dtype=float)
        return o + self.side * np.asarray(self.index, dtype=float)

    @property
    def hi(self):
        return self.lo + self.side

    @property
    def center(self):
        return self.lo + 0.5 * self.side


def long_distance(Q, S):
    """``D(Q, S) = l(Q) + dist(Q, S) + l(S)``."""
    return float(Q.side + _box_distance(Q.lo, Q.hi, S.lo, S.hi) + S.side)


def _pair_distance(lo_a, side_a, lo_b, side_b):
    """Set distances between every cube of batch a and every cube of batch b."""
    return _box_distance(lo_a[:, None], (lo_a + side_a[:, None])[:, None], lo_b[None], (lo_b + side_b[:, None])[None])


def _level_pairs(lo_a, side_a, lo_b, side_b, radius):
    """Pairs (i, j) with Chebyshev centre distance <= ``radius(s_a, s_b)``.

    Cubes are grouped by side and matched with one KD-tree query per pair of
    sides; ``radius`` returns None to skip a pair of sides.
    """
    ca, cb = lo_a + 0.5 * side_a[:, None], lo_b + 0.5 * side_b[:, None]
    groups_a = {v: np.flatnonzero(side_a == v) for v in np.unique(side_a)}
    groups_b = {v: np.flatnonzero(side_b == v) for v in np.unique(side_b)}
    trees_b = {v: cKDTree(cb[ix]) for v, ix in groups_b.items()}
    rows, cols = [np.zeros(0, int)], [np.zeros(0, int)]
    for va, ia in groups_a.items():
        tree_a = cKDTree(ca[ia])
        for vb, ib in groups_b.items():
            r = radius(va, vb)
            if r is None or r < 0:
                continue
            hits = tree_a.query_ball_tree(trees_b[vb], r, p=np.inf)
            k = np.repeat(np.arange(len(hits)), [len(h) for h in hits])
            if len(k):
                rows.append(ia[k])
                cols.append(ib[np.concatenate(hits).astype(int)])
    return np.concatenate(rows), np.concatenate(cols)


def _touching_pairs(lo, side, lo2=None, side2=None):
    """Index pairs (i, j) whose closed cubes intersect (i != j when self-paired)."""
    same = lo2 is None
    if same:
        lo2, side2 = lo, side
    # dyadic centres sit on a grid of pitch min_side / 2, so a quarter pitch is a safe slack
    slack = 0.25 * min(side.min(), side2.min())
    i, j = _level_pairs(lo, side, lo2, side2, lambda a, b: 0.5 * (a + b) + slack * 1e-3)
    if same:
        keep = i != j
        i, j = i[keep], j[keep]
    return i, j


class WhitneyDecomposition:
    """Finite family of closed dyadic cubes with a neighbour graph.

    Attributes
    ----------
    level, index, lo, side : ndarray
        Per-cube data; cube ``i`` is ``[lo[i], lo[i] + side[i]]``.
    adjacency : scipy.sparse.csr_matrix
        Symmetric 0/1 matrix, nonzero when the closed cubes intersect.
    c_w : float
        Constant in ``c_w l(Q) <= d(Q, boundary) <= 4 c_w l(Q)``.
    frontier : ndarray of bool
        Cubes touching the region discarded at ``max_depth``.
    """

    def __init__(self, level, index, base=1.0, origin=None, domain=None, max_depth=None,
                 truncated=False, c_w=None, rho=None, frontier=None, accept=None, flags=()):
        self.level = np.asarray(level, dtype=int)
        self.index = np.asarray(index, dtype=np.int64).reshape(len(self.level), -1)
        self.d = self.index.shape[1]
        self.base = float(base)
        self.origin = np.zeros(self.d) if origin is None else np.asarray(origin, dtype=float)
        self.side = self.base * 2.0 ** (-self.level.astype(float))
        self.lo = self.origin + self.side[:, None] * self.index
        self.domain = domain
        self.max_depth = max_depth
        self.truncated = bool(truncated)
        self.c_w = 2.0 * math.sqrt(self.d) if c_w is None else float(c_w)
        self.rho = default_rho(self.d) if rho is None else float(rho)
        self.accept = accept
        self.flags = list(flags)
        n = len(self.level)
        self.frontier = np.zeros(n, bool) if frontier is None else np.asarray(frontier, bool)
        if n:
            i, j = _touching_pairs(self.lo, self.side)
            self.adjacency = sparse.csr_matrix((np.ones(len(i), np.int8), (i, j)), shape=(n, n))
        else:
            self.adjacency = sparse.csr_matrix((0, 0), dtype=np.int8)

    def __len__(self):
        return len(self.level)

    @property
    def hi(self):
        return self.lo + self.side[:, None]

    @property
    def center(self):
        return self.lo + 0.5 * self.side[:, None]

    def cube(self, i):
        return DyadicCube(int(self.level[i]), tuple(int(v) for v in self.index[i]), self.base, tuple(self.origin))

    @property
    def cubes(self):
        return [self.cube(i) for i in range(len(self))]

    def find(self, cube):
        """Position of ``cube`` in the decomposition."""
        hit = np.nonzero((self.level == cube.level) & np.all(self.index == np.asarray(cube.index), axis=1))[0]
        if len(hit) == 0:
            raise KeyError(f"{cube} is not in the decomposition")
        return int(hit[0])

    def _id(self, q):
        return q if isinstance(q, (int, np.integer)) else self.find(q)

    def neighbors(self, i):
        i = self._id(i)
        return self.adjacency.indices[self.adjacency.indptr[i]:self.adjacency.indptr[i + 1]]

    def long_distance_matrix(self, rows=None):
        rows = np.arange(len(self)) if rows is None else np.asarray(rows)
        dist = _pair_distance(self.lo[rows], self.side[rows], self.lo, self.side)
        return self.side[rows, None] + dist + self.side[None]

    def level_counts(self):
        lv, cnt = np.unique(self.level, return_counts=True)
        return dict(zip(lv.tolist(), cnt.tolist()))

    def to_jsonl(self, path=None):
        lines = []
        for i in range(len(self)):
            lines.append(json.dumps({
                "id": i,
                "level": int(self.level[i]),
                "index": self.index[i].tolist(),
                "side": float(self.side[i]),
                "center": self.center[i].tolist(),
                "neighbors": self.neighbors(i).tolist(),
                "frontier": bool(self.frontier[i]),
            }))
        text = "\n".join(lines) + "\n"
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text

    def summary(self):
        return {
            "cubes": len(self),
            "levels": {str(k): v for k, v in self.level_counts().items()},
            "c_w": self.c_w,
            "max_depth": self.max_depth,
            "truncated": self.truncated,
            "frontier": int(self.frontier.sum()),
            "rho": self.rho,
            "flags": self.flags,
        }

    def __repr__(self):
        return f"WhitneyDecomposition({len(self)} cubes, d={self.d}, max_depth={self.max_depth})"


def default_rho(d, eps_floor=0.05):
    return 3.0 * math.sqrt(d) / eps_floor


def decomposition_from_cubes(cubes, **kw):
    """Wrap hand-built ``DyadicCube`` objects sharing one base and origin."""
    cubes = list(cubes)
    base = cubes[0].base
    origin = cubes[0].origin
    return WhitneyDecomposition([c.level for c in cubes], [c.index for c in cubes], base=base, origin=origin, **kw)


def _root_grid(domain, window):
    if window is None:
        box = domain.bounding_box()
        if box is None:
            raise ValueError("an unbounded domain needs a window")
        lo, hi = box
    else:
        w = np.asarray(window, dtype=float).reshape(-1, 2)
        lo, hi = w[:, 0], w[:, 1]
        box = domain.bounding_box()
        if box is not None:
            lo, hi = np.maximum(lo, box[0]), np.minimum(hi, box[1])
        if np.any(hi <= lo):
            raise ValueError("window is disjoint from the domain")
    ext = float(np.max(hi - lo))
    if box is None:
        # strips: bounded axes have unit extent, so unit roots fit them exactly
        ext = 1.0
    base = 2.0 ** math.ceil(math.log2(ext))
    origin = np.floor(lo / base) * base
    counts = np.ceil((hi - origin) / base - 1e-12).astype(int)
    roots = np.array(np.meshgrid(*[np.arange(c) for c in counts], indexing="ij")).reshape(len(lo), -1).T
    return base, origin, roots


def _build(domain, max_depth, window, accept):
    base, origin, roots = _root_grid(domain, window)
    d = domain.d
    children = np.array(np.meshgrid(*[[0, 1]] * d, indexing="ij")).reshape(d, -1).T
    kept_lv, kept_ix, lost = [], [], []
    stack = [(0, r) for r in roots]
    while stack:
        lv, ix = stack.pop()
        side = base * 2.0 ** (-lv)
        lo = origin + side * ix
        hi = lo + side
        status = domain.cube_status(lo, hi)
        if status == OUTSIDE:
            continue
        if status == INSIDE and domain.cube_boundary_distance(lo, hi) >= accept * side * math.sqrt(d):
            kept_lv.append(lv)
            kept_ix.append(ix)
            continue
        if lv >= max_depth:
            lost.append(lo)
            continue
        for c in children:
            stack.append((lv + 1, 2 * ix + c))
    if not kept_lv:
        raise ValueError("no Whitney cube was admitted; the domain is empty at this depth")
    # deterministic order: coarse to fine, then lexicographic index
    order = sorted(range(len(kept_lv)), key=lambda i: (kept_lv[i], tuple(kept_ix[i])))
    lv = np.array([kept_lv[i] for i in order])
    ix = np.array([kept_ix[i] for i in order])
    frontier = np.zeros(len(lv), bool)
    if lost:
        lost_lo = np.array(lost)
        side_lost = np.full(len(lost_lo), base * 2.0 ** (-max_depth))
        kept = WhitneyDecomposition(lv, ix, base, origin)
        i, _ = _touching_pairs(kept.lo, kept.side, lost_lo, side_lost)
        frontier[np.unique(i)] = True
    return base, origin, lv, ix, frontier, bool(lost)


def whitney_decompose(domain, max_depth=6, window=None, accept=2.0, rho=None):
    """Dyadic Whitney decomposition of ``domain`` down to level ``max_depth``.

    A dyadic cube is admitted when it lies inside the domain with
    ``d(Q, boundary) >= accept * diam(Q)`` and its parent was not admitted,
    which gives ``accept * diam <= d(Q, boundary) <= (2 accept + 2) * diam``.
    Cubes still rejected at ``max_depth`` are discarded, ``truncated`` is
    set, and admitted cubes touching them are marked as frontier.

    When the 5Q-inclusion axiom fails, ``accept`` is raised along
    ``ACCEPT_LADDER`` until it holds (``accept = 6`` guarantees it) and each
    rebuild is recorded in ``flags``.

    Parameters
    ----------
    domain : Domain
    max_depth : int
        Finest admitted level (side ``base * 2**-max_depth``).
    window : array_like of shape (d, 2), optional
        Required for unbounded domains; rounded outward to the root grid.
    accept : float
        Lower Whitney ratio ``d(Q, boundary) / diam(Q)``.
    rho : float, optional
        Shadow radius; defaults to ``3 sqrt(d) / 0.05``.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    ladder = [accept] + [a for a in ACCEPT_LADDER if a > accept]
    flags = []
    for a in ladder:
        base, origin, lv, ix, frontier, truncated = _build(domain, max_depth, window, a)
        dec = WhitneyDecomposition(lv, ix, base, origin, domain=domain, max_depth=max_depth, truncated=truncated,
                                   c_w=a * math.sqrt(domain.d), rho=rho, frontier=frontier, accept=a)
        bad = verify_whitney(dec, axioms=(3,)).axiom3 if a < 6.0 else 0
        if bad == 0:
            break
        flags.append(f"axiom3: {bad} violations at accept={a:g}, cubes shrunk")
    dec.flags.extend(flags)
    return dec


@dataclass
class WhitneyReport:
    """Violation counts per axiom and the worst offenders (cube id pairs)."""

    overlap: int = 0
    axiom2: int = 0
    axiom3: int = 0
    axiom4: int = 0
    checked_axiom4: int = 0
    worst: dict = field(default_factory=dict)

    @property
    def total(self):
        return self.overlap + self.axiom2 + self.axiom3 + self.axiom4

    @property
    def ok(self):
        return self.total == 0

    def to_dict(self):
        return {"overlap": self.overlap, "axiom2": self.axiom2, "axiom3": self.axiom3, "axiom4": self.axiom4,
                "checked_axiom4": self.checked_axiom4, "total": self.total, "worst": self.worst}


def verify_whitney(dec, axioms=(1, 2, 3, 4)):
    """Exhaustive check of the Whitney axioms listed in ``axioms``.

    1. closed cubes have disjoint interiors,
    2. neighbours satisfy ``l(Q) <= 2 l(S)``,
    3. ``Q`` inside ``5S`` implies ``l(S) <= 2 l(Q)``,
    4. ``c_w l(Q) <= d(Q, boundary) <= 4 c_w l(Q)`` for non-frontier cubes
       (skipped when the decomposition carries no domain).
    """
    rep = WhitneyReport()
    lo, side = dec.lo, dec.side
    hi = lo + side[:, None]
    n = len(dec)
    slack = 0.25 * side.min() if n else 0.0
    if 1 in axioms and n:
        # open interiors overlap iff the Chebyshev centre distance is below (s_i + s_j) / 2
        i, j = _level_pairs(lo, side, lo, side, lambda a, b: 0.5 * (a + b) - slack)
        keep = i < j
        i, j = i[keep], j[keep]
        rep.overlap = len(i)
        if rep.overlap:
            rep.worst["overlap"] = [int(i[0]), int(j[0])]
    if 3 in axioms and n:
        # Q inside 5S iff centre distance <= 5 l(S) / 2 - l(Q) / 2; only l(S) > 2 l(Q) can violate
        i, j = _level_pairs(lo, side, lo, side,
                            lambda q, s_: 2.5 * s_ - 0.5 * q + slack * 1e-3 if s_ > 2 * q else None)
        rep.axiom3 = len(i)
        if rep.axiom3:
            rep.worst["axiom3"] = [int(i[0]), int(j[0])]
    if 2 in axioms:
        i, j = dec.adjacency.nonzero()
        bad = side[i] > 2 * side[j]
        rep.axiom2 = int(bad.sum())
        if rep.axiom2:
            k = np.argmax(side[i] / side[j])
            rep.worst["axiom2"] = [int(i[k]), int(j[k])]
    if 4 in axioms and dec.domain is not None:
        ids = np.nonzero(~dec.frontier)[0]
        rep.checked_axiom4 = len(ids)
        dist = np.array([dec.domain.cube_boundary_distance(lo[t], hi[t]) for t in ids])
        bad = (dist < dec.c_w * side[ids] * (1 - 1e-12)) | (dist > 4 * dec.c_w * side[ids] * (1 + 1e-12))
        rep.axiom4 = int(bad.sum())
        if rep.axiom4:
            rep.worst["axiom4"] = int(ids[np.argmax(bad)])
    return rep


@dataclass
class Chain:
    """Neighbour path between two cubes with its admissibility constant."""

    ids: list
    central_index: int
    eps_achieved: float
    length: float
    long_distance: float

    @property
    def central(self):
        return self.ids[self.central_index]

    def __len__(self):
        return len(self.ids)


def _bfs_tree(dec, source):
    _, pred = breadth_first_order(dec.adjacency, source, directed=False, return_predecessors=True)
    return pred


def _path_from_tree(pred, source, target):
    path = [target]
    while path[-1] != source:
        nxt = pred[path[-1]]
        if nxt < 0:
            raise NoChainError(f"cubes {source} and {target} are not connected")
        path.append(nxt)
    return path[::-1]


def _chain_constants(dec, ids):
    ids = np.asarray(ids)
    q, s = ids[0], ids[-1]
    sides = dec.side[ids]
    dq = dec.long_distance_matrix([q])[0, ids]
    ds = dec.long_distance_matrix([s])[0, ids]
    total = float(sides.sum())
    dqs = float(dq[-1])
    b1 = dqs / total
    pre = np.minimum.accumulate(sides / dq)
    suf = np.minimum.accumulate((sides / ds)[::-1])[::-1]
    both = np.minimum(pre, suf)
    # prefer the largest cube among the j0 that achieve the best constant
    best = np.flatnonzero(both >= both.max() * (1 - 1e-12))
    j0 = int(best[np.argmax(sides[best])])
    return Chain([int(v) for v in ids], j0, float(min(b1, both[j0])), total, dqs)


def admissible_chain(dec, Q, S, _tree=None):
    """Shortest neighbour path from ``Q`` to ``S`` with its exact constant.

    ``eps_achieved`` is the largest eps for which ``l([Q,S]) <= D(Q,S)/eps``
    and, for the best central index ``j0``, ``l(Q_j) >= eps D(Q, Q_j)`` for
    ``j <= j0`` and ``l(Q_j) >= eps D(Q_j, S)`` for ``j >= j0``.
    """
    q, s = dec._id(Q), dec._id(S)
    pred = _bfs_tree(dec, q) if _tree is None else _tree
    return _chain_constants(dec, _path_from_tree(pred, q, s))


def _shadow_mask(dec, rows, rho):
    """mask[a, j]: cube j inside the closed ball B(x_Q, rho l(Q)) for Q = rows[a]."""
    rows = np.atleast_1d(rows)
    c = dec.center[rows]
    far = np.maximum(np.abs(dec.lo[None] - c[:, None]), np.abs(dec.hi[None] - c[:, None]))
    reach = np.sqrt(np.sum(far * far, axis=-1))
    return reach <= rho * dec.side[rows, None] * (1 + 1e-12)


def shadow(dec, Q, rho=None):
    """Ids of the cubes contained in ``B(x_Q, rho l(Q))``."""
    rho = dec.rho if rho is None else rho
    return np.flatnonzero(_shadow_mask(dec, dec._id(Q), rho)[0])


def check_rho(dec, rho=None, n_pairs=200, seed=0, max_doublings=8):
    """Smallest ``rho * 2**k`` for which the three shadow properties hold.

    Checked on ``n_pairs`` sampled chains: every cube of ``[Q, Q_S]`` has
    ``Q`` in its shadow, every chain cube lies in the shadow of the central
    cube, and every cube meeting the interior of ``5Q`` lies in ``Sh(Q)``.
    Returns ``(rho, doublings)``.
    """
    rho = dec.rho if rho is None else rho
    rng = np.random.default_rng(seed)
    n = len(dec)
    pairs = rng.integers(0, n, size=(n_pairs, 2))
    chains = [admissible_chain(dec, int(a), int(b)) for a, b in pairs]
    five_lo = dec.lo - 2 * dec.side[:, None]
    five_hi = dec.hi + 2 * dec.side[:, None]
    for k in range(max_doublings + 1):
        r = rho * 2.0 ** k
        ok = True
        for ch in chains:
            head = ch.ids[:ch.central_index + 1]
            if not np.all(_shadow_mask(dec, head, r)[:, ch.ids[0]]):
                ok = False
                break
            if not np.all(_shadow_mask(dec, ch.central, r)[0, ch.ids]):
                ok = False
                break
        if ok:
            for s in range(0, n, _CHUNK):
                rows = np.arange(s, min(s + _CHUNK, n))
                meets = np.all((dec.lo[None] < five_hi[rows, None]) & (five_lo[rows, None] < dec.hi[None]), axis=-1)
                if np.any(meets & ~_shadow_mask(dec, rows, r)):
                    ok = False
                    break
        if ok:
            return r, k
    raise RuntimeError("shadow properties still fail after the allowed doublings")


@dataclass
class LemmaReport:
    """Per-cube sums and ratios of one cube-sum inequality; ``constant`` is their sup."""

    name: str
    constant: float
    argmax: int
    ids: np.ndarray
    sums: np.ndarray
    ratios: np.ndarray
    params: dict = field(default_factory=dict)

    def to_csv(self, path=None):
        lines = ["cube_id,sum,ratio"]
        lines += [f"{int(i)},{s:.17g},{r:.17g}" for i, s, r in zip(self.ids, self.sums, self.ratios)]
        text = "\n".join(lines) + "\n"
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text

    def to_dict(self):
        return {"name": self.name, "constant": self.constant, "argmax": self.argmax, "params": self.params}


def _as_profile(profile):
    return profile if isinstance(profile, KernelProfile) else KernelProfile.from_dict(profile)


def _report(name, ids, sums, ratios, params):
    k = int(np.argmax(ratios))
    return LemmaReport(name, float(ratios[k]), int(ids[k]), np.asarray(ids), np.asarray(sums), np.asarray(ratios), params)


def lemma_sum_all_over(dec, profile, eta):
    """``sup_Q phi(l(Q))^eta * sum_S l(S)^d / (D(Q,S)^d phi(D(Q,S))^eta)``."""
    phi = _as_profile(profile)
    n = len(dec)
    vol = dec.side ** dec.d
    sums = np.empty(n)
    for s in range(0, n, _CHUNK):
        rows = np.arange(s, min(s + _CHUNK, n))
        D = dec.long_distance_matrix(rows)
        sums[rows] = np.sum(vol[None] / (D ** dec.d * phi(D) ** eta), axis=1)
    ratios = sums * phi(dec.side) ** eta
    return _report("sum_all_over", np.arange(n), sums, ratios, {"eta": eta})


def lemma_shadow_sum(dec, profile, eta, rho=None):
    """``sup_P phi(l(P))^eta * sum_{R : P in Sh_rho(R)} phi(l(R))^-eta``."""
    phi = _as_profile(profile)
    rho = dec.rho if rho is None else rho
    n = len(dec)
    inv = phi(dec.side) ** (-eta)
    sums = np.zeros(n)
    for s in range(0, n, _CHUNK):
        rows = np.arange(s, min(s + _CHUNK, n))
        # rows play R; column P collects phi(l(R))^-eta when P in Sh(R)
        sums += inv[rows] @ _shadow_mask(dec, rows, rho)
    ratios = sums * phi(dec.side) ** eta
    return _report("shadow_sum", np.arange(n), sums, ratios, {"eta": eta, "rho": rho})


def lemma_chain_sum(dec, profile, kappa, n_sources=20, per_source=10, seed=0, rho=None):
    """``sup phi(l(R))^-kappa * sum_{P in [S,R]} phi(l(P))^kappa`` over sampled S in Sh(R).

    ``n_sources`` cubes R are drawn uniformly, then ``per_source`` cubes S
    from each shadow; one breadth-first tree per R serves all its chains.
    Reported ids are those of R; with ``n_sources=None`` every cube is a source.
    """
    phi = _as_profile(profile)
    rho = dec.rho if rho is None else rho
    rng = np.random.default_rng(seed)
    n = len(dec)
    sources = np.arange(n) if n_sources is None else np.sort(rng.choice(n, size=min(n_sources, n), replace=False))
    vals = phi(dec.side) ** kappa
    ids, sums, ratios = [], [], []
    for r in sources:
        sh = shadow(dec, int(r), rho)
        if len(sh) == 0:
            continue
        picks = sh if per_source is None or len(sh) <= per_source else rng.choice(sh, size=per_source, replace=False)
        pred = _bfs_tree(dec, int(r))
        for s in picks:
            path = _path_from_tree(pred, int(r), int(s))
            total = float(vals[path].sum())
            ids.append(int(r))
            sums.append(total)
            ratios.append(total / vals[r])
    if not ids:
        raise NoChainError("no cube has a nonempty shadow")
    return _report("chain_sum", ids, np.array(sums), np.array(ratios), {"kappa": kappa, "rho": rho, "seed": seed})
