"""Finite metric measure spaces, reversible Markov chains and set families.

Two ambient types share one duck-typed surface (``n``, ``dist``, ``mu``,
``default_mode``) so that enlargements, set distances and every bound
evaluator accept either.  A :class:`MetricMeasureSpace` carries an arbitrary
distance matrix and enlarges strictly (``d(x, A) < r``); a
:class:`ReversibleChain` carries the shortest-path metric of its support graph
and enlarges in closed integer steps (``d(x, A) <= r``).  Strict enlargement
by one graph step would return ``A`` itself, which is why graphs default to
the closed convention.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import (AsymmetricDistance, BadDistance, BadMeasure, DimensionMismatch,
                     DisconnectedGraph, EmptySet, NotReversible, NotStochastic,
                     OverlappingSets, TriangleViolation, ValidationError, ZeroSeparation)

VALIDATION_TOL = 1e-12
BALANCE_TOL = 1e-10
MODES = ("strict", "closed")
WALKS = ("simple-walk", "metropolis-uniform")


def _frozen(a, dtype=float):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class MetricMeasureSpace:
    """A finite metric space with a probability vector.

    Build through :func:`validate_space`; the constructor does not check
    anything.
    """

    dist: np.ndarray
    mu: np.ndarray
    residuals: dict = field(default_factory=dict)
    default_mode = "strict"

    @property
    def n(self) -> int:
        return len(self.mu)


@dataclass(frozen=True, eq=False)
class ReversibleChain:
    """Row-stochastic kernel ``p`` reversible with respect to ``mu``.

    ``graph_dist`` is the shortest-path metric of the support graph
    (edge iff ``p[x, y] > 0``, ``x != y``); ``dist`` is the same matrix as
    floats so chains can stand in wherever a metric space is expected.
    """

    p: np.ndarray
    mu: np.ndarray
    graph_dist: np.ndarray
    residuals: dict = field(default_factory=dict)
    default_mode = "closed"

    @property
    def n(self) -> int:
        return len(self.mu)

    @property
    def dist(self) -> np.ndarray:
        d = self.__dict__.get("_dist")
        if d is None:
            d = _frozen(self.graph_dist, float)
            object.__setattr__(self, "_dist", d)
        return d


Space = Union[MetricMeasureSpace, ReversibleChain]


def _check_mu(mu, n):
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (n,):
        raise DimensionMismatch(f"mu has shape {mu.shape}, expected ({n},)")
    if not np.all(np.isfinite(mu)):
        raise BadMeasure("non-finite entry", int(np.flatnonzero(~np.isfinite(mu))[0]))
    if np.any(mu < 0):
        i = int(np.flatnonzero(mu < 0)[0])
        raise BadMeasure(f"mu[{i}] = {mu[i]!r} is negative", i)
    total = float(mu.sum())
    if abs(total - 1.0) > VALIDATION_TOL:
        raise BadMeasure(f"sums to {total!r}, not 1")
    return mu, abs(total - 1.0)


def validate_space(dist, mu) -> MetricMeasureSpace:
    """Check the metric and probability axioms and freeze the arrays.

    Raises the first violation found, scanning pairs ``i < j`` in
    lexicographic order and, for the triangle inequality, intermediate
    points ``k`` in increasing order.
    """
    d = np.asarray(dist, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise DimensionMismatch(f"dist must be square, got shape {d.shape}")
    n = d.shape[0]
    if n == 0:
        raise DimensionMismatch("empty space")
    mu, mass_residual = _check_mu(mu, n)
    if not np.all(np.isfinite(d)):
        raise BadDistance("BadDistance: non-finite distance")
    if np.any(np.diag(d) != 0):
        i = int(np.flatnonzero(np.diag(d) != 0)[0])
        raise BadDistance(f"BadDistance: d[{i},{i}] = {d[i, i]!r} is not zero")
    asym = np.abs(d - d.T)
    if asym.max() > VALIDATION_TOL:
        i, j = np.argwhere(np.triu(asym > VALIDATION_TOL))[0]
        raise AsymmetricDistance(int(i), int(j), float(asym[i, j]))
    off = ~np.eye(n, dtype=bool)
    if np.any(d[off] <= 0):
        i, j = np.argwhere(np.triu(off & (d <= 0)))[0]
        raise BadDistance(f"BadDistance: d[{i},{j}] = {d[i, j]!r} must be positive")

    tol = VALIDATION_TOL * max(1.0, float(d.max()))
    worst_excess = 0.0
    first = None
    for k in range(n):
        excess = d - (d[:, k, None] + d[None, k, :])
        worst_excess = max(worst_excess, float(excess.max()))
        hits = np.argwhere(np.triu(excess > tol, 1))  # row-major: hits[0] is the smallest (i, j)
        if hits.size:
            cand = (int(hits[0, 0]), int(hits[0, 1]), k)
            first = cand if first is None else min(first, cand)
    if first is not None:
        i, j, k = first
        raise TriangleViolation(i, j, k, float(d[i, j] - d[i, k] - d[k, j]))
    residuals = {"mass": mass_residual, "asymmetry": float(asym.max()),
                 "triangle": worst_excess}
    return MetricMeasureSpace(_frozen(d), _frozen(mu), residuals)


def bfs_distances(adjacency) -> np.ndarray:
    """All-pairs unit-weight shortest paths by one BFS per source."""
    adj = np.asarray(adjacency) != 0
    n = adj.shape[0]
    nbrs = [np.flatnonzero(adj[x]) for x in range(n)]
    out = np.full((n, n), -1, dtype=np.int64)
    for s in range(n):
        row = out[s]
        row[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in nbrs[x]:
                if row[y] < 0:
                    row[y] = row[x] + 1
                    queue.append(y)
        if s == 0 and np.any(row < 0):
            raise DisconnectedGraph(int(np.flatnonzero(row < 0)[0]))
    return out


def infer_reversible_measure(p) -> np.ndarray:
    """Solve detailed balance along a BFS spanning tree of the support graph.

    ``mu(y) = mu(x) p(x, y) / p(y, x)`` along tree edges, then normalise.
    Consistency on non-tree edges is left to :func:`validate_chain`.
    """
    p = np.asarray(p, dtype=float)
    n = p.shape[0]
    w = np.full(n, np.nan)
    w[0] = 1.0
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for y in np.flatnonzero(p[x] > 0):
            if y != x and np.isnan(w[y]):
                if p[y, x] <= 0:
                    raise NotReversible(int(x), int(y), float(p[x, y]))
                w[y] = w[x] * p[x, y] / p[y, x]
                queue.append(y)
    if np.any(np.isnan(w)):
        raise DisconnectedGraph(int(np.flatnonzero(np.isnan(w))[0]))
    return w / w.sum()


def validate_chain(p, mu=None) -> ReversibleChain:
    """Validate a reversible kernel; ``mu`` is inferred when omitted."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise DimensionMismatch(f"p must be square, got shape {p.shape}")
    n = p.shape[0]
    if n == 0:
        raise DimensionMismatch("empty chain")
    if not np.all(np.isfinite(p)) or np.any(p < 0):
        i, j = np.argwhere(~(np.isfinite(p) & (p >= 0)))[0]
        raise NotStochastic(int(i), float("nan"))
    rows = np.abs(p.sum(axis=1) - 1.0)
    if rows.max() > VALIDATION_TOL:
        i = int(np.argmax(rows > VALIDATION_TOL))
        raise NotStochastic(i, float(rows[i]))
    support = (p > 0) & ~np.eye(n, dtype=bool)
    graph_dist = bfs_distances(support)
    if mu is None:
        mu = infer_reversible_measure(p)
    mu, mass_residual = _check_mu(mu, n)
    if np.any(mu <= 0):
        i = int(np.flatnonzero(mu <= 0)[0])
        raise BadMeasure(f"mu[{i}] = 0; reversible measures of irreducible chains are positive", i)
    flow = p * mu[:, None]
    balance = np.abs(flow - flow.T)
    if balance.max() > BALANCE_TOL:
        i, j = np.argwhere(np.triu(balance > BALANCE_TOL))[0]
        raise NotReversible(int(i), int(j), float(balance[i, j]))
    residuals = {"mass": mass_residual, "rows": float(rows.max()),
                 "detailed_balance": float(balance.max())}
    return ReversibleChain(_frozen(p), _frozen(mu), _frozen(graph_dist, np.int64), residuals)


def chain_from_graph(adjacency, kind: str = "simple-walk") -> ReversibleChain:
    """Random walk on an undirected connected graph.

    ``simple-walk`` moves to a uniform neighbour and is reversible for the
    degree measure.  ``metropolis-uniform`` moves along ``x -> y`` with
    probability ``min(1/deg x, 1/deg y)`` and stays put otherwise, which makes
    the uniform measure reversible.
    """
    adj = np.asarray(adjacency)
    if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
        raise DimensionMismatch(f"adjacency must be square, got shape {adj.shape}")
    if not np.isin(adj, (0, 1)).all():
        raise ValidationError("adjacency entries must be 0 or 1")
    if np.any(adj != adj.T):
        i, j = np.argwhere(adj != adj.T)[0]
        raise AsymmetricDistance(int(i), int(j), 1.0)
    if np.any(np.diag(adj) != 0):
        raise ValidationError("adjacency must have a zero diagonal")
    adj = adj.astype(float)
    n = adj.shape[0]
    bfs_distances(adj)  # connectivity
    deg = adj.sum(axis=1)
    if kind == "simple-walk":
        p = adj / deg[:, None]
        mu = deg / deg.sum()
    elif kind == "metropolis-uniform":
        p = adj * np.minimum(1.0 / deg[:, None], 1.0 / deg[None, :])
        p[np.diag_indices(n)] = 1.0 - p.sum(axis=1)
        mu = np.full(n, 1.0 / n)
    else:
        raise ValidationError(f"unknown walk {kind!r}; expected one of {WALKS}")
    return validate_chain(p, mu)


# ---------------------------------------------------------------------------
# index sets

def as_index_set(space: Space, A) -> np.ndarray:
    """Sorted unique int array, bounds-checked; raises EmptySet."""
    idx = np.unique(np.asarray(list(A) if not isinstance(A, np.ndarray) else A, dtype=np.int64))
    if idx.size == 0:
        raise EmptySet("EmptySet: index set is empty")
    if idx[0] < 0 or idx[-1] >= space.n:
        raise DimensionMismatch(f"index out of range for a space with {space.n} points")
    return idx


def resolve_mode(space: Space, mode: str | None) -> str:
    mode = space.default_mode if mode is None else mode
    if mode not in MODES:
        raise ValidationError(f"unknown enlargement mode {mode!r}")
    return mode


def distance_to_set(space: Space, A) -> np.ndarray:
    """``d(x, A)`` for every point ``x``."""
    return space.dist[:, as_index_set(space, A)].min(axis=1)


def measure(space: Space, A) -> float:
    return float(space.mu[np.asarray(A, dtype=np.int64)].sum())


def complement(space: Space, A) -> np.ndarray:
    mask = np.ones(space.n, dtype=bool)
    mask[np.asarray(A, dtype=np.int64)] = False
    return np.flatnonzero(mask)


def within(d_to_set: np.ndarray, r: float, mode: str) -> np.ndarray:
    """Boolean mask of the enlargement given precomputed ``d(x, A)``."""
    return d_to_set < r if mode == "strict" else d_to_set <= r


def enlarge(space: Space, A, r: float, mode: str | None = None) -> np.ndarray:
    """The ``r``-enlargement of ``A`` as a sorted index array.

    ``strict`` gives ``{x : d(x, A) < r}`` (so ``r = 0`` returns ``A``);
    ``closed`` gives ``{x : d(x, A) <= r}``.
    """
    if r < 0:
        raise ValidationError(f"radius must be non-negative, got {r!r}")
    mode = resolve_mode(space, mode)
    idx = as_index_set(space, A)
    mask = within(space.dist[:, idx].min(axis=1), r, mode)
    mask[idx] = True
    return np.flatnonzero(mask)


def set_distance(space: Space, A, B) -> float:
    a = as_index_set(space, A)
    b = as_index_set(space, B)
    return float(space.dist[np.ix_(a, b)].min())


# ---------------------------------------------------------------------------
# set families

@dataclass(frozen=True, eq=False)
class SetFamily:
    """``k`` pairwise-disjoint, positively separated index sets on a space.

    ``separation`` is ``min_{i != j} d(A_i, A_j)``; it is ``inf`` for a single
    set, which makes every radius admissible for ``k = 1``.
    """

    space: Space
    sets: tuple
    measures: np.ndarray
    separation: float
    pair_distances: np.ndarray

    @property
    def k(self) -> int:
        return len(self.sets)

    @property
    def union(self) -> np.ndarray:
        return np.unique(np.concatenate(self.sets))

    @property
    def mass(self) -> float:
        """``mu(A)`` for the union ``A``; the sets are disjoint."""
        return float(self.measures.sum())

    def distance_to_union(self) -> np.ndarray:
        return self.space.dist[:, self.union].min(axis=1)

    def to_lists(self) -> list[list[int]]:
        return [[int(x) for x in s] for s in self.sets]


def make_family(space: Space, sets: Sequence) -> SetFamily:
    if len(sets) == 0:
        raise EmptySet("EmptySet: a family needs at least one set")
    idx = tuple(_frozen(as_index_set(space, s), np.int64) for s in sets)
    k = len(idx)
    pair = np.full((k, k), np.inf)
    for i in range(k):
        for j in range(i + 1, k):
            if np.intersect1d(idx[i], idx[j]).size:
                raise OverlappingSets(i, j)
            pair[i, j] = pair[j, i] = space.dist[np.ix_(idx[i], idx[j])].min()
    sep = float(pair.min()) if k > 1 else float("inf")
    if sep <= 0:
        raise ZeroSeparation("ZeroSeparation: sets must be positively separated")
    measures = _frozen([measure(space, s) for s in idx])
    return SetFamily(space, idx, measures, sep, _frozen(pair))
