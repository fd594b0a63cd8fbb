"""The measure polytope Delta_k and its stability under merging.

``a in [0, 1]^k`` belongs to Delta_k when ``sum(a) <= 1`` and
``a_i + sum(a) >= 1`` for every ``i``.  Delta_1 is the interval [1/2, 1].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BadPartition, NotInDeltaK, OutOfRangeEntry

DELTA_TOL = 1e-12


@dataclass(frozen=True)
class Membership:
    """Outcome of a Delta_k test.

    ``margin`` is the smallest signed slack over all constraints (negative
    means violated).  ``violated`` is ``None`` on success, ``0`` for the sum
    constraint and ``i`` (1-based) for ``a_i + sum(a) >= 1``.
    """

    inside: bool
    margin: float
    violated: int | None

    def __bool__(self):
        return self.inside


def _as_vector(a) -> np.ndarray:
    a = np.atleast_1d(np.asarray(a, dtype=float))
    if a.ndim != 1 or a.size == 0:
        raise OutOfRangeEntry(0, a)
    for i, x in enumerate(a):
        if not (0.0 <= x <= 1.0):
            raise OutOfRangeEntry(i, float(x))
    return a


def in_delta_k(a, tol: float = DELTA_TOL) -> Membership:
    a = _as_vector(a)
    total = a.sum()
    slacks = np.concatenate([[1.0 - total], a + total - 1.0])
    j = int(np.argmin(slacks))
    margin = float(slacks[j])
    if margin >= -tol:
        return Membership(True, margin, None)
    return Membership(False, margin, j)


def require_delta_k(a) -> Membership:
    m = in_delta_k(a)
    if not m:
        raise NotInDeltaK(m.violated, m.margin)
    return m


def merge(a, partition: Sequence[Sequence[int]], check: bool = True) -> np.ndarray:
    """Block sums ``b_i = sum_{j in I_i} a_j`` over a partition of ``{1..k}``.

    Blocks use 1-based indices.  When ``check`` is set and ``a`` is in
    Delta_k, membership of the merged vector is asserted.
    """
    a = _as_vector(a)
    k = a.size
    seen = sorted(j for block in partition for j in block)
    if any(len(block) == 0 for block in partition) or seen != list(range(1, k + 1)):
        raise BadPartition(f"BadPartition: blocks must partition 1..{k}, got {partition!r}")
    b = np.array([sum(a[j - 1] for j in block) for block in partition])
    if check and in_delta_k(a):
        assert in_delta_k(np.minimum(b, 1.0)), f"merge left Delta: {a} -> {b}"
    return b
