"""Closed-form spectra of the round sphere and the Gaussian space.

Only multiplicities matter downstream, so dimensions are exact Python
integers and eigenvalues are converted to float at the boundary.  The
eigenvalue scaling is a parameter:

``geometric`` (default)
    sphere of radius ``sqrt((n - 1) / rho)``: ``rho l (l + n - 1) / (n - 1)``;
    Gaussian with covariance ``rho^-1 Id``: ``rho q``.
``printed``
    sphere: ``rho^-2 (n - 1)^2 l (l + n - 1)``; Gaussian: ``rho^2 q``.
``printed-lambda``
    Gaussian only: ``rho^-2 q``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import BadParameters

SCALINGS = ("geometric", "printed", "printed-lambda")


def _comb(n: int, r: int) -> int:
    return math.comb(n, r) if 0 <= r <= n else 0


def sphere_dim(l: int, n: int) -> int:
    """Dimension of degree-``l`` spherical harmonics on the ``n``-sphere."""
    if l == 0:
        return 1
    num = (2 * l + n - 1) * _comb(l + n - 2, l - 1)
    assert num % l == 0
    return num // l


def sphere_cumulative(l: int, n: int) -> int:
    return _comb(n + l, l) + _comb(n + l - 1, l - 1)


def gaussian_dim(q: int, n: int) -> int:
    return _comb(n + q - 1, q)


def gaussian_cumulative(q: int, n: int) -> int:
    return _comb(n + q, q)


@dataclass(frozen=True)
class ModelEigenvalue:
    kind: str
    level: int
    eigenvalue: float
    multiplicity: int
    cumulative: int
    bound: str = "exact"

    def to_json(self) -> dict:
        return {"kind": self.kind, "level": self.level, "eigenvalue": self.eigenvalue,
                "multiplicity": self.multiplicity, "cumulative": self.cumulative,
                "bound": self.bound}


def _check(n, rho, k, n_min):
    if not isinstance(n, int) or n < n_min:
        raise BadParameters(f"BadParameters: n must be an integer >= {n_min}, got {n!r}")
    if not rho > 0:
        raise BadParameters(f"BadParameters: rho must be positive, got {rho!r}")
    if not isinstance(k, int) or k < 0:
        raise BadParameters(f"BadParameters: k must be a non-negative integer, got {k!r}")


@lru_cache(maxsize=None)
def _level(cumulative, n: int, k: int) -> int:
    # smallest level l with D_l >= k + 1; D_{-1} = 0
    l = 0
    while cumulative(l, n) < k + 1:
        l += 1
    return l


def sphere_eigenvalue(l: int, n: int, rho: float, scaling: str = "geometric") -> float:
    if scaling == "geometric":
        return rho * l * (l + n - 1) / (n - 1)
    if scaling == "printed":
        return (n - 1) ** 2 * l * (l + n - 1) / rho ** 2
    raise BadParameters(f"BadParameters: unknown sphere scaling {scaling!r}")


def gaussian_eigenvalue(q: int, rho: float, scaling: str = "geometric") -> float:
    if scaling == "geometric":
        return rho * q
    if scaling == "printed":
        return rho ** 2 * q
    if scaling == "printed-lambda":
        return q / rho ** 2
    raise BadParameters(f"BadParameters: unknown Gaussian scaling {scaling!r}")


def sphere_lookup(n: int, rho: float, k: int, scaling: str = "geometric") -> ModelEigenvalue:
    """``lambda^(k)`` (0-indexed, with multiplicity) on the ``n``-sphere."""
    _check(n, rho, k, 2)
    l = _level(sphere_cumulative, n, k)
    return ModelEigenvalue("sphere", l, float(sphere_eigenvalue(l, n, rho, scaling)),
                           sphere_dim(l, n), sphere_cumulative(l, n))


def gaussian_lookup(n: int, rho: float, k: int, scaling: str = "geometric") -> ModelEigenvalue:
    """``lambda^(k)`` for the ``n``-dimensional Gaussian of covariance ``rho^-1 Id``."""
    _check(n, rho, k, 1)
    q = _level(gaussian_cumulative, n, k)
    return ModelEigenvalue("gaussian", q, float(gaussian_eigenvalue(q, rho, scaling)),
                           gaussian_dim(q, n), gaussian_cumulative(q, n))


def logconcave_lower(n: int, rho: float, k: int, scaling: str = "geometric") -> ModelEigenvalue:
    """Lower bound on ``lambda^(k)`` for a measure ``e^-V`` with ``Hess V >= rho``.

    The Gaussian with the same curvature is extremal, so its eigenvalue is
    returned, labelled as a lower bound.
    """
    g = gaussian_lookup(n, rho, k, scaling)
    return ModelEigenvalue("logconcave", g.level, g.eigenvalue, g.multiplicity,
                           g.cumulative, "lower")
