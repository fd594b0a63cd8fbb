"""Functional forms of multi-set concentration.

A concentration statement ``mu(A_r) >= 1 - beta(a) alpha(r)`` is carried as
a :class:`GeneralProfile`, so every operation here works with any of the
set-level bounds.  ``beta`` is one of

``delta-k``  ``1 - sum(a)`` on Delta_k, ``+inf`` elsewhere;
``product``  ``(1 - sum(a)) / prod(a)``;
``power``    ``(1 - sum(a)) sum(a)^(-sum(a) / min(a))``.

Each operation evaluates both sides of its inequality exactly on the
finite space and returns a :class:`Certified` record.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import (NotAnExtension, NotLipschitz, NotLipschitzOnA, OverlappingIntervals,
                     RadiusTooLarge, ValidationError)
from .polytope import in_delta_k, require_delta_k
from .profile import RADIUS_TOL, main_exponent, psi_big
from .space import SetFamily, as_index_set, make_family, resolve_mode, within

LIPSCHITZ_TOL = 1e-12
BETA_KINDS = ("delta-k", "product", "power")


# ---------------------------------------------------------------------------
# Lipschitz functions

@dataclass(frozen=True)
class LipschitzCheck:
    ok: bool
    constant: float
    pair: tuple | None

    def __bool__(self):
        return self.ok


def lipschitz_constant(space, f) -> tuple[float, tuple | None]:
    """``max_{x != y} |f(x) - f(y)| / d(x, y)`` and a pair attaining it."""
    f = _values(space, f)
    if space.n < 2:
        return 0.0, None
    iu = np.triu_indices(space.n, 1)
    ratios = np.abs(f[:, None] - f[None, :])[iu] / space.dist[iu]
    j = int(np.argmax(ratios))
    return float(ratios[j]), (int(iu[0][j]), int(iu[1][j]))


def check_lipschitz(space, f, bound: float = 1.0) -> LipschitzCheck:
    const, pair = lipschitz_constant(space, f)
    return LipschitzCheck(const <= bound + LIPSCHITZ_TOL, const, pair)


def _values(space, f) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.shape != (space.n,):
        raise ValidationError(f"function has shape {f.shape}, expected ({space.n},)")
    if not np.all(np.isfinite(f)):
        raise ValidationError("function values must be finite")
    return f


def _require_1lip(space, f, error=NotLipschitz):
    check = check_lipschitz(space, f)
    if not check:
        raise error(*check.pair, check.constant)
    return np.asarray(f, dtype=float)


# ---------------------------------------------------------------------------
# profiles

def beta_delta_k(a) -> float:
    return 1.0 - float(np.sum(a)) if in_delta_k(a) else math.inf


def beta_product(a) -> float:
    a = np.asarray(a, dtype=float)
    if np.any(a <= 0):
        return math.inf
    return (1.0 - float(a.sum())) / float(np.prod(a))


def beta_power(a) -> float:
    a = np.asarray(a, dtype=float)
    if np.any(a <= 0):
        return math.inf
    total = float(a.sum())
    return (1.0 - total) * total ** (-total / float(a.min()))


BETAS = {"delta-k": beta_delta_k, "product": beta_product, "power": beta_power}


@dataclass(frozen=True)
class GeneralProfile:
    """``mu(A_r) >= 1 - beta(a) alpha(r)`` for admissible ``r``.

    ``r`` is admissible when ``r <= sep/2``, or ``r < sep/2`` if
    ``open_cap`` is set.  ``mode`` is the enlargement convention the
    statement is about.
    """

    alpha: Callable[[float], float]
    beta: Callable[[Sequence[float]], float]
    kind: str
    mode: str
    name: str = ""
    open_cap: bool = False

    def check_measures(self, a):
        if self.kind == "delta-k":
            require_delta_k(a)

    def check_radius(self, r: float, separation: float):
        limit = separation / 2
        if not r >= 0:
            raise ValidationError(f"radius must be non-negative, got {r!r}")
        if r > limit * (1 + RADIUS_TOL) or (self.open_cap and r >= limit):
            raise RadiusTooLarge(r, limit)

    def deficit(self, a, r: float) -> float:
        """``beta(a) alpha(r)``, with ``0 * inf = 0``."""
        al = self.alpha(r)
        if al == 0:
            return 0.0
        return self.beta(a) * al

    def bound(self, a, r: float) -> float:
        return 1.0 - self.deficit(a, r)


def _profile(alpha, beta, mode, name, open_cap=False):
    if beta not in BETAS:
        raise ValidationError(f"unknown beta kind {beta!r}; expected one of {BETA_KINDS}")
    return GeneralProfile(alpha, BETAS[beta], beta, mode, name, open_cap)


def main_profile(lam: float, beta: str = "delta-k", mode: str = "strict") -> GeneralProfile:
    """``alpha(r) = exp(-c min(r^2 lam, r sqrt(lam)))``."""
    return _profile(lambda r: math.exp(-main_exponent(lam, r)), beta, mode, "main")


def psi_profile(lam: float, beta: str = "delta-k", mode: str = "strict") -> GeneralProfile:
    """``alpha(r) = exp(-Psi(lam r^2))``."""
    return _profile(lambda r: math.exp(-psi_big(lam * r * r)), beta, mode, "psi")


def markov_profile(lam: float, mode: str = "closed", beta: str = "delta-k") -> GeneralProfile:
    """The chain bound ``(1 + lam)^(-n)`` read on the graph metric.

    Closed ``r``-balls are ``floor(r)``-step balls; strict ones are
    ``(ceil(r) - 1)``-step balls.  The power form needs the balls disjoint,
    which closed balls only guarantee below ``sep/2``.
    """
    if lam < 0:
        raise ValidationError(f"eigenvalue must be >= 0, got {lam!r}")

    if mode == "closed":
        def steps(r):
            return math.floor(r + RADIUS_TOL)
    elif mode == "strict":
        def steps(r):
            return max(0, math.ceil(r - RADIUS_TOL) - 1)
    else:
        raise ValidationError(f"unknown mode {mode!r}")
    return _profile(lambda r: (1.0 + lam) ** (-steps(r)), beta, mode, "markov",
                    open_cap=(beta == "power" and mode == "closed"))


# ---------------------------------------------------------------------------
# certified inequalities

@dataclass(frozen=True)
class Certified:
    """An inequality ``lhs <= rhs`` evaluated exactly."""

    statement: str
    lhs: float
    rhs: float
    extra: dict = field(default_factory=dict)

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        return self.slack >= -1e-9

    def to_json(self) -> dict:
        return {"statement": self.statement, "lhs": self.lhs, "rhs": self.rhs,
                "slack": self.slack, "status": "pass" if self.passed else "fail",
                **self.extra}


def _mode(space, profile):
    return resolve_mode(space, profile.mode)


def min_sublevel_bound(space, fs: Sequence, profile: GeneralProfile, r: float) -> Certified:
    """``mu(f* < r) >= 1 - beta(a) alpha(r)`` for ``f* = min f_i``.

    ``a_i = mu(f_i <= 0)``.  In closed mode the event is ``f* <= r``.  The
    set form is evaluated alongside on ``f_i = d(., A_i)``: the two bounds
    must coincide and the set-form mass can only be smaller.
    """
    fs = [_require_1lip(space, _values(space, f)) for f in fs]
    family = make_family(space, [np.flatnonzero(f <= 0) for f in fs])
    a = family.measures
    profile.check_measures(a)
    profile.check_radius(r, family.separation)
    mode = _mode(space, profile)
    fstar = np.min(fs, axis=0)
    exact = float(space.mu[within(fstar, r, mode)].sum())
    bound = profile.bound(a, r)

    # set form on the distance functions
    set_bound = profile.bound(family.measures, r)
    dstar = family.distance_to_union()
    set_exact = float(space.mu[within(dstar, r, mode)].sum())
    agree = set_bound == bound and set_exact <= exact + 1e-12
    return Certified("min-sublevel", bound, exact,
                     {"set_bound": set_bound, "set_exact": set_exact, "equivalent": agree,
                      "measures": [float(x) for x in a], "r": float(r), "mode": mode})


def _interval_distance(t: np.ndarray, lo: float, hi: float) -> np.ndarray:
    return np.maximum(np.maximum(lo - t, t - hi), 0.0)


def quantile_bound(space, f, intervals: Sequence, profile: GeneralProfile, r: float) -> Certified:
    """``mu(f in U I_{i,r}) >= 1 - beta(a) alpha(r)`` with ``a_i = mu(f in I_i)``.

    Intervals are closed ``[lo, hi]`` and must be pairwise disjoint; ``r``
    is capped by half the smallest gap between them on the real line.
    """
    f = _require_1lip(space, _values(space, f))
    ivs = sorted((float(lo), float(hi)) for lo, hi in intervals)
    if not ivs:
        raise ValidationError("need at least one interval")
    for lo, hi in ivs:
        if lo > hi:
            raise ValidationError(f"empty interval [{lo}, {hi}]")
    gaps = [b[0] - a[1] for a, b in zip(ivs, ivs[1:])]
    if any(g <= 0 for g in gaps):
        raise OverlappingIntervals("OverlappingIntervals: intervals must be disjoint "
                                   "and positively separated")
    profile.check_radius(r, min(gaps, default=math.inf))
    mode = _mode(space, profile)
    mu = space.mu
    a = [float(mu[(f >= lo) & (f <= hi)].sum()) for lo, hi in ivs]
    profile.check_measures(a)
    d = np.min([_interval_distance(f, lo, hi) for lo, hi in ivs], axis=0)
    exact = float(mu[within(d, r, mode) | (d == 0)].sum())
    return Certified("quantile", profile.bound(a, r), exact,
                     {"measures": a, "r": float(r), "mode": mode})


def extend(space, A, f_on_A, which: str = "upper") -> np.ndarray:
    """McShane-Whitney extension of a 1-Lipschitz function known on ``A``.

    ``f_on_A`` is a mapping ``point -> value`` or a sequence aligned with
    ``A``; nothing outside ``A`` is ever read.  ``upper`` gives
    ``g+(x) = min_y f(y) + d(x, y)``, ``lower`` gives
    ``g-(x) = max_y f(y) - d(x, y)``.
    """
    idx = as_index_set(space, A)
    if isinstance(f_on_A, Mapping):
        vals = np.array([float(f_on_A[int(y)]) for y in idx])
    else:
        vals = np.asarray(f_on_A, dtype=float)
        if vals.shape != (len(idx),):
            raise ValidationError(f"need {len(idx)} values on A, got shape {vals.shape}")
    sub = space.dist[np.ix_(idx, idx)]
    diff = np.abs(vals[:, None] - vals[None, :])
    excess = diff - sub
    if excess.max() > LIPSCHITZ_TOL:
        i, j = np.unravel_index(int(np.argmax(excess)), excess.shape)
        raise NotLipschitzOnA(int(idx[i]), int(idx[j]), float(diff[i, j] / sub[i, j]))
    d = space.dist[:, idx]
    if which == "upper":
        return (vals[None, :] + d).min(axis=1)
    if which == "lower":
        return (vals[None, :] - d).max(axis=1)
    raise ValidationError(f"which must be 'upper' or 'lower', got {which!r}")


def extension_error_bound(space, family: SetFamily, f, g, profile: GeneralProfile,
                          r: float) -> Certified:
    """``mu(|f - g| >= r) <= beta(a) alpha(r/2)`` for 1-Lipschitz ``f``, ``g``
    agreeing on ``A``, ``0 < r <= min d(A_i, A_j)``.

    ``|f - g|`` is 2-Lipschitz and vanishes on ``A``, so the event lies in
    ``{d(., A) >= r/2}``.  A closed-mode profile bounds ``{d(., A) > s}``,
    so it is read at the largest distance value ``s`` below ``r/2``.
    """
    f = _require_1lip(space, _values(space, f))
    g = _require_1lip(space, _values(space, g))
    union = family.union
    gap = np.abs(f[union] - g[union])
    if gap.max() > LIPSCHITZ_TOL:
        j = int(np.argmax(gap))
        raise NotAnExtension(int(union[j]), float(gap[j]))
    if not r > 0:
        raise ValidationError(f"radius must be positive, got {r!r}")
    a = family.measures
    profile.check_measures(a)
    profile.check_radius(r / 2, family.separation)
    mode = _mode(space, profile)
    h = np.abs(f - g)
    lhs = float(space.mu[h >= r - LIPSCHITZ_TOL].sum())
    s = r / 2
    if mode == "closed":
        dist = family.distance_to_union()
        below = dist[dist < s - LIPSCHITZ_TOL]
        s = float(below.max()) if below.size else 0.0
    rhs = profile.deficit(a, s)
    return Certified("extension-error", lhs, rhs,
                     {"measures": [float(x) for x in a], "r": float(r), "alpha_at": s,
                      "mode": mode})


def sandwich(space, A, f_on_A, g) -> bool:
    """Whether ``g- <= g <= g+`` holds pointwise."""
    lo = extend(space, A, f_on_A, "lower")
    hi = extend(space, A, f_on_A, "upper")
    g = _values(space, g)
    return bool(np.all(lo <= g + LIPSCHITZ_TOL) and np.all(g <= hi + LIPSCHITZ_TOL))

