"""Scalar profile functions, multi-set concentration bounds and certificates.

Every bound here has the shape ``mu(A_r) >= 1 - (1 - mu(A)) * alpha(r)``
for a family ``A_1, ..., A_k`` whose measure vector lies in Delta_k:

* :func:`bound_main` -- ``alpha(r) = exp(-c min(r^2 lam, r sqrt(lam)))`` with
  ``c = log(5)/4``, or the sharper ``exp(-Psi(lam r^2))``;
* :func:`bound_markov` -- ``alpha(n) = (1 + lam)^(-n)`` on a reversible chain
  with closed graph enlargements;
* :func:`bound_iterated` / :func:`bound_iterated_markov` -- staged versions that
  keep going after sets coalesce, switching to lower eigenvalues.

:func:`certify_step` checks the chain version step by step against exactly
computed enlargement measures.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import (BadExponent, CertificationFailure, NegativeInput, RadiusTooLarge,
                     ValidationError)
from .polytope import require_delta_k
from .space import ReversibleChain, SetFamily, resolve_mode, within

C = math.log(5) / 4
CERT_TOL = 1e-9
RADIUS_TOL = 1e-12


# ---------------------------------------------------------------------------
# scalar functions

@lru_cache(maxsize=None)
def ratio_maximizer() -> float:
    """The unique maximiser ``a`` of ``u -> log(1 + u^2) / u`` on ``(0, inf)``.

    Stationarity reads ``2u^2 / (1 + u^2) = log(1 + u^2)``; the left side
    minus the right is positive on ``(0, a)`` and negative after, so plain
    bisection on ``[1, 3]`` converges.
    """
    def g(u):
        return 2 * u * u / (1 + u * u) - math.log1p(u * u)

    lo, hi = 1.0, 3.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 4 * math.ulp(mid):
            break
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class ProfileConstants:
    c: float
    a: float

    @property
    def asymptote(self) -> float:
        """``log(1 + a^2) / a``, the limit of ``Psi(x) / sqrt(x)``."""
        return math.log1p(self.a ** 2) / self.a


def constants() -> ProfileConstants:
    return ProfileConstants(C, ratio_maximizer())


def _staircase(x: float, m: int) -> float:
    return m * math.log1p(x / (m * m))


def psi_big(x: float) -> float:
    """``Psi(x) = sup_{t >= 1} floor(t) log(1 + x / t^2)``.

    On ``[m, m + 1)`` the supremum sits at ``t = m``, and
    ``m log(1 + x/m^2) = sqrt(x) h(sqrt(x)/m)`` with ``h(u) = log(1+u^2)/u``
    unimodal, so the best integer is ``floor(sqrt(x)/a)`` or one above it.
    """
    if x < 0 or math.isnan(x):
        raise NegativeInput(f"NegativeInput: Psi needs x >= 0, got {x!r}")
    if x == 0:
        return 0.0
    if math.isinf(x):
        return math.inf
    m = math.floor(math.sqrt(x) / ratio_maximizer())
    best = _staircase(x, m + 1)
    if m >= 1:
        best = max(best, _staircase(x, m))
    return best


def phi_small(x: float) -> float:
    """``min(x, x^2)``."""
    if x < 0:
        raise NegativeInput(f"NegativeInput: phi needs x >= 0, got {x!r}")
    return min(x, x * x)


def psi_small(x: float) -> float:
    """``max(x, x^2)``, the inverse-side companion of :func:`phi_small`."""
    if x < 0:
        raise NegativeInput(f"NegativeInput: psi needs x >= 0, got {x!r}")
    return max(x, x * x)


def chi_p(x: float, p: float) -> float:
    """Smooth cutoff ``(1 - x^p)^p`` on ``[0, 1]``, zero beyond."""
    if not p > 1:
        raise BadExponent(f"BadExponent: chi_p needs p > 1, got {p!r}")
    if x < 0:
        raise NegativeInput(f"NegativeInput: chi_p needs x >= 0, got {x!r}")
    if x > 1:
        return 0.0
    return (1.0 - x ** p) ** p


def main_exponent(lam: float, r: float) -> float:
    """``c min(r^2 lam, r sqrt(lam))``."""
    return C * phi_small(r * math.sqrt(lam))


# ---------------------------------------------------------------------------
# preconditions

def _check_lambda(lam):
    if not lam >= 0:
        raise NegativeInput(f"NegativeInput: eigenvalue must be >= 0, got {lam!r}")
    return float(lam)


def _check_radius(r, limit, positive=True):
    if positive and not r > 0:
        raise ValidationError(f"radius must be positive, got {r!r}")
    if r > limit * (1 + RADIUS_TOL):
        raise RadiusTooLarge(r, limit)


def markov_window(family: SetFamily) -> int:
    """Largest admissible step count for the chain theorem.

    ``floor(sep / 2)`` for ``k >= 2``.  A single set has no separation
    constraint; past its eccentricity ``B_n`` is everything, so the window
    is cut there (at least 1).
    """
    if family.k == 1:
        return max(1, int(family.distance_to_union().max()))
    return int(math.floor(family.separation / 2 + RADIUS_TOL))


# ---------------------------------------------------------------------------
# bound evaluators

def bound_main(family: SetFamily, lam: float, r: float) -> float:
    """``1 - (1 - mu(A)) exp(-c min(r^2 lam, r sqrt(lam)))``."""
    lam = _check_lambda(lam)
    require_delta_k(family.measures)
    _check_radius(r, family.separation / 2)
    return 1.0 - (1.0 - family.mass) * math.exp(-main_exponent(lam, r))


def bound_main_psi(family: SetFamily, lam: float, r: float) -> float:
    """The sharper form ``1 - (1 - mu(A)) exp(-Psi(lam r^2))``."""
    lam = _check_lambda(lam)
    require_delta_k(family.measures)
    _check_radius(r, family.separation / 2)
    return 1.0 - (1.0 - family.mass) * math.exp(-psi_big(lam * r * r))


def _require_chain(family):
    if not isinstance(family.space, ReversibleChain):
        raise ValidationError("this bound needs a family on a ReversibleChain")
    return family.space


def bound_markov(family: SetFamily, lam: float, n: int) -> float:
    """``1 - (1 - mu(B)) (1 + lam)^(-n)`` for ``1 <= n <= sep/2``."""
    _require_chain(family)
    lam = _check_lambda(lam)
    require_delta_k(family.measures)
    if n != int(n) or n < 1:
        raise ValidationError(f"step count must be a positive integer, got {n!r}")
    if family.k > 1:
        _check_radius(n, family.separation / 2)
    return 1.0 - (1.0 - family.mass) * (1.0 + lam) ** (-int(n))


@dataclass(frozen=True)
class AlternativeBound:
    """The two Delta_k-free bounds, clamped to ``[0, 1]``.

    ``raw_*`` keep the unclamped values; ``vacuous_*`` flag a negative raw
    value, in which case the bound says nothing.
    """

    product: float
    power: float
    raw_product: float
    raw_power: float
    vacuous_product: bool
    vacuous_power: bool


def alternative_prefactors(measures) -> tuple[float, float]:
    """``1 / prod(a_i)`` and ``mu(A)^(-mu(A) / min a_i)``."""
    a = np.asarray(measures, dtype=float)
    total = float(a.sum())
    if np.any(a <= 0):
        return math.inf, math.inf
    log_product = -float(np.log(a).sum())
    log_power = -total / float(a.min()) * math.log(total)
    return _safe_exp(log_product), _safe_exp(log_power)


def _safe_exp(x: float) -> float:
    return math.exp(x) if x < 700 else math.inf


def _alternative(mass, prefactors, decay):
    raws = [1.0 - (1.0 - mass) * f * decay for f in prefactors]
    return AlternativeBound(min(1.0, max(0.0, raws[0])), min(1.0, max(0.0, raws[1])),
                            raws[0], raws[1], raws[0] < 0, raws[1] < 0)


def bound_alternative(family: SetFamily, lam: float, r: float) -> AlternativeBound:
    """Product and power-prefactor bounds; no Delta_k hypothesis."""
    lam = _check_lambda(lam)
    _check_radius(r, family.separation / 2)
    return _alternative(family.mass, alternative_prefactors(family.measures),
                        math.exp(-main_exponent(lam, r)))


def bound_alternative_markov(family: SetFamily, lam: float, n: int) -> AlternativeBound:
    """Chain analogue with decay ``(1 + lam)^(-n)``.

    The product form holds for ``n <= sep/2``.  The power form needs the
    ``n``-enlargements to stay disjoint, which closed graph balls only
    guarantee for ``2n < sep``; past that it is flagged vacuous.
    """
    _require_chain(family)
    lam = _check_lambda(lam)
    if family.k > 1:
        _check_radius(n, family.separation / 2)
    out = _alternative(family.mass, alternative_prefactors(family.measures),
                       (1.0 + lam) ** (-int(n)))
    if family.k > 1 and 2 * n >= family.separation:
        out = AlternativeBound(out.product, 0.0, out.raw_product, -math.inf,
                               out.vacuous_product, True)
    return out


# ---------------------------------------------------------------------------
# coalescence

class _UnionFind:
    def __init__(self, k):
        self.parent = list(range(k))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self.parent[max(rx, ry)] = min(rx, ry)
        return True


@dataclass(frozen=True)
class CoalescenceGraph:
    """Component count ``N(r)`` of the coalescence graph of a family.

    ``events[(i, j)]`` is the radius at which the edge ``{i, j}`` appears.
    Under ``right_closed`` the edge is present for ``r >= event``, otherwise
    for ``r > event``.  ``thresholds[i-1] = r_i = sup{r : N(r) >= k - i + 1}``
    with ``r_k = inf``.
    """

    k: int
    events: dict
    merge_radii: tuple
    thresholds: tuple
    criterion: str
    mode: str
    right_closed: bool

    @property
    def radii(self) -> tuple:
        return tuple(sorted(set(self.events.values())))

    def components(self, r: float) -> int:
        uf = _UnionFind(self.k)
        n = self.k
        for (i, j), e in self.events.items():
            if (r >= e if self.right_closed else r > e) and uf.union(i, j):
                n -= 1
        return n

    def blocks(self, r: float) -> list[list[int]]:
        uf = _UnionFind(self.k)
        for (i, j), e in self.events.items():
            if r >= e if self.right_closed else r > e:
                uf.union(i, j)
        groups: dict[int, list[int]] = {}
        for i in range(self.k):
            groups.setdefault(uf.find(i), []).append(i)
        return list(groups.values())


def _edge_events(family: SetFamily, mode: str, criterion: str):
    k = family.k
    if criterion == "length":
        # strict: touching needs d < 2r; closed: d <= 2r
        return {(i, j): float(family.pair_distances[i, j]) / 2
                for i in range(k) for j in range(i + 1, k)}, mode == "closed"
    if criterion == "intersect":
        d = [family.space.dist[:, s].min(axis=1) for s in family.sets]
        # A_{i,r} and A_{j,r} share x iff max(d(x,A_i), d(x,A_j)) < r (strict) / <= r (closed)
        return {(i, j): float(np.maximum(d[i], d[j]).min())
                for i in range(k) for j in range(i + 1, k)}, mode == "closed"
    raise ValidationError(f"unknown coalescence criterion {criterion!r}")


def coalescence(family: SetFamily, mode: str | None = None,
                criterion: str = "length") -> CoalescenceGraph:
    """Coalescence graph of a family, with exact event radii.

    ``criterion="length"`` joins ``i, j`` once ``d(A_i, A_j) < 2r`` (strict) or
    ``<= 2r`` (closed): in a
    length space (and on graphs, where ``d(A_{i,m}, A_{j,m}) =
    max(d(A_i, A_j) - 2m, 0)``) this is exactly when the enlargements touch,
    and it is the schedule the staged bounds rely on.  ``"intersect"`` takes
    the definition literally on the finite point set: the enlargements must
    share a point.
    """
    mode = resolve_mode(family.space, mode)
    events, right_closed = _edge_events(family, mode, criterion)
    uf = _UnionFind(family.k)
    merges = []
    for (i, j), e in sorted(events.items(), key=lambda kv: (kv[1], kv[0])):
        if uf.union(i, j):
            merges.append(e)
    thresholds = tuple(merges) + (math.inf,)
    return CoalescenceGraph(family.k, events, tuple(merges), thresholds, criterion, mode,
                            right_closed)


def _eigen_list(eigenvalues) -> list[float]:
    vals = getattr(eigenvalues, "eigenvalues", eigenvalues)
    return [float(x) for x in vals]


def bound_iterated(family: SetFamily, eigenvalues, r: float, criterion: str = "length",
                   mode: str | None = None) -> float:
    """Staged bound valid for every ``r > 0``.

    ``1 - (1 - mu(A)) exp(-c sum_i phi([min(r, r_i) - r_{i-1}]_+ sqrt(lam^(k-i+1))))``
    with thresholds from :func:`coalescence`.  For ``r <= r_1`` only the
    first term survives and this equals :func:`bound_main` with ``lam^(k)``.
    """
    require_delta_k(family.measures)
    if not r > 0:
        raise ValidationError(f"radius must be positive, got {r!r}")
    lams = _eigen_list(eigenvalues)
    k = family.k
    if len(lams) <= k:
        raise ValidationError(f"need eigenvalues up to index {k}, got {len(lams)}")
    th = (0.0,) + coalescence(family, mode, criterion).thresholds
    expo = 0.0
    for i in range(1, k + 1):
        length = max(min(r, th[i]) - th[i - 1], 0.0)
        if length > 0:
            expo += phi_small(length * math.sqrt(max(lams[k - i + 1], 0.0)))
    return 1.0 - (1.0 - family.mass) * math.exp(-C * expo)


def markov_schedule(family: SetFamily, n: int) -> list[int]:
    """Number of separate blocks used at each step ``s = 1..n``.

    Step ``s`` enlarges the ``(s-1)``-enlargements by one; sets ``i, j``
    must act as one block there unless ``d(A_i, A_j) >= 2s``.
    """
    k = family.k
    out = []
    for s in range(1, n + 1):
        uf = _UnionFind(k)
        blocks = k
        for i in range(k):
            for j in range(i + 1, k):
                if family.pair_distances[i, j] < 2 * s and uf.union(i, j):
                    blocks -= 1
        out.append(blocks)
    return out


def bound_iterated_markov(family: SetFamily, eigenvalues, n: int) -> float:
    """Chain version of the staged bound, valid for every ``n >= 1``.

    ``1 - (1 - mu(B)) prod_{s=1}^{n} (1 + lam^(K_s))^(-1)`` where ``K_s`` is
    the block count of :func:`markov_schedule`.  Each factor is one
    application of the one-step inequality to the merged blocks, whose
    measures stay in Delta_{K_s}.
    """
    _require_chain(family)
    require_delta_k(family.measures)
    if n != int(n) or n < 1:
        raise ValidationError(f"step count must be a positive integer, got {n!r}")
    lams = _eigen_list(eigenvalues)
    if len(lams) <= family.k:
        raise ValidationError(f"need eigenvalues up to index {family.k}, got {len(lams)}")
    log_decay = sum(math.log1p(max(lams[b], 0.0)) for b in markov_schedule(family, int(n)))
    return 1.0 - (1.0 - family.mass) * math.exp(-log_decay)


# ---------------------------------------------------------------------------
# certificates

def max_of_quotient(family: SetFamily, eps: float, mode: str | None = None):
    """Both sides of ``max_{i=0..k} mu(A_{i,eps}) / mu(A_i) <= (1 - mu(A)) / (1 - mu(A_eps))``.

    ``A_0`` is the complement of ``A_eps``.  Returns ``(lhs, rhs)``; an
    empty ``A_0`` drops the ``i = 0`` term and makes ``rhs`` infinite.
    """
    space = family.space
    mode = resolve_mode(space, mode)
    mu = space.mu
    d_sets = [space.dist[:, s].min(axis=1) for s in family.sets]
    d_union = np.min(d_sets, axis=0)
    enlarged = within(d_union, eps, mode) | (d_union == 0)
    ratios = [mu[within(d, eps, mode) | (d == 0)].sum() / mu[d == 0].sum() for d in d_sets]
    a0 = ~enlarged
    outside = float(mu[a0].sum())
    if a0.any():
        d0 = space.dist[:, a0].min(axis=1)
        ratios.append(mu[within(d0, eps, mode) | (d0 == 0)].sum() / outside)
    rhs = (1.0 - family.mass) / outside if outside > 0 else math.inf
    return float(max(ratios)), rhs


@dataclass
class StepCertificate:
    """Step-by-step check of the chain theorem on one instance.

    For each step ``m -> m + 1`` the chain of inequalities of the proof is
    evaluated on exact measures, with ``A_i`` the current ``m``-enlargements
    and ``A_0`` the complement of ``B_{m+1}``:

    * ``lam <= max_i E(1_{A_i}) / mu(A_i)``            (Courant-Fischer)
    * ``... <= max_i mu(A_{i,1} minus A_i) / mu(A_i)``  (boundary bound)
    * ``1 + ... <= (1 - mu(B_m)) / (1 - mu(B_{m+1}))``  (max of quotients)
    * ``(1 + lam)(1 - mu(B_{m+1})) <= 1 - mu(B_m)``     (one-step)

    and the iterated bound ``mu(B_n) >= 1 - (1 - mu(B))(1 + lam)^(-n)``.
    All slacks are ``rhs - lhs`` and should be ``>= -tol``.
    """

    lam: float
    k: int
    window: int
    measures_b: list = field(default_factory=list)
    step_slack: list = field(default_factory=list)
    iterated_slack: list = field(default_factory=list)
    courant_fischer_slack: list = field(default_factory=list)
    boundary_slack: list = field(default_factory=list)
    quotient_slack: list = field(default_factory=list)
    tol: float = CERT_TOL

    def _all(self):
        return (self.step_slack + self.iterated_slack + self.courant_fischer_slack
                + self.boundary_slack + self.quotient_slack)

    @property
    def min_slack(self) -> float:
        vals = [s for s in self._all() if not math.isnan(s)]
        return min(vals) if vals else math.inf

    @property
    def passed(self) -> bool:
        return self.min_slack >= -self.tol

    def to_json(self) -> dict:
        def f(xs):
            return [None if math.isinf(x) else float(x) for x in xs]
        return {"status": "pass" if self.passed else "fail", "lambda": self.lam, "k": self.k,
                "window": self.window, "min_slack": None if math.isinf(self.min_slack)
                else self.min_slack, "mu_B": f(self.measures_b),
                "step_slack": f(self.step_slack), "iterated_slack": f(self.iterated_slack),
                "courant_fischer_slack": f(self.courant_fischer_slack),
                "boundary_slack": f(self.boundary_slack),
                "quotient_slack": f(self.quotient_slack)}


def certify_step(chain: ReversibleChain, family: SetFamily, lam: float | None = None,
                 strict: bool = False) -> StepCertificate:
    """Machine-check the chain theorem and its one-step inequality.

    ``lam`` defaults to ``lambda^(k)`` of the chain.  Raises
    :class:`RadiusTooLarge` when the family admits no step (``sep < 2``).
    With ``strict`` a failed certificate raises :class:`CertificationFailure`.
    """
    if family.space is not chain:
        raise ValidationError("family was built on a different space")
    if family.k > 1 and family.separation < 2:
        raise RadiusTooLarge(1, family.separation / 2)
    require_delta_k(family.measures)
    if lam is None:
        from .spectral import spectrum
        lam = spectrum(chain)[family.k]
    lam = max(float(lam), 0.0)
    window = markov_window(family)
    cert = StepCertificate(lam, family.k, window)

    mu = chain.mu
    flow = chain.p * mu[:, None]
    d_sets = np.array([chain.dist[:, s].min(axis=1) for s in family.sets])
    d_union = d_sets.min(axis=0)
    mass_b = [float(mu[d_union <= m].sum()) for m in range(window + 1)]
    cert.measures_b = mass_b
    base = 1.0 - mass_b[0]
    for m in range(window):
        out_now, out_next = 1.0 - mass_b[m], 1.0 - mass_b[m + 1]
        cert.step_slack.append(out_now - (1.0 + lam) * out_next)
        cert.iterated_slack.append(mass_b[m + 1] - (1.0 - base * (1.0 + lam) ** (-(m + 1))))

        pieces = [d <= m for d in d_sets]
        grown = [d <= m + 1 for d in d_sets]
        a0 = d_union > m + 1
        if a0.any():
            pieces.append(a0)
            d0 = chain.dist[:, a0].min(axis=1)
            grown.append(d0 <= 1)
        if len(pieces) < family.k + 1:
            # B_{m+1} is everything: the one-step inequality is trivial there
            continue
        energy, boundary = [], []
        for piece, big in zip(pieces, grown):
            mass = mu[piece].sum()
            energy.append(flow[np.ix_(piece, ~piece)].sum() / mass)
            boundary.append(mu[big & ~piece].sum() / mass)
        e_max, b_max = max(energy), max(boundary)
        cert.courant_fischer_slack.append(e_max - lam)
        cert.boundary_slack.append(b_max - e_max)
        cert.quotient_slack.append(out_now / out_next - (1.0 + b_max))
    if strict and not cert.passed:
        raise CertificationFailure(f"certificate failed with slack {cert.min_slack:.3e}")
    return cert


# ---------------------------------------------------------------------------
# reports

@dataclass
class BoundReport:
    """An evaluated bound curve with its exact counterpart.

    ``curve`` holds ``(r, bound, exact, slack)`` rows where ``exact`` is the
    directly computed ``mu(A_r)`` and ``slack = exact - bound``.  The
    certificate is *asserted* only for bounds that are theorems on the given
    space (the chain bounds); otherwise it is recorded.
    """

    kind: str
    mode: str
    validity: tuple
    used_lambda: float
    curve: list
    asserted: bool
    sets: list
    notes: list = field(default_factory=list)
    tol: float = CERT_TOL

    @property
    def min_slack(self) -> float:
        return min((row[3] for row in self.curve), default=math.inf)

    @property
    def certificate(self) -> str:
        return "pass" if self.min_slack >= -self.tol else "fail"

    def to_json(self) -> dict:
        lo, hi = self.validity
        return {"kind": self.kind, "mode": self.mode,
                "validity": [lo, None if math.isinf(hi) else hi],
                "used_lambda": self.used_lambda, "sets": self.sets,
                "curve": [{"r": r, "bound": b, "exact": e, "slack": s} for r, b, e, s in self.curve],
                "certificate": {"status": self.certificate, "asserted": self.asserted,
                                "min_slack": None if math.isinf(self.min_slack) else self.min_slack},
                "notes": list(self.notes)}

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("r,bound,exact,slack\n")
        for r, b, e, s in self.curve:
            buf.write(f"{r!r},{b!r},{e!r},{s!r}\n")
        return buf.getvalue()


def exact_enlargement_mass(family: SetFamily, r: float, mode: str | None = None) -> float:
    mode = resolve_mode(family.space, mode)
    d = family.distance_to_union()
    return float(family.space.mu[within(d, r, mode) | (d == 0)].sum())


def default_radii(family: SetFamily, limit: float, count: int = 16) -> list[float]:
    if math.isinf(limit):
        limit = float(family.distance_to_union().max()) or 1.0
    return [limit * (i + 1) / count for i in range(count)]


def report(kind: str, family: SetFamily, lam_or_spectrum, radii: Sequence[float] | None = None,
           mode: str | None = None) -> BoundReport:
    """Evaluate ``kind`` in {main, psi, markov, alt-product, alt-power,
    iterated, iterated-markov} on a radius grid and compare with exact
    enlargement measures."""
    space = family.space
    is_chain = isinstance(space, ReversibleChain)
    mode = resolve_mode(space, mode)
    lams = None
    if kind in ("iterated", "iterated-markov"):
        lams = _eigen_list(lam_or_spectrum)
        lam = lams[family.k]
    else:
        lam = float(lam_or_spectrum[family.k]) if hasattr(lam_or_spectrum, "__getitem__") \
            else float(lam_or_spectrum)
    half = family.separation / 2
    notes = []
    if kind in ("markov", "iterated-markov"):
        if not is_chain:
            raise ValidationError(f"bound {kind} needs a chain input")
        mode = "closed"
        hi = markov_window(family) if kind == "markov" else \
            max(1, int(family.distance_to_union().max()))
        radii = list(range(1, hi + 1)) if radii is None else [int(r) for r in radii]
        validity = (1, hi)
    else:
        hi = half if kind not in ("iterated",) else math.inf
        radii = default_radii(family, hi) if radii is None else list(radii)
        validity = (0.0, hi)

    rows = []
    for r in radii:
        if kind == "main":
            b = bound_main(family, lam, r)
        elif kind == "psi":
            b = bound_main_psi(family, lam, r)
        elif kind == "markov":
            b = bound_markov(family, lam, r)
        elif kind in ("alt-product", "alt-power"):
            alt = bound_alternative_markov(family, lam, r) if is_chain and mode == "closed" \
                else bound_alternative(family, lam, r)
            b = alt.product if kind == "alt-product" else alt.power
        elif kind == "iterated":
            b = bound_iterated(family, lams, r, mode=mode)
        elif kind == "iterated-markov":
            b = bound_iterated_markov(family, lams, r)
        else:
            raise ValidationError(f"unknown bound kind {kind!r}")
        exact = exact_enlargement_mass(family, r, mode)
        rows.append((float(r), float(b), exact, exact - float(b)))

    asserted = is_chain and kind in ("markov", "iterated-markov", "alt-product", "alt-power") \
        and mode == "closed"
    if not asserted:
        notes.append("certificate recorded, not asserted: the continuous-space constant is "
                     "not a theorem for this input")
    return BoundReport(kind, mode, validity, lam, rows, asserted, family.to_lists(), notes)
