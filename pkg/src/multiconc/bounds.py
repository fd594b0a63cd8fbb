"""Upper bounds on ``lambda^(k)`` from separated set families.

Concentration bounds invert into eigenvalue bounds: if ``k`` sets with
measures in Delta_k are ``2r`` apart and ``A_0`` is what their joint
``r``-enlargement misses, then ``lambda^(k)`` cannot be large unless
``mu(A_0)`` is small.  Two flavours are reported side by side:

* ``value``: the continuous-space formula
  ``(1/r^2) psi((1/c) min_i log(mu(A_i)/mu(A_0)))``;
* ``exact``: on chains, the direct inversion of the one-step theorem,
  ``min_n ((1 - mu(B)) / mu(E minus B_n))^(1/n) - 1``, which is a theorem for
  the chain spectrum and is what the certification sweeps assert.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import NoFeasibleFamily, ValidationError, ZeroSeparation
from .polytope import in_delta_k, require_delta_k
from .profile import C, alternative_prefactors, markov_window, psi_small
from .space import (ReversibleChain, SetFamily, make_family, resolve_mode, within)

CONNECTED_LIMIT = 14
MAX_CONNECTED_CANDIDATES = 4000


@dataclass
class EigenBoundResult:
    kind: str
    value: float
    family: SetFamily
    r: float
    a0: float
    exact: float | None = None
    steps: int | None = None
    mode: str = "strict"
    flags: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        def num(x):
            if x is None:
                return None
            return "inf" if math.isinf(x) else float(x)
        out = {"kind": self.kind, "value": num(self.value), "exact": num(self.exact),
               "r": num(self.r), "a0": float(self.a0), "steps": self.steps, "mode": self.mode,
               "sets": self.family.to_lists(),
               "measures": [float(x) for x in self.family.measures], "flags": list(self.flags)}
        if self.extra:
            out["extra"] = {k: num(v) if isinstance(v, float) else v
                            for k, v in sorted(self.extra.items())}
        return out


def _outside_mass(family: SetFamily, r: float, mode: str) -> float:
    d = family.distance_to_union()
    return float(family.space.mu[~(within(d, r, mode) | (d == 0))].sum())


def _radius(family: SetFamily, r: float | None) -> float:
    if r is None:
        if math.isinf(family.separation):
            if isinstance(family.space, ReversibleChain):
                return float(markov_window(family))
            raise ValidationError("a single set has no separation; pass the radius explicitly")
        return family.separation / 2
    if not 0 < r <= family.separation / 2 * (1 + 1e-12):
        raise ValidationError(f"radius {r!r} outside (0, sep/2]")
    return float(r)


def discrete_inversion(family: SetFamily, prefactor: float = 1.0, max_steps: int | None = None):
    """``min_n (prefactor (1 - mu(B)) / mu(E minus B_n))^(1/n) - 1`` over the window.

    Returns ``(value, n)``; ``inf`` when every ``B_n`` is the whole space.
    """
    window = markov_window(family) if max_steps is None else max_steps
    d = family.distance_to_union()
    mu = family.space.mu
    outside0 = 1.0 - family.mass
    best, best_n = math.inf, None
    for n in range(1, window + 1):
        out_n = float(mu[d > n].sum())
        if out_n <= 0:
            break
        val = (prefactor * outside0 / out_n) ** (1.0 / n) - 1.0
        if val < best:
            best, best_n = val, n
    return best, best_n


def eig_upper_main(space, family: SetFamily, r: float | None = None,
                   mode: str | None = None) -> EigenBoundResult:
    """Bound ``lambda^(k)`` from a Delta_k family.

    ``r`` defaults to half the separation.  ``mu(A_0) = 0`` yields ``inf``
    with the flag ``empty-complement``; ``mu(A_0) = min_i mu(A_i)`` yields
    ``0`` flagged ``degenerate`` (only consistent with ``lambda^(k) = 0``).
    """
    if family.space is not space:
        raise ValidationError("family was built on a different space")
    require_delta_k(family.measures)
    mode = resolve_mode(space, mode)
    r = _radius(family, r)
    a0 = _outside_mass(family, r, mode)
    flags = []
    if a0 <= 0:
        value = math.inf
        flags.append("empty-complement")
    else:
        x = min(math.log(m / a0) for m in family.measures) / C
        if x <= 0:
            flags.append("degenerate")
        value = psi_small(max(x, 0.0)) / (r * r)
    res = EigenBoundResult("main", value, family, r, a0, mode=mode, flags=flags)
    if isinstance(space, ReversibleChain):
        res.exact, res.steps = discrete_inversion(family)
    return res


def eig_upper_alt(space, family: SetFamily, r: float | None = None,
                  mode: str | None = None) -> tuple[EigenBoundResult, EigenBoundResult]:
    """The two Delta_k-free eigenvalue bounds (product and power corrections).

    ``value`` follows the printed formulas, which put ``a_(1)`` where the
    concentration bound has ``1 - mu(A)``; that swap needs Delta_k, so
    ``extra["general"]`` carries the version with ``1 - mu(A)``, valid for any
    family.  On chains ``exact`` inverts the discrete analogues directly.
    """
    if family.space is not space:
        raise ValidationError("family was built on a different space")
    mode = resolve_mode(space, mode)
    r = _radius(family, r)
    a0 = _outside_mass(family, r, mode)
    a1 = float(family.measures.min())
    mass = family.mass
    corrections = (family.k * math.log(1.0 / a1), mass / a1 * math.log(1.0 / mass))
    prefactors = alternative_prefactors(family.measures)
    out = []
    for kind, corr, pre in zip(("alt1", "alt2"), corrections, prefactors):
        flags = []
        if a0 <= 0:
            value = general = math.inf
            flags.append("empty-complement")
        else:
            x = (math.log(a1 / a0) + corr) / C
            xg = math.log(pre * (1.0 - mass) / a0) / C
            if x < 0:
                flags.append("negative-argument")
            value = psi_small(max(x, 0.0)) / (r * r)
            general = psi_small(max(xg, 0.0)) / (r * r)
        res = EigenBoundResult(kind, value, family, r, a0, mode=mode, flags=flags,
                               extra={"general": general})
        if isinstance(space, ReversibleChain):
            steps = None
            if kind == "alt2" and family.k > 1:
                # power form needs disjoint closed n-balls: 2n < sep
                steps = int(math.ceil(family.separation / 2)) - 1
            res.exact, res.steps = discrete_inversion(family, pre, steps)
        out.append(res)
    return out[0], out[1]


def eig_upper_cgy(space, sets: Sequence) -> EigenBoundResult:
    """``lambda^(k) <= max_{i!=j} log(4/(mu_i mu_j))^2 / min_{i!=j} d(A_i, A_j)^2``
    for ``k + 1`` sets.  Stated for compact manifolds; on finite inputs it is
    evaluated, never asserted."""
    if len(sets) < 2:
        raise ValidationError("the CGY bound needs at least two sets (k >= 1)")
    family = make_family(space, sets)
    dmin = family.separation
    if not dmin > 0:
        raise ZeroSeparation("ZeroSeparation: sets must be positively separated")
    m = family.measures
    worst = max(math.log(4.0 / (m[i] * m[j])) for i, j in combinations(range(len(m)), 2))
    value = worst * worst / (dmin * dmin)
    return EigenBoundResult("cgy", value, family, dmin / 2, float(m.min()),
                            mode=space.default_mode, extra={"k": len(sets) - 1})


def eig_upper_cgy_matched(space, family: SetFamily, mode: str | None = None) -> EigenBoundResult:
    """CGY applied to ``A_1..A_k`` plus ``A_0 = E minus A_r`` with ``r = sep/2``."""
    mode = resolve_mode(space, mode)
    r = _radius(family, None)
    d = family.distance_to_union()
    a0 = np.flatnonzero(~(within(d, r, mode) | (d == 0)))
    if a0.size == 0:
        raise ValidationError("A_0 is empty; no (k+1)-th set to add")
    return eig_upper_cgy(space, [a0] + list(family.sets))


def eig_upper_cgy_improved(space, sets: Sequence, k: int, constant: float,
                           experimental: bool = False) -> EigenBoundResult:
    """Experimental: ``constant^(k - l + 1)`` times the CGY bound of ``l + 1`` sets.

    The constant is only known to exist (``> 1``); callers must supply it
    and opt in with ``experimental=True``.
    """
    if not experimental:
        raise ValidationError("the improved CGY evaluator is experimental; pass experimental=True")
    if not constant > 1:
        raise ValidationError(f"constant must exceed 1, got {constant!r}")
    base = eig_upper_cgy(space, sets)
    level = len(sets) - 1
    if not 1 <= level <= k:
        raise ValidationError(f"need 1 <= l <= k, got l={level}, k={k}")
    base.kind = "cgy-improved"
    base.value *= constant ** (k - level + 1)
    base.flags.append("experimental")
    return base


@dataclass(frozen=True)
class CgyComparison:
    verdict: str
    lhs: float
    rhs: float

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "lhs": self.lhs, "rhs": self.rhs}


def compare_cgy(a1: float, a0: float, tol: float = 1e-12) -> CgyComparison:
    """Which of the two eigenvalue bounds is smaller, from the two smallest masses.

    ``a1^(1+c) <= 4^c a0^(1-c)`` means the Delta_k bound is the smaller
    (``"ours"``); the reverse strict inequality favours CGY (``"theirs"``).
    """
    if not (0 < a0 <= 1 and 0 < a1 <= 1):
        raise ValidationError(f"masses must lie in (0, 1], got a1={a1!r}, a0={a0!r}")
    lhs = a1 ** (1 + C)
    rhs = 4 ** C * a0 ** (1 - C)
    if abs(lhs - rhs) <= tol * max(lhs, rhs):
        verdict = "tie"
    else:
        verdict = "ours" if lhs < rhs else "theirs"
    return CgyComparison(verdict, lhs, rhs)


def matched_values(a1: float, a0: float, r: float) -> tuple[float, float]:
    """Both eigenvalue bounds for a Delta_k family with smallest mass ``a1``,
    outside mass ``a0 <= a1`` and half-separation ``r``."""
    ours = psi_small(math.log(a1 / a0) / C) / (r * r)
    theirs = math.log(4.0 / (a1 * a0)) ** 2 / (r * r)
    return ours, theirs


# ---------------------------------------------------------------------------
# search

@dataclass
class SearchResult:
    best: EigenBoundResult
    objective: str
    evaluations: int
    method: str
    seed: int

    def to_json(self) -> dict:
        return {"best": self.best.to_json(), "objective": self.objective,
                "evaluations": self.evaluations, "method": self.method, "seed": self.seed}


def _connected_subsets(adj: list, n: int, limit: int):
    """All connected vertex subsets (as sorted tuples), or None past ``limit``.

    Each set is generated once from its smallest vertex by the standard
    extension scheme: grow only with vertices larger than the root.
    """
    out = []

    def grow(current, frontier, excluded):
        out.append(tuple(sorted(current)))
        if len(out) > limit:
            raise OverflowError
        frontier = list(frontier)
        while frontier:
            v = frontier.pop()
            new_front = set(frontier)
            new_front.update(w for w in adj[v] if w not in excluded and w not in current
                             and w > current[0])
            grow(current + [v], new_front, excluded | {v})
            excluded = excluded | {v}

    try:
        for root in range(n):
            front = {w for w in adj[root] if w > root}
            grow([root], front, {root})
    except OverflowError:
        return None
    return sorted(set(out))


def _balls(space) -> list[tuple]:
    out = set()
    for x in range(space.n):
        for rad in np.unique(space.dist[x]):
            out.add(tuple(np.flatnonzero(space.dist[x] <= rad)))
    return sorted(out)


def candidate_sets(space) -> tuple[list[tuple], str]:
    if isinstance(space, ReversibleChain) and space.n <= CONNECTED_LIMIT:
        adj = [set(np.flatnonzero(space.graph_dist[x] == 1).tolist()) for x in range(space.n)]
        subsets = _connected_subsets(adj, space.n, MAX_CONNECTED_CANDIDATES)
        if subsets is not None:
            return subsets, "connected"
    return _balls(space), "balls"


def _objective(space, family, objective):
    res = eig_upper_main(space, family)
    val = res.exact if objective == "exact" else res.value
    return val, res


def search_families(space, k: int, budget: int = 10000, seed: int = 0,
                    objective: str | None = None) -> SearchResult:
    """Look for a separated Delta_k family minimising :func:`eig_upper_main`.

    Small chains (``n <= 14``) are searched exhaustively over families of
    connected sets, in a fixed order, until ``budget`` families have been
    scored; larger inputs start from the first feasible family of metric
    balls and anneal with single-vertex add/remove moves.  Chains need
    separation at least 2 (one admissible step), metric spaces only a
    positive one.  The objective is the exact discrete inversion on chains
    and the continuous formula otherwise.
    """
    if k < 1 or budget < 1:
        raise ValidationError("need k >= 1 and budget >= 1")
    is_chain = isinstance(space, ReversibleChain)
    objective = objective or ("exact" if is_chain else "formula")
    if objective == "exact" and not is_chain:
        raise ValidationError("the exact objective is only defined on chains")
    min_sep = 2.0 if is_chain else 0.0
    if space.n <= CONNECTED_LIMIT:
        cands, kind = candidate_sets(space)
        best, evals = _enumerate(space, k, cands, budget, min_sep, objective, first_only=False)
        method = f"exhaustive-{kind}"
        if best is None:
            raise NoFeasibleFamily(f"NoFeasibleFamily: no separated Delta_{k} family of "
                                   f"{kind} sets")
    else:
        seed_fam, _ = _enumerate(space, k, _balls(space), budget, min_sep, objective,
                                 first_only=True)
        if seed_fam is None:
            raise NoFeasibleFamily(f"NoFeasibleFamily: no separated Delta_{k} family of balls")
        best, evals = _anneal(space, seed_fam[1].family, budget - 1, min_sep, objective, seed)
        method = "annealing"
    return SearchResult(best[1], objective, evals, method, seed)


def _enumerate(space, k, cands, budget, min_sep, objective, first_only):
    mu = space.mu
    masses = np.array([mu[list(c)].sum() for c in cands])
    order = sorted(range(len(cands)), key=lambda i: (-masses[i], cands[i]))
    cands = [cands[i] for i in order]
    masses = masses[order]
    member = np.zeros((len(cands), space.n), dtype=bool)
    for i, c in enumerate(cands):
        member[i, list(c)] = True
    best = None
    evals = 0

    def far_enough(d_chosen):
        gaps = np.where(member, d_chosen[None, :], np.inf).min(axis=1)
        return gaps >= min_sep if min_sep > 0 else gaps > 0

    def rec(start, chosen, d_chosen, total):
        nonlocal best, evals
        if evals >= budget:
            return True
        if len(chosen) == k:
            if not in_delta_k(np.minimum(masses[chosen], 1.0)):
                return False
            fam = make_family(space, [cands[i] for i in chosen])
            val, res = _objective(space, fam, objective)
            evals += 1
            if best is None or val < best[0]:
                best = (val, res)
            return first_only
        allowed = far_enough(d_chosen) if chosen else np.ones(len(cands), dtype=bool)
        left = k - len(chosen)
        for t in range(start, len(cands)):
            # candidates come in decreasing mass, so the smallest final mass is
            # at most masses[t]: min + sum >= 1 fails for t and everything after
            if total + masses[t] * (left + 1) < 1 - 1e-12:
                break
            if not allowed[t] or total + masses[t] > 1 + 1e-12:
                continue
            d_new = np.minimum(d_chosen, space.dist[:, list(cands[t])].min(axis=1))
            if rec(t + 1, chosen + [t], d_new, total + masses[t]):
                return True
        return False

    rec(0, [], np.full(space.n, np.inf), 0.0)
    return best, evals


def _anneal(space, family, budget, min_sep, objective, seed):
    rng = np.random.default_rng(seed)
    sets = [set(int(x) for x in s) for s in family.sets]
    val, res = _objective(space, family, objective)
    best = (val, res)
    current = val
    temp, cooling = 1.0, 0.995
    evals = 1
    n = space.n
    for _ in range(50 * max(budget, 1)):
        if evals > budget:
            break
        i = int(rng.integers(len(sets)))
        v = int(rng.integers(n))
        trial = [set(s) for s in sets]
        if v in trial[i]:
            if len(trial[i]) == 1:
                continue
            trial[i].discard(v)
        elif any(v in s for s in trial):
            continue
        else:
            trial[i].add(v)
        # feasibility repair: moves that leave the feasible region are undone
        try:
            fam = make_family(space, [sorted(s) for s in trial])
        except ValidationError:
            continue
        if fam.separation < min_sep or not in_delta_k(fam.measures):
            continue
        cand, cres = _objective(space, fam, objective)
        evals += 1
        lc = math.log(cand) if cand > 0 else -math.inf
        lcur = math.log(current) if current > 0 else -math.inf
        if cand <= current or (math.isfinite(lc) and rng.random() < math.exp(-(lc - lcur) / temp)):
            sets, current = trial, cand
            if cand < best[0]:
                best = (cand, cres)
        temp *= cooling
    return best, evals
