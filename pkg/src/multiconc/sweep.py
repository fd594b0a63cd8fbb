"""Seeded random-instance sweeps that exercise every certified inequality.

Randomness comes from one :class:`numpy.random.SeedSequence`; each chain
gets its own spawned child stream, so a report only depends on the seed
and the sweep size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import eig_upper_alt, eig_upper_main
from .polytope import in_delta_k
from .profile import (bound_iterated_markov, certify_step, markov_window,
                      max_of_quotient)
from .space import WALKS, ReversibleChain, chain_from_graph, make_family
from .spectral import spectrum

SHAPES = ("tree", "path", "cycle", "sparse")
MAX_SET_SIZE = 3
MAX_K = 3
MAX_FAMILIES = 500
QUOTIENT_TOL = 1e-10
SLACK_TOL = 1e-9


def random_graph(rng: np.random.Generator, n: int, shape: str) -> np.ndarray:
    adj = np.zeros((n, n), dtype=np.int64)
    order = rng.permutation(n)

    def link(i, j):
        adj[order[i], order[j]] = adj[order[j], order[i]] = 1

    if shape in ("path", "cycle"):
        for i in range(n - 1):
            link(i, i + 1)
        if shape == "cycle":
            link(n - 1, 0)
    elif shape in ("tree", "sparse"):
        for i in range(1, n):
            link(i, int(rng.integers(i)))
        if shape == "sparse":
            for i in range(n):
                for j in range(i + 1, n):
                    if rng.random() < 1.5 / n:
                        link(i, j)
    else:
        raise ValueError(f"unknown shape {shape!r}")
    return adj


def random_chain(rng: np.random.Generator, n_range=(4, 12)) -> tuple[ReversibleChain, dict]:
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    shape = SHAPES[int(rng.integers(len(SHAPES)))]
    walk = WALKS[int(rng.integers(len(WALKS)))]
    adj = random_graph(rng, n, shape)
    return chain_from_graph(adj, walk), {"n": n, "shape": shape, "walk": walk}


def _subsets(n: int, size: int):
    from itertools import combinations
    for s in range(1, size + 1):
        yield from combinations(range(n), s)


def feasible_families(chain: ReversibleChain, rng: np.random.Generator | None = None,
                      max_k: int = MAX_K, max_size: int = MAX_SET_SIZE,
                      limit: int = MAX_FAMILIES) -> list[tuple]:
    """Delta_k families of small disjoint sets, pairwise at distance >= 2.

    Enumerated in a fixed order, then subsampled to ``limit`` with ``rng``.
    """
    mu = chain.mu
    dist = chain.dist
    cands = sorted(_subsets(chain.n, max_size), key=lambda s: (-mu[list(s)].sum(), s))
    mass = [float(mu[list(s)].sum()) for s in cands]
    m = len(cands)
    # pairwise set distances, inf for overlapping sets
    rows = [dist[list(s)].min(axis=0) for s in cands]
    out = []

    def apart(i, j):
        if set(cands[i]) & set(cands[j]):
            return False
        return rows[i][list(cands[j])].min() >= 2

    for i in range(m):
        if mass[i] >= 0.5:
            out.append((cands[i],))
    if max_k >= 2:
        for i in range(m):
            if 3 * mass[i] < 1:
                break
            for j in range(i + 1, m):
                if mass[i] + 2 * mass[j] < 1:
                    break
                if mass[i] + mass[j] <= 1 + 1e-12 and apart(i, j):
                    out.append((cands[i], cands[j]))
    if max_k >= 3:
        for i in range(m):
            if 4 * mass[i] < 1:
                break
            for j in range(i + 1, m):
                if mass[i] + 3 * mass[j] < 1:
                    break
                if not apart(i, j):
                    continue
                for l in range(j + 1, m):
                    if mass[i] + mass[j] + 2 * mass[l] < 1:
                        break
                    if mass[i] + mass[j] + mass[l] <= 1 + 1e-12 and apart(i, l) and apart(j, l):
                        out.append((cands[i], cands[j], cands[l]))
    out = [f for f in out if in_delta_k([mu[list(s)].sum() for s in f])]
    if rng is not None and len(out) > limit:
        keep = np.sort(rng.choice(len(out), size=limit, replace=False))
        out = [out[i] for i in keep]
    return out


@dataclass
class _Tally:
    checks: int = 0
    failures: int = 0
    min_slack: float = math.inf

    def add(self, slack: float, tol: float):
        self.checks += 1
        if slack < -tol:
            self.failures += 1
        self.min_slack = min(self.min_slack, slack)

    def to_json(self) -> dict:
        return {"checks": self.checks, "failures": self.failures,
                "min_slack": None if math.isinf(self.min_slack) else self.min_slack}


def run_sweep(seed: int = 0, n_chains: int = 200, limit: int = MAX_FAMILIES) -> dict:
    """Certify the chain theorem and its consequences on random instances.

    Tallies (slack is ``rhs - lhs``; negative means violated):

    ``certify``      every step of :func:`certify_step`
    ``one_step``     ``(1 + lam)(1 - mu(B_{n+1})) <= 1 - mu(B_n)``
    ``quotient``     max-of-quotients for ``eps = 1 .. window``
    ``eig_main``     discrete inversion ``>= lambda^(k)``
    ``eig_alt``      both Delta_k-free inversions ``>= lambda^(k)``
    ``staged``       staged bound ``<= mu(B_n)`` for ``n = 1 .. eccentricity``
    ``ground``       ``lambda^(0) <= 1e-9``
    """
    children = np.random.SeedSequence(seed).spawn(n_chains)
    names = ("certify", "one_step", "quotient", "eig_main", "eig_alt", "staged", "ground")
    tally = {name: _Tally() for name in names}
    chains = []
    n_families = 0
    for child in children:
        rng = np.random.default_rng(child)
        chain, meta = random_chain(rng)
        spec = spectrum(chain)
        tally["ground"].add(1e-9 - abs(spec[0]), 0.0)
        fams = feasible_families(chain, rng, limit=limit)
        meta["families"] = len(fams)
        chains.append(meta)
        n_families += len(fams)
        for sets in fams:
            family = make_family(chain, [list(s) for s in sets])
            k = family.k
            lam = spec[k]
            cert = certify_step(chain, family, lam)
            tally["certify"].add(cert.min_slack, SLACK_TOL)
            for s in cert.step_slack:
                tally["one_step"].add(s, SLACK_TOL)
            for eps in range(1, markov_window(family) + 1):
                lhs, rhs = max_of_quotient(family, eps, "closed")
                tally["quotient"].add(rhs - lhs, QUOTIENT_TOL)
            exact = eig_upper_main(chain, family).exact
            tally["eig_main"].add(exact - lam, SLACK_TOL)
            for res in eig_upper_alt(chain, family):
                tally["eig_alt"].add(res.exact - lam, SLACK_TOL)
            d = family.distance_to_union()
            for n in range(1, int(d.max()) + 1):
                exact_b = float(chain.mu[d <= n].sum())
                tally["staged"].add(exact_b - bound_iterated_markov(family, spec.eigenvalues, n),
                                    SLACK_TOL)
    return {"seed": seed, "chains": n_chains, "families": n_families,
            "instances": chains, "checks": {k: v.to_json() for k, v in tally.items()}}
