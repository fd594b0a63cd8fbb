import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multiconc.errors import (NotAnExtension, NotInDeltaK, NotLipschitz, NotLipschitzOnA,
                              OverlappingIntervals, RadiusTooLarge)
from multiconc.lipschitz import (beta_delta_k, beta_power, beta_product, check_lipschitz,
                                 extend, extension_error_bound, main_profile, markov_profile,
                                 min_sublevel_bound, psi_profile, quantile_bound, sandwich)
from multiconc.profile import bound_main, bound_markov
from multiconc.space import chain_from_graph, distance_to_set, make_family, validate_space
from multiconc.spectral import spectrum
from multiconc.sweep import feasible_families

from _graphs import cycle, dumbbell, path, random_connected, spaces


def random_lipschitz(rng, space, scale=3.0):
    """Inf-convolution of random values with the metric: always 1-Lipschitz."""
    v = rng.uniform(0, scale, size=space.n)
    return (v[None, :] + space.dist).min(axis=1)


def random_instance(rng, n_max=10):
    """A chain, its spectrum and a feasible family, or None."""
    ch = chain_from_graph(random_connected(rng, int(rng.integers(4, n_max + 1)), 0.1),
                          ("simple-walk", "metropolis-uniform")[int(rng.integers(2))])
    fams = feasible_families(ch, rng, limit=50)
    if not fams:
        return None
    sets = fams[int(rng.integers(len(fams)))]
    return ch, spectrum(ch), make_family(ch, [list(s) for s in sets])


def test_check_lipschitz_examples():
    sp = validate_space([[0, 1, 2], [1, 0, 1], [2, 1, 0]], [1 / 3] * 3)
    assert check_lipschitz(sp, [5, 5, 5]).constant == 0
    dist = check_lipschitz(sp, distance_to_set(sp, [0]))
    assert dist.ok and dist.constant == 1
    two = validate_space([[0, 1], [1, 0]], [0.5, 0.5])
    bad = check_lipschitz(two, [0, 3])
    assert not bad and bad.constant == 3 and bad.pair == (0, 1)


def test_betas():
    assert beta_delta_k([0.5, 0.5]) == 0
    assert beta_delta_k([0.1, 0.1]) == np.inf
    assert beta_product([0.5]) == pytest.approx(1.0)
    assert beta_power([0.5]) == pytest.approx(1.0)
    assert beta_product([0.2, 0.2]) == pytest.approx(0.6 / 0.04)


# ---------------------------------------------------------------------------
# min of Lipschitz functions

def test_sublevel_recovers_set_bound():
    sp = validate_space([[0, 1, 2, 3], [1, 0, 1, 2], [2, 1, 0, 1], [3, 2, 1, 0]],
                        [0.5, 0.2, 0.2, 0.1])
    fam = make_family(sp, [[0]])
    f = distance_to_set(sp, [0])
    for r in (0.5, 1.0, 2.5):
        cert = min_sublevel_bound(sp, [f], main_profile(0.7), r)
        assert cert.lhs == bound_main(fam, 0.7, r)
        assert cert.rhs == cert.extra["set_exact"]
        assert cert.extra["equivalent"]


def test_sublevel_markov_matches_bound_markov():
    ch = dumbbell()
    sets = [[0, 1, 2, 3, 4], [8, 9, 10, 11, 12]]
    fam = make_family(ch, sets)
    lam = spectrum(ch)[2]
    fs = [distance_to_set(ch, s) for s in sets]
    for n in (1, 2):
        cert = min_sublevel_bound(ch, fs, markov_profile(lam), n)
        assert cert.lhs == bound_markov(fam, lam, n)
        assert cert.passed


def test_sublevel_random_functions_certified():
    rng = np.random.default_rng(2)
    done = 0
    while done < 40:
        inst = random_instance(rng)
        if inst is None:
            continue
        ch, spec, fam = inst
        lam = spec[fam.k]
        fs = [rng.uniform(0.3, 1.0) * distance_to_set(ch, s) for s in fam.sets]
        for mode in ("closed", "strict"):
            prof = markov_profile(lam, mode)
            limit = fam.separation / 2 if fam.k > 1 else float(fam.distance_to_union().max())
            for r in np.linspace(0.25, limit, 5):
                cert = min_sublevel_bound(ch, fs, prof, float(r))
                assert cert.passed, cert.to_json()
                assert cert.extra["equivalent"]
        done += 1


def test_sublevel_preconditions():
    ch = chain_from_graph(cycle(8))
    fs = [distance_to_set(ch, [0]), distance_to_set(ch, [4])]
    with pytest.raises(NotInDeltaK):
        min_sublevel_bound(ch, fs, markov_profile(0.5), 1)
    fs = [distance_to_set(ch, [0, 1, 2]), distance_to_set(ch, [4, 5, 6])]
    with pytest.raises(RadiusTooLarge):
        min_sublevel_bound(ch, fs, markov_profile(0.5), 1.5)
    with pytest.raises(NotLipschitz):
        min_sublevel_bound(ch, [2 * fs[0], fs[1]], markov_profile(0.5), 1)


# ---------------------------------------------------------------------------
# quantiles

def test_quantile_median():
    ch = chain_from_graph(path(9))
    f = np.arange(9.0)
    lam = spectrum(ch)[1]
    median = float(np.searchsorted(np.cumsum(ch.mu), 0.5))
    for r in (1, 2, 3):
        cert = quantile_bound(ch, f, [(-np.inf, median)], markov_profile(lam), r)
        assert cert.passed
        assert cert.lhs == pytest.approx(bound_markov(make_family(ch, [range(int(median) + 1)]),
                                                      lam, r))


def test_quantile_covering_intervals():
    ch = chain_from_graph(path(6))
    cert = quantile_bound(ch, np.arange(6.0), [(-1, 2), (2.8, 9)], markov_profile(0.3), 0.3)
    assert cert.lhs == 1.0 and cert.rhs == pytest.approx(1.0)
    assert cert.passed


def test_quantile_bimodal_twelve_point_path():
    ch = chain_from_graph(path(12))
    f = np.arange(12.0)
    lam = spectrum(ch)[2]
    for mode in ("closed", "strict"):
        for r in (0.5, 1.0, 1.5):
            cert = quantile_bound(ch, f, [(0, 4), (7, 11)], markov_profile(lam, mode), r)
            assert cert.passed
    with pytest.raises(OverlappingIntervals):
        quantile_bound(ch, f, [(0, 4), (4, 11)], markov_profile(lam), 1)
    with pytest.raises(RadiusTooLarge):
        quantile_bound(ch, f, [(0, 4), (7, 11)], markov_profile(lam), 2)


# ---------------------------------------------------------------------------
# extensions

def test_extend_identity_and_anchor():
    ch = chain_from_graph(cycle(7))
    f = random_lipschitz(np.random.default_rng(0), ch)
    assert np.allclose(extend(ch, range(7), f, "upper"), f)
    assert np.allclose(extend(ch, range(7), f, "lower"), f)
    d = distance_to_set(ch, [2])
    assert np.array_equal(extend(ch, [2], {2: 0.0}, "upper"), d)
    assert np.array_equal(extend(ch, [2], {2: 0.0}, "lower"), -d)


def test_extend_rejects_non_lipschitz():
    ch = chain_from_graph(path(4))
    with pytest.raises(NotLipschitzOnA):
        extend(ch, [0, 1], [0.0, 2.0])


def test_extend_reads_only_A():
    ch = chain_from_graph(path(5))

    class OnlyA(dict):
        def __getitem__(self, key):
            assert key in (1, 3)
            return super().__getitem__(key)

    g = extend(ch, [1, 3], OnlyA({1: 0.0, 3: 1.0}))
    assert g[1] == 0.0 and g[3] == 1.0


@given(spaces(n_min=3, n_max=9), st.integers(0, 2**32 - 1))
@settings(max_examples=100, deadline=None)
def test_sandwich_and_lipschitz(sp, seed):
    rng = np.random.default_rng(seed)
    f = random_lipschitz(rng, sp)
    A = sorted(rng.choice(sp.n, size=int(rng.integers(1, sp.n + 1)), replace=False))
    vals = {int(a): float(f[a]) for a in A}
    hi, lo = extend(sp, A, vals, "upper"), extend(sp, A, vals, "lower")
    assert check_lipschitz(sp, hi).constant <= 1 + 1e-12
    assert check_lipschitz(sp, lo).constant <= 1 + 1e-12
    assert np.allclose(hi[A], f[A]) and np.allclose(lo[A], f[A])
    assert np.all(lo <= f + 1e-12) and np.all(f <= hi + 1e-12)
    assert sandwich(sp, A, vals, f)
    assert sandwich(sp, A, vals, 0.5 * (hi + lo))


def test_extension_error_trivial_and_errors():
    ch = dumbbell()
    fam = make_family(ch, [[0, 1, 2, 3, 4], [8, 9, 10, 11, 12]])
    f = random_lipschitz(np.random.default_rng(1), ch)
    prof = markov_profile(spectrum(ch)[2])
    cert = extension_error_bound(ch, fam, f, f, prof, 2)
    assert cert.lhs == 0 and cert.passed
    g = f.copy()
    g[0] += 0.5
    with pytest.raises((NotAnExtension, NotLipschitz)):
        extension_error_bound(ch, fam, f, g, prof, 2)
    with pytest.raises(RadiusTooLarge):
        extension_error_bound(ch, fam, f, f, prof, 5)


def test_extension_error_two_lipschitz_containment():
    rng = np.random.default_rng(4)
    ch = dumbbell()
    fam = make_family(ch, [[0, 1, 2, 3, 4], [8, 9, 10, 11, 12]])
    d = fam.distance_to_union()
    for _ in range(20):
        f = random_lipschitz(rng, ch)
        A = fam.union
        g = extend(ch, A, {int(a): f[a] for a in A}, "upper")
        h = np.abs(f - g)
        assert np.all(h <= 2 * d + 1e-12)


def test_extension_error_random_instances():
    rng = np.random.default_rng(5)
    done = 0
    while done < 40:
        inst = random_instance(rng)
        if inst is None:
            continue
        ch, spec, fam = inst
        lam = spec[fam.k]
        f = random_lipschitz(rng, ch)
        A = fam.union
        for which in ("upper", "lower"):
            g = extend(ch, A, {int(a): f[a] for a in A}, which)
            limit = fam.separation if fam.k > 1 else 2 * float(fam.distance_to_union().max())
            for r in np.linspace(0.5, limit, 4):
                for mode in ("closed", "strict"):
                    cert = extension_error_bound(ch, fam, f, g, markov_profile(lam, mode),
                                                 float(r))
                    assert cert.passed, cert.to_json()
        done += 1


def test_profiles_evaluate_without_ordering():
    for beta in ("delta-k", "product", "power"):
        for prof in (main_profile(0.5, beta), psi_profile(0.5, beta), markov_profile(0.5,
                                                                                     beta=beta)):
            vals = [prof.alpha(r) for r in (0.0, 0.5, 1.0, 2.0, 4.0)]
            assert all(a >= b for a, b in zip(vals, vals[1:]))
            assert prof.deficit([0.6, 0.3], 1.0) >= 0
