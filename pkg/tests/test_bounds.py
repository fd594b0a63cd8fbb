import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from multiconc.bounds import (compare_cgy, discrete_inversion, eig_upper_alt, eig_upper_cgy,
                              eig_upper_cgy_improved, eig_upper_cgy_matched, eig_upper_main,
                              matched_values, search_families)
from multiconc.errors import NoFeasibleFamily, NotInDeltaK, ValidationError
from multiconc.polytope import in_delta_k
from multiconc.profile import C, psi_small
from multiconc.space import chain_from_graph, make_family, validate_space
from multiconc.spectral import spectrum
from multiconc.sweep import feasible_families

from _graphs import cycle, dumbbell, random_connected


def three_cluster_space():
    """Three heavy points pairwise 4 apart and a light hub 2 from each."""
    d = 4.0 * (np.ones((4, 4)) - np.eye(4))
    d[3, :3] = d[:3, 3] = 2.0
    return validate_space(d, [0.3, 0.3, 0.3, 0.1])


def test_main_formula():
    sp = three_cluster_space()
    fam = make_family(sp, [[0], [1], [2]])
    res = eig_upper_main(sp, fam)
    assert res.r == 2.0
    assert res.a0 == pytest.approx(0.1)
    expected = psi_small(math.log(3) / C) / 4
    assert res.value == pytest.approx(expected)
    assert res.value == pytest.approx(1.8638, abs=1e-4)
    assert res.exact is None  # no spectrum on a bare metric space


def test_main_degenerate_and_empty():
    d = 4.0 * (np.ones((3, 3)) - np.eye(3))
    d[2, :2] = d[:2, 2] = 2.0
    sp = validate_space(d, [0.4, 0.4, 0.2])
    res = eig_upper_main(sp, make_family(sp, [[0], [1]]), r=1.0)
    assert res.flags == []
    sp2 = validate_space(d, [0.25, 0.5, 0.25])
    res = eig_upper_main(sp2, make_family(sp2, [[0], [1]]))
    assert res.value == 0 and "degenerate" in res.flags
    ch = chain_from_graph(cycle(10))
    res = eig_upper_main(ch, make_family(ch, [[0, 1, 2, 3], [5, 6, 7, 8]]))
    assert math.isinf(res.value) and "empty-complement" in res.flags


def test_main_requires_delta():
    sp = three_cluster_space()
    with pytest.raises(NotInDeltaK):
        eig_upper_main(sp, make_family(sp, [[0], [3]]))


def test_twelve_cycle_antipodal_arcs():
    ch = chain_from_graph(cycle(12))
    fam = make_family(ch, [[0, 1, 2, 3], [6, 7, 8, 9]])
    lam2 = spectrum(ch)[2]
    res = eig_upper_main(ch, fam)
    assert res.value >= lam2
    assert res.exact >= lam2


def test_discrete_inversion_by_hand():
    ch = dumbbell()
    fam = make_family(ch, [[0, 1, 2, 3, 4], [8, 9, 10, 11, 12]])
    value, n = discrete_inversion(fam)
    # outside mass 1/4, then 1/12 after one step, then nothing
    assert (value, n) == (pytest.approx(2.0), 1)
    assert spectrum(ch)[2] <= value


def test_alt_bounds_sound_on_random_chains():
    rng = np.random.default_rng(8)
    seen = 0
    for _ in range(40):
        ch = chain_from_graph(random_connected(rng, 10, extra=0.1))
        spec = spectrum(ch)
        for sets in feasible_families(ch, rng, limit=20):
            fam = make_family(ch, [list(s) for s in sets])
            for res in eig_upper_alt(ch, fam):
                assert res.exact >= spec[fam.k] - 1e-9
            assert eig_upper_main(ch, fam).exact >= spec[fam.k] - 1e-9
            seen += 1
    assert seen > 20


def test_alt_single_set_reduction():
    sp = validate_space([[0, 1, 2], [1, 0, 1], [2, 1, 0]], [0.5, 0.3, 0.2])
    fam = make_family(sp, [[0]])
    alt1, alt2 = eig_upper_alt(sp, fam, r=1.5)
    main = eig_upper_main(sp, fam, r=1.5)
    # k = 1, a = 1/2: corrections log 2 and log 2, prefactors 2 and 2
    assert alt1.value == pytest.approx(alt2.value)
    assert alt1.value >= main.value
    assert alt1.extra["general"] == pytest.approx(alt2.extra["general"])


@given(st.floats(1e-4, 0.3), st.floats(1e-4, 0.3))
def test_alt_monotone_in_smallest_mass(a, b):
    d = [[0, 4, 2], [4, 0, 2], [2, 2, 0]]
    lo, hi = sorted((a, b))
    assume(hi - lo > 1e-6)
    vals = []
    for a1 in (lo, hi):
        sp = validate_space(d, [a1, 0.9 - a1, 0.1])
        fam = make_family(sp, [[0], [1]])
        vals.append(eig_upper_alt(sp, fam)[0].value)
    assert vals[0] >= vals[1] - 1e-12


def test_cgy_two_sets():
    d = np.abs(np.subtract.outer(np.arange(5.0), np.arange(5.0)))
    sp = validate_space(d, [0.25, 0.5 / 3, 0.5 / 3, 0.5 / 3, 0.25])
    res = eig_upper_cgy(sp, [[0], [4]])
    assert res.value == pytest.approx(math.log(64) ** 2 / 16)
    assert res.value == pytest.approx(1.0810, abs=1e-4)
    with pytest.raises(ValidationError):
        eig_upper_cgy(sp, [[0]])


def test_cgy_matched_and_improved():
    sp = three_cluster_space()
    fam = make_family(sp, [[0], [1]])
    matched = eig_upper_cgy_matched(sp, fam)
    assert matched.family.k == 3
    with pytest.raises(ValidationError):
        eig_upper_cgy_improved(sp, [[0], [1]], 2, 1.5)
    imp = eig_upper_cgy_improved(sp, [[0], [1]], 2, 1.5, experimental=True)
    base = eig_upper_cgy(sp, [[0], [1]])
    assert imp.value == pytest.approx(base.value * 1.5 ** 2)
    assert "experimental" in imp.flags


def test_compare_cgy_examples():
    cmp = compare_cgy(0.25, 0.25)
    assert cmp.lhs == pytest.approx(0.25 ** (1 + C))
    assert cmp.lhs == pytest.approx(0.14312, abs=1e-5)
    assert cmp.rhs == pytest.approx(4 ** C * 0.25 ** (1 - C))
    assert cmp.rhs == pytest.approx(0.76283, abs=1e-5)
    assert cmp.verdict == "ours"
    assert compare_cgy(0.25, 1e-9).verdict == "theirs"
    with pytest.raises(ValidationError):
        compare_cgy(0.0, 0.5)


@given(st.floats(1e-6, 1.0), st.floats(1e-6, 1.0), st.floats(0.1, 10))
@settings(max_examples=300)
def test_compare_cgy_matches_direct_comparison(a1, a0, r):
    assume(a0 <= a1)
    cmp = compare_cgy(a1, a0)
    assume(abs(math.log(cmp.lhs / cmp.rhs)) > 1e-9)
    ours, theirs = matched_values(a1, a0, r)
    assert (cmp.verdict == "ours") == (ours <= theirs)


def test_search_cycle():
    ch = chain_from_graph(cycle(12))
    res = search_families(ch, 2, budget=100000)
    assert res.method.startswith("exhaustive")
    fam = res.best.family
    assert in_delta_k(fam.measures) and fam.separation >= 2
    antipodal = eig_upper_main(ch, make_family(ch, [[0, 1, 2, 3], [6, 7, 8, 9]]))
    assert res.best.exact <= antipodal.exact
    assert res.best.exact >= spectrum(ch)[2]


def test_search_budget_one_and_infeasible():
    ch = chain_from_graph(cycle(12))
    one = search_families(ch, 2, budget=1)
    assert one.evaluations == 1
    with pytest.raises(NoFeasibleFamily):
        search_families(ch, 12)


def test_search_is_deterministic_with_annealing():
    ch = chain_from_graph(cycle(20))
    a = search_families(ch, 2, budget=300, seed=7)
    b = search_families(ch, 2, budget=300, seed=7)
    assert a.method == "annealing"
    assert a.to_json() == b.to_json()
    fam = a.best.family
    assert in_delta_k(fam.measures) and fam.separation >= 2
