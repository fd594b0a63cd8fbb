"""Small graph builders and hypothesis strategies shared by the tests."""

import numpy as np
from hypothesis import strategies as st

from multiconc.space import chain_from_graph, validate_space


def cycle(n):
    a = np.zeros((n, n), dtype=int)
    for i in range(n):
        a[i, (i + 1) % n] = a[(i + 1) % n, i] = 1
    return a


def path(n):
    a = np.zeros((n, n), dtype=int)
    for i in range(n - 1):
        a[i, i + 1] = a[i + 1, i] = 1
    return a


def complete(n):
    return np.ones((n, n), dtype=int) - np.eye(n, dtype=int)


def dumbbell():
    """Two 4-leaf stars whose centres are joined by a path of length 4.

    Under the simple walk each star carries mass 3/8 and the three inner
    path vertices 1/12 each.
    """
    n = 13
    a = np.zeros((n, n), dtype=int)

    def link(i, j):
        a[i, j] = a[j, i] = 1

    for leaf in range(1, 5):
        link(0, leaf)
        link(8, 8 + leaf)
    for i, j in ((0, 5), (5, 6), (6, 7), (7, 8)):
        link(i, j)
    return chain_from_graph(a)


def random_connected(rng, n, extra=0.3):
    a = np.zeros((n, n), dtype=int)
    for i in range(1, n):
        j = int(rng.integers(i))
        a[i, j] = a[j, i] = 1
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < extra:
                a[i, j] = a[j, i] = 1
    return a


def random_space(rng, n):
    """Shortest-path metric of random positive edge weights on a complete graph."""
    w = rng.uniform(0.5, 3.0, size=(n, n))
    w = np.triu(w, 1)
    w = w + w.T
    d = w.copy()
    for k in range(n):
        d = np.minimum(d, d[:, k, None] + d[None, k, :])
    np.fill_diagonal(d, 0.0)
    mu = rng.uniform(0.1, 1.0, size=n)
    return validate_space(d, mu / mu.sum())


@st.composite
def chains(draw, n_min=3, n_max=8):
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    n = draw(st.integers(n_min, n_max))
    walk = draw(st.sampled_from(["simple-walk", "metropolis-uniform"]))
    return chain_from_graph(random_connected(rng, n), walk)


@st.composite
def spaces(draw, n_min=2, n_max=8):
    seed = draw(st.integers(0, 2**32 - 1))
    n = draw(st.integers(n_min, n_max))
    return random_space(np.random.default_rng(seed), n)
