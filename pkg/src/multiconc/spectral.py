"""Spectrum of ``-L = I - p`` on ``L^2(mu)`` and Courant-Fischer utilities."""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateBasis, DimensionMismatch, NotReversible
from .jacobi import jacobi_eigh
from .space import ReversibleChain

SYMMETRY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending eigenvalues, counted with multiplicity.

    ``eigenvectors[:, i]`` is the eigenfunction of ``eigenvalues[i]``,
    normalised in the ``mu``-weighted inner product.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None
    sweeps: int = 0

    def __len__(self):
        return len(self.eigenvalues)

    def __getitem__(self, k):
        return float(self.eigenvalues[k])

    def to_json(self) -> dict:
        return {"eigenvalues": [float(x) for x in self.eigenvalues]}

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("index,eigenvalue\n")
        for i, lam in enumerate(self.eigenvalues):
            buf.write(f"{i},{float(lam)!r}\n")
        return buf.getvalue()


def symmetrized_generator(chain: ReversibleChain):
    """``S = D^{1/2} (I - p) D^{-1/2}`` with ``D = diag(mu)`` and its asymmetry."""
    root = np.sqrt(chain.mu)
    s = root[:, None] * (np.eye(chain.n) - chain.p) / root[None, :]
    residual = float(np.abs(s - s.T).max())
    if residual > SYMMETRY_TOL:
        i, j = np.unravel_index(int(np.argmax(np.abs(s - s.T))), s.shape)
        raise NotReversible(int(i), int(j), residual)
    return 0.5 * (s + s.T), residual


def spectrum(chain: ReversibleChain) -> Spectrum:
    s, _ = symmetrized_generator(chain)
    w, v, sweeps = jacobi_eigh(s)
    funcs = v / np.sqrt(chain.mu)[:, None]
    w.setflags(write=False)
    funcs.setflags(write=False)
    return Spectrum(w, funcs, sweeps)


def _vec(chain, f, name="f"):
    f = np.asarray(f, dtype=float)
    if f.shape != (chain.n,):
        raise DimensionMismatch(f"{name} has shape {f.shape}, expected ({chain.n},)")
    return f


def inner(chain: ReversibleChain, f, g) -> float:
    """``<f, g>_mu``."""
    return float(np.sum(_vec(chain, f) * _vec(chain, g, "g") * chain.mu))


def dirichlet(chain: ReversibleChain, f, g=None) -> float:
    """``E(f, g) = 1/2 sum_{x,y} (f(y) - f(x)) (g(y) - g(x)) p(x, y) mu(x)``."""
    f = _vec(chain, f)
    g = f if g is None else _vec(chain, g, "g")
    df = f[None, :] - f[:, None]
    dg = g[None, :] - g[:, None]
    return float(0.5 * np.sum(df * dg * chain.p * chain.mu[:, None]))


def gram_matrices(chain: ReversibleChain, basis: Sequence):
    """Energy and mass Gram matrices of a family of functions."""
    b = np.array([_vec(chain, f, "basis vector") for f in basis])
    flow = chain.p * chain.mu[:, None]
    mass = (b * chain.mu) @ b.T
    # E(f, g) = <f, (I - p) g>_mu
    energy = (b * chain.mu) @ b.T - b @ flow @ b.T
    return 0.5 * (energy + energy.T), 0.5 * (mass + mass.T)


def rayleigh_sup_on_span(chain: ReversibleChain, basis: Sequence) -> float:
    """``sup_{f in span(basis)} E(f, f) / mu(f^2)``.

    Computed exactly as the top eigenvalue of the pencil (energy, mass)
    restricted to the span.  By Courant-Fischer this is an upper bound on
    ``lambda^(m-1)`` for an ``m``-dimensional span.
    """
    if len(basis) == 0:
        raise DegenerateBasis("DegenerateBasis: empty basis")
    energy, mass = gram_matrices(chain, basis)
    scale = np.sqrt(np.diag(mass))
    if np.any(scale <= 0):
        raise DegenerateBasis("DegenerateBasis: a basis vector vanishes")
    energy = energy / np.outer(scale, scale)
    mass = mass / np.outer(scale, scale)
    mw, mv, _ = jacobi_eigh(mass)
    if mw[0] <= 1e-12 * mw[-1]:
        raise DegenerateBasis(f"DegenerateBasis: mass Gram matrix is singular "
                              f"(smallest eigenvalue {mw[0]:.3g})")
    whiten = mv / np.sqrt(mw)
    w, _, _ = jacobi_eigh(whiten.T @ energy @ whiten)
    return float(w[-1])
