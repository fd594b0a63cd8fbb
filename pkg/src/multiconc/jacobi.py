"""Cyclic Jacobi eigensolver for dense real symmetric matrices."""

from __future__ import annotations

import numpy as np

OFFDIAG_TOL = 1e-12
MAX_SWEEPS = 100


def off_norm(a: np.ndarray) -> float:
    """Frobenius norm of the strictly off-diagonal part."""
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(off * off)))


def jacobi_eigh(a, tol: float = OFFDIAG_TOL, max_sweeps: int = MAX_SWEEPS):
    """Eigen-decomposition ``a = V diag(w) V^T`` by cyclic Jacobi rotations.

    Sweeps row by row over the upper triangle, annihilating each pivot with
    the numerically stable rotation of Rutishauser, until the off-diagonal
    Frobenius norm drops below ``tol`` (relative to ``max(1, ||a||_F)``).

    Returns
    -------
    w : ndarray
        Eigenvalues in ascending order.
    v : ndarray
        Orthonormal eigenvectors as columns, matching ``w``.
    sweeps : int
        Number of sweeps performed.
    """
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    a = 0.5 * (a + a.T)
    v = np.eye(n)
    threshold = tol * max(1.0, float(np.linalg.norm(a)))
    sweeps = 0
    while off_norm(a) >= threshold:
        if sweeps == max_sweeps:
            raise RuntimeError(f"Jacobi did not converge in {max_sweeps} sweeps "
                               f"(off-diagonal norm {off_norm(a):.3e})")
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                elif theta != 0:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                else:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order], sweeps
