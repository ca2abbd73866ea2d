"""Invariant planes of real square matrices."""
from __future__ import annotations

import numpy as np
import scipy.linalg


def invariant_plane(g, imag_tol: float = 1e-12) -> tuple[np.ndarray, str]:
    """An orthonormal basis (as columns) of a ``g``-invariant subspace.

    If ``g`` has a non-real eigenvalue ``a + bi`` with eigenvector
    ``u + iv`` then ``g u = a u - b v`` and ``g v = b u + a v``, so
    ``span(u, v)`` is an invariant plane (branch ``"complex"``).  Otherwise
    the leading two real Schur vectors span one (branch ``"real"``).  A
    1x1 input returns its single axis.
    """
    g = np.asarray(g, dtype=float)
    n = g.shape[0]
    if g.shape != (n, n):
        raise ValueError("g must be square")
    if n == 1:
        return np.ones((1, 1)), "line"
    vals, vecs = np.linalg.eig(g)
    scale = max(1.0, float(np.max(np.abs(vals))))
    idx = [k for k in range(n) if vals[k].imag > imag_tol * scale]
    if idx:
        w = vecs[:, idx[0]]
        basis = np.column_stack([w.real, w.imag])
        branch = "complex"
    else:
        _, Z = scipy.linalg.schur(g, output="real")
        basis = Z[:, :2]
        branch = "real"
    q, _ = np.linalg.qr(basis)
    return q, branch


def plane_residual(g, basis) -> float:
    """``max |(I - P) g B|`` where ``P`` projects onto ``span(B)``."""
    g = np.asarray(g, dtype=float)
    q, _ = np.linalg.qr(basis)
    gb = g @ q
    return float(np.max(np.abs(gb - q @ (q.T @ gb))))
