"""Symmetric-matrix primitives used by the certificate machinery.

Everything here operates on dense real symmetric matrices.  The 2x2 case
is closed-form because it sits on the solver's innermost loop; larger
sizes fall through to LAPACK via numpy.
"""

from __future__ import annotations

import math

import numpy as np


def sym_eig(M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors of symmetric M."""
    M = np.asarray(M, dtype=float)
    if M.shape == (2, 2):
        w, V = _eig2(M[0, 0], 0.5 * (M[0, 1] + M[1, 0]), M[1, 1])
        return np.array(w), np.array(V)
    return np.linalg.eigh(0.5 * (M + M.T))


def _eig2(a: float, b: float, d: float) -> tuple[tuple[float, float], list[list[float]]]:
    # closed-form spectral decomposition of [[a, b], [b, d]]
    half_tr = 0.5 * (a + d)
    rad = math.hypot(0.5 * (a - d), b)
    lo, hi = half_tr - rad, half_tr + rad
    if rad <= 1e-300 or abs(b) <= 1e-18 * (abs(a) + abs(d) + 1.0):
        if a <= d:
            return (a, d), [[1.0, 0.0], [0.0, 1.0]]
        return (d, a), [[0.0, 1.0], [1.0, 0.0]]
    # eigenvector for hi: (b, hi - a), for lo: orthogonal complement
    vx, vy = b, hi - a
    nrm = math.hypot(vx, vy)
    vx, vy = vx / nrm, vy / nrm
    return (lo, hi), [[-vy, vx], [vx, vy]]


def eig_bounds(M: np.ndarray) -> tuple[float, float]:
    """(smallest, largest) eigenvalue of symmetric M."""
    M = np.asarray(M, dtype=float)
    if M.shape == (2, 2):
        a, b, d = M[0, 0], 0.5 * (M[0, 1] + M[1, 0]), M[1, 1]
        half_tr = 0.5 * (a + d)
        rad = math.hypot(0.5 * (a - d), b)
        return half_tr - rad, half_tr + rad
    w = np.linalg.eigvalsh(0.5 * (M + M.T))
    return float(w[0]), float(w[-1])


def cholesky(M: np.ndarray) -> np.ndarray:
    """Lower-triangular Cholesky factor; raises ValueError if M is not PD."""
    try:
        return np.linalg.cholesky(np.asarray(M, dtype=float))
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"not positive definite: {exc}") from exc


def quad_norm(x: np.ndarray, P: np.ndarray) -> float:
    """Ellipsoidal norm sqrt(x' P x) for symmetric positive semidefinite P."""
    x = np.asarray(x, dtype=float)
    v = float(x @ np.asarray(P, dtype=float) @ x)
    # mild negative round-off from a PSD P is clamped, genuine indefiniteness is not
    if v < -1e-10 * (1.0 + float(x @ x)):
        raise ValueError(f"quad_norm: negative quadratic form {v}")
    return math.sqrt(max(v, 0.0))


def project_eig_floor(M: np.ndarray, floor: float = 1.0) -> np.ndarray:
    """Frobenius projection onto {P symmetric : P >= floor * I}.

    Clamps every eigenvalue below `floor` up to it.
    """
    M = np.asarray(M, dtype=float)
    if M.shape == (2, 2):
        a, b, d = M[0, 0], 0.5 * (M[0, 1] + M[1, 0]), M[1, 1]
        (lo, hi), V = _eig2(a, b, d)
        if lo >= floor:
            return np.array([[a, b], [b, d]])
        lo_c, hi_c = max(lo, floor), max(hi, floor)
        (v0x, v0y), (v1x, v1y) = (V[0][0], V[1][0]), (V[0][1], V[1][1])
        return np.array(
            [
                [lo_c * v0x * v0x + hi_c * v1x * v1x, lo_c * v0x * v0y + hi_c * v1x * v1y],
                [lo_c * v0x * v0y + hi_c * v1x * v1y, lo_c * v0y * v0y + hi_c * v1y * v1y],
            ]
        )
    w, V = np.linalg.eigh(0.5 * (M + M.T))
    if w[0] >= floor:
        return 0.5 * (M + M.T)
    return (V * np.maximum(w, floor)) @ V.T


def project_frobenius_ball(M: np.ndarray, radius: float) -> np.ndarray:
    """Frobenius projection onto {P : ||P||_F <= radius}."""
    M = np.asarray(M, dtype=float)
    nrm = float(np.sqrt(np.sum(M * M)))
    if nrm <= radius:
        return M.copy()
    return M * (radius / nrm)
