"""Closed-form building blocks of the ADMM iterations.

Three operators: projection onto the trace-one symmetric affine set,
singular-value shrinkage, and projection onto the PSD cone.  A fourth
variant projects onto the trace-one partial-symmetric set used by the
bi-quadratic solver.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .tensors import _class_table, enumerate_signatures, multinomial

__all__ = [
    "alpha",
    "project_C",
    "shrink_nuclear",
    "project_psd",
    "project_partial_C",
]


def alpha(k, d: int) -> float:
    """Diagonal-class weight (d!/prod k_j!) / ((2d)!/prod (2k_j)!).

    Strictly positive for every signature k summing to d.
    """
    doubled = tuple(2 * int(v) for v in k)
    return multinomial(d, k) / multinomial(2 * d, doubled)


@lru_cache(maxsize=None)
def _projection_tables(n: int, d: int):
    """Constants for project_C at a given (n, d).

    For each signature k summing to d: the class id of the even-diagonal
    index (each j repeated 2*k_j), the multinomial weight d!/prod(k_j!),
    and alpha(k, d).
    """
    lookup = {key: c for c, key in enumerate(_class_table(n, 2 * d)[0])}
    diag_ids, weights, alphas = [], [], []
    for k in enumerate_signatures(n, d):
        key = tuple(j for j in range(n) for _ in range(2 * k[j]))
        diag_ids.append(lookup[key])
        weights.append(multinomial(d, k))
        alphas.append(alpha(k, d))
    return (np.asarray(diag_ids), np.asarray(weights, dtype=float),
            np.asarray(alphas, dtype=float))


def project_C(Z: np.ndarray, n: int, d: int) -> np.ndarray:
    """Nearest matrix to Z whose tensor is symmetric with unit trace.

    Computed in canonical tensor coordinates: class-average Z, then correct
    the even-diagonal classes (indices where every value occurs an even
    number of times) by (lambda/2) * alpha(k, d), with lambda chosen in
    closed form so the trace is one.  Off-diagonal classes are the class
    averages unchanged.
    """
    Z = np.asarray(Z, dtype=float)
    size = n ** d
    if Z.shape != (size, size):
        raise ValueError(f"expected a {size}x{size} matrix, got {Z.shape}")
    keys, class_id, counts = _class_table(n, 2 * d)
    zbar = np.bincount(class_id, weights=Z.ravel(), minlength=len(keys)) / counts
    diag_ids, weights, alphas = _projection_tables(n, d)
    lam = 2.0 * (1.0 - float(weights @ zbar[diag_ids])) / float(weights @ alphas)
    xvals = zbar.copy()
    xvals[diag_ids] += 0.5 * lam * alphas
    return xvals[class_id].reshape(size, size)


def shrink_nuclear(M: np.ndarray, tau: float) -> np.ndarray:
    """Soft-threshold the singular values of a symmetric matrix by tau.

    Unique minimizer of tau*||Y||_* + 0.5*||Y - M||_F^2.  For symmetric M
    the SVD is realized through the eigendecomposition: the singular values
    are |eig| and the sign folds into the left factor.
    """
    if tau < 0:
        raise ValueError("shrinkage threshold must be nonnegative")
    M = np.asarray(M, dtype=float)
    w, V = np.linalg.eigh(0.5 * (M + M.T))
    shrunk = np.sign(w) * np.maximum(np.abs(w) - tau, 0.0)
    return (V * shrunk) @ V.T


def project_psd(M: np.ndarray) -> np.ndarray:
    """Nearest positive-semidefinite matrix in Frobenius norm.

    Eigendecompose and clip negative eigenvalues at exactly zero.
    """
    M = np.asarray(M, dtype=float)
    w, V = np.linalg.eigh(0.5 * (M + M.T))
    return (V * np.maximum(w, 0.0)) @ V.T


def project_partial_C(Z: np.ndarray, n: int, m: int) -> np.ndarray:
    """Nearest nm x nm matrix whose tensor is partial-symmetric with unit trace.

    Derivation: the feasible set is {x : x in V, c.x = 1} with V the
    partial-symmetric subspace and c the indicator of the (i,j,i,j)
    positions (the matrix diagonal).  Writing P for the orthogonal
    projector onto V, the KKT conditions give
        x = P(z) + nu * P(c),  nu = (1 - c.P(z)) / (c.P(c)).
    P averages each entry over its 4-element orbit {e, (13), (24),
    (13)(24)}; every (i,j,i,j) position is a fixed point of that group, so
    P(c) = c and c.c = nm.  Hence: orbit-average, then shift the diagonal
    uniformly by (1 - trace)/(nm).
    """
    Z = np.asarray(Z, dtype=float)
    if Z.shape != (n * m, n * m):
        raise ValueError(f"expected a {n * m}x{n * m} matrix, got {Z.shape}")
    t = Z.reshape(n, m, n, m)
    avg = 0.5 * (t + t.transpose(2, 1, 0, 3))
    avg = 0.5 * (avg + avg.transpose(0, 3, 2, 1))
    out = avg.copy()
    shift = (1.0 - float(np.einsum("ijij->", avg))) / (n * m)
    i = np.arange(n)[:, None]
    j = np.arange(m)[None, :]
    out[i, j, i, j] += shift
    return out.reshape(n * m, n * m)
