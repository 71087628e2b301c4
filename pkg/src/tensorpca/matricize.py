"""Reshaping maps between tensors, matrices and vectors, plus rank diagnostics.

The square matricization of an even-order cubical tensor splits the 2d
indices into a leading and a trailing half, each enumerated in row-major
order; vectorization enumerates all indices row-major.  Both are therefore
plain C-order reshapes, which the tests cross-check against the explicit
index formulas.
"""

from __future__ import annotations

from typing import Tuple

import numpy as np

from .tensors import SuperSymmetricTensor, _class_table

__all__ = [
    "matr",
    "matr_inv",
    "vect",
    "vect_inv",
    "is_super_symmetric",
    "rank_one_ratio",
    "matr_partial",
    "mode_n_unfold",
]


def matr(f: SuperSymmetricTensor) -> np.ndarray:
    """Square matricization of an even-order tensor to an n**d x n**d matrix.

    The result is symmetric because f is, and its trace equals the
    multinomial-weighted sum of the even-diagonal entries of f.
    """
    if f.m % 2:
        raise ValueError("square matricization needs an even order")
    d = f.m // 2
    size = f.n ** d
    return np.array(f.to_dense().reshape(size, size))


def matr_inv(X: np.ndarray, n: int, d: int) -> np.ndarray:
    """Inverse of matr: reshape an n**d x n**d matrix to an order-2d array.

    The output is a general dense array; it is symmetric exactly when X
    lies in the image of matr on symmetric tensors (use is_super_symmetric
    to test feasibility).
    """
    X = np.asarray(X, dtype=float)
    size = n ** d
    if X.shape != (size, size):
        raise ValueError(f"expected a {size}x{size} matrix, got {X.shape}")
    return X.reshape((n,) * (2 * d))


def vect(t) -> np.ndarray:
    """Row-major vectorization of a tensor (or SuperSymmetricTensor)."""
    if isinstance(t, SuperSymmetricTensor):
        t = t.to_dense()
    return np.asarray(t, dtype=float).reshape(-1)


def vect_inv(v: np.ndarray, dims: Tuple[int, ...]) -> np.ndarray:
    """Inverse of vect for the given mode sizes."""
    v = np.asarray(v, dtype=float)
    if v.size != int(np.prod(dims)):
        raise ValueError(f"length {v.size} does not factor as {dims}")
    return v.reshape(dims)


def is_super_symmetric(t: np.ndarray, tol: float = 1e-12):
    """Whether a cubical array is permutation-invariant within `tol`.

    Returns (flag, max_violation) where the violation is the largest
    absolute deviation of an entry from its class mean.
    """
    t = np.asarray(t, dtype=float)
    if len(set(t.shape)) != 1:
        raise ValueError(f"cubical array required, got shape {t.shape}")
    n, m = t.shape[0], t.ndim
    keys, class_id, counts = _class_table(n, m)
    flat = t.ravel()
    means = np.bincount(class_id, weights=flat, minlength=len(keys)) / counts
    violation = float(np.max(np.abs(flat - means[class_id])))
    return violation <= tol, violation


def rank_one_ratio(X: np.ndarray):
    """Second-to-first singular value ratio and leading eigenpair of X.

    For a symmetric matrix the singular values are the absolute eigenvalues,
    so one eigendecomposition suffices.  A ratio at or below the rank-one
    tolerance certifies a rank-one matrix.  The returned eigenvector has its
    largest-magnitude component positive.
    """
    X = np.asarray(X, dtype=float)
    w, V = np.linalg.eigh(0.5 * (X + X.T))
    mags = np.abs(w)
    order = np.argsort(mags)[::-1]
    s1 = mags[order[0]]
    if s1 == 0.0:
        raise ValueError("zero matrix has no rank-one ratio")
    s2 = mags[order[1]] if X.shape[0] > 1 else 0.0
    vec = V[:, order[0]].copy()
    if vec[np.argmax(np.abs(vec))] < 0:
        vec = -vec
    return s2 / s1, (float(w[order[0]]), vec)


def matr_partial(g: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Square rearrangement of an (n, m, n, m) partial-symmetric array.

    Row k = (i1)*m + i2 and column l = (i3)*m + i4, i.e. a C-order reshape
    to nm x nm.  The matrix transpose corresponds to swapping the index
    pairs, which partial symmetry leaves invariant, so the output is
    symmetric; inputs violating partial symmetry beyond `tol` are rejected.
    """
    g = np.asarray(g, dtype=float)
    if g.ndim != 4 or g.shape[0] != g.shape[2] or g.shape[1] != g.shape[3]:
        raise ValueError(f"expected an (n, m, n, m) array, got {g.shape}")
    violation = max(float(np.max(np.abs(g - g.transpose(2, 1, 0, 3)))),
                    float(np.max(np.abs(g - g.transpose(0, 3, 2, 1)))))
    if violation > tol:
        raise ValueError(f"partial symmetry violated by {violation:.3e}")
    n, m = g.shape[0], g.shape[1]
    return g.reshape(n * m, n * m)


def mode_n_unfold(t: np.ndarray, mode: int) -> np.ndarray:
    """Mode-`mode` unfolding: rows indexed by the mode, columns by the rest.

    Columns enumerate the remaining indices with the first remaining index
    varying fastest.
    """
    t = np.asarray(t, dtype=float)
    if not 0 <= mode < t.ndim:
        raise ValueError(f"mode {mode} out of range for order {t.ndim}")
    return np.reshape(np.moveaxis(t, mode, 0), (t.shape[mode], -1), order="F")
