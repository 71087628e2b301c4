"""Symmetric tensors stored by permutation class, and the combinatorics around them.

A tensor that is invariant under every permutation of its indices is fully
determined by one value per sorted index tuple.  This module provides that
canonical storage, the multinomial bookkeeping needed elsewhere, and the
basic form evaluations (multilinear and homogeneous).

Indices are 0-based throughout the in-memory API.
"""

from __future__ import annotations

import math
from collections import Counter
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence, Tuple, Union

import numpy as np

__all__ = [
    "SuperSymmetricTensor",
    "canonical_index",
    "class_size",
    "multinomial",
    "enumerate_signatures",
    "symmetrize",
    "eval_multilinear",
    "eval_homogeneous",
    "rank_one",
    "inner",
    "identity_power",
    "random_gaussian",
    "random_uniform",
]

Index = Tuple[int, ...]


@lru_cache(maxsize=None)
def _class_table(n: int, m: int):
    """Permutation-class bookkeeping for a dense (n,)*m array.

    Returns ``(keys, class_id, counts)`` where `keys` lists the canonical
    (sorted) index tuples in lexicographic order, `class_id` maps every
    row-major flat index to its position in `keys`, and `counts[c]` is the
    number of distinct permutations in class c.
    """
    grids = np.indices((n,) * m).reshape(m, -1)
    canon = np.sort(grids, axis=0).T
    uniq, class_id = np.unique(canon, axis=0, return_inverse=True)
    keys = [tuple(int(i) for i in row) for row in uniq]
    counts = np.bincount(class_id.ravel(), minlength=len(keys))
    return keys, class_id.ravel(), counts


@lru_cache(maxsize=None)
def _class_lookup(n: int, m: int) -> Mapping[Index, int]:
    keys, _, _ = _class_table(n, m)
    return {key: c for c, key in enumerate(keys)}


def canonical_index(idx: Sequence[int], n: int) -> Index:
    """Sort `idx` non-decreasingly after checking every component is in 0..n-1."""
    key = tuple(sorted(int(i) for i in idx))
    if key and (key[0] < 0 or key[-1] >= n):
        raise ValueError(f"index {tuple(idx)} out of range for dimension {n}")
    return key


def class_size(idx: Sequence[int]) -> int:
    """Number of distinct permutations of `idx`: m!/prod(count_j!)."""
    m = len(idx)
    size = math.factorial(m)
    for c in Counter(idx).values():
        size //= math.factorial(c)
    return size


def multinomial(d: int, k: Sequence[int]) -> int:
    """d!/prod(k_j!) for a signature k with sum(k) = d."""
    k = tuple(int(v) for v in k)
    if any(v < 0 for v in k) or sum(k) != d:
        raise ValueError(f"signature {k} does not sum to {d}")
    out = math.factorial(d)
    for v in k:
        out //= math.factorial(v)
    return out


def enumerate_signatures(n: int, d: int) -> list:
    """All n-tuples of non-negative integers summing to d, lexicographically."""
    if n < 1 or d < 0:
        raise ValueError("need n >= 1 and d >= 0")
    out = []

    def rec(prefix: Index, remaining: int, slots: int) -> None:
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for v in range(remaining + 1):
            rec(prefix + (v,), remaining - v, slots - 1)

    rec((), d, n)
    return out


class SuperSymmetricTensor:
    """Order-m, dimension-n tensor invariant under all index permutations.

    One value is stored per permutation class, keyed by the sorted index
    tuple; reading any permuted index returns the canonical entry, and
    absent classes read as 0.  Values are immutable after construction, so
    instances may be shared freely across threads.

    Parameters
    ----------
    n : int
        Dimension of every mode.
    m : int
        Tensor order.
    values : mapping or iterable of (index, value), optional
        Entries to store.  Indices are canonicalized; two entries landing in
        the same class is an error.
    """

    __slots__ = ("n", "m", "_values", "_dense")

    def __init__(self, n: int, m: int,
                 values: Union[Mapping, Iterable, None] = None):
        if n < 1 or m < 1:
            raise ValueError("dimension and order must be positive")
        self.n = int(n)
        self.m = int(m)
        stored: dict = {}
        if values is not None:
            items = values.items() if isinstance(values, Mapping) else values
            for idx, v in items:
                key = canonical_index(idx, self.n)
                if len(key) != self.m:
                    raise ValueError(f"index {idx} has {len(key)} components, "
                                     f"expected {self.m}")
                if key in stored:
                    raise ValueError(f"duplicate entry for class {key}")
                stored[key] = float(v)
        self._values = stored
        self._dense = None

    def __getitem__(self, idx) -> float:
        return self._values.get(canonical_index(idx, self.n), 0.0)

    def items(self) -> Iterator:
        """Iterate (canonical index, value) over stored classes."""
        return iter(self._values.items())

    def __len__(self) -> int:
        return len(self._values)

    def to_dense(self) -> np.ndarray:
        """Dense (n,)*m array; computed once and cached."""
        if self._dense is None:
            keys, class_id, _ = _class_table(self.n, self.m)
            lookup = _class_lookup(self.n, self.m)
            class_values = np.zeros(len(keys))
            for key, v in self._values.items():
                class_values[lookup[key]] = v
            self._dense = class_values[class_id].reshape((self.n,) * self.m)
            self._dense.setflags(write=False)
        return self._dense

    def norm(self) -> float:
        """Frobenius norm over the full index space."""
        return math.sqrt(inner(self, self))

    def _combine(self, other: "SuperSymmetricTensor", sign: float):
        if (self.n, self.m) != (other.n, other.m):
            raise ValueError("shape mismatch")
        keys = set(self._values) | set(other._values)
        vals = {k: self._values.get(k, 0.0) + sign * other._values.get(k, 0.0)
                for k in keys}
        return SuperSymmetricTensor(self.n, self.m, vals)

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __mul__(self, scalar):
        scalar = float(scalar)
        return SuperSymmetricTensor(
            self.n, self.m, {k: scalar * v for k, v in self._values.items()})

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return (f"SuperSymmetricTensor(n={self.n}, m={self.m}, "
                f"classes={len(self._values)})")


def symmetrize(t: np.ndarray) -> SuperSymmetricTensor:
    """Average `t` over each permutation class.

    This is the orthogonal projection onto the symmetric subspace, computed
    with exact class multiplicities rather than by enumerating all m!
    permutations.  Idempotent: symmetrizing an already-symmetric array
    reproduces its values.
    """
    t = np.asarray(t, dtype=float)
    if t.ndim < 1 or len(set(t.shape)) != 1:
        raise ValueError(f"cubical array required, got shape {t.shape}")
    n, m = t.shape[0], t.ndim
    keys, class_id, counts = _class_table(n, m)
    means = np.bincount(class_id, weights=t.ravel(), minlength=len(keys)) / counts
    return SuperSymmetricTensor(n, m, dict(zip(keys, means)))


def _as_dense(f) -> np.ndarray:
    if isinstance(f, SuperSymmetricTensor):
        return f.to_dense()
    return np.asarray(f, dtype=float)


def eval_multilinear(f, xs: Sequence[np.ndarray]) -> float:
    """Contract `f` with one vector per mode.

    `f` may be a SuperSymmetricTensor or any dense array; `xs` must supply
    exactly one vector per mode, with matching lengths.
    """
    t = _as_dense(f)
    if t.ndim != len(xs):
        raise ValueError(f"need {t.ndim} vectors, got {len(xs)}")
    out = t
    for k, x in enumerate(xs):
        x = np.asarray(x, dtype=float)
        if x.shape != (t.shape[k],):
            raise ValueError(f"vector {k} has length {x.size}, "
                             f"expected {t.shape[k]}")
        out = np.tensordot(out, x, axes=([0], [0]))
    return float(out)


def eval_homogeneous(f: SuperSymmetricTensor, x: np.ndarray) -> float:
    """Value of the degree-m form f(x,...,x), summed over canonical classes.

    Each stored class contributes class_size(idx) * value * prod(x[idx]);
    this equals eval_multilinear with m copies of x.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (f.n,):
        raise ValueError(f"vector length {x.size} does not match dimension {f.n}")
    total = 0.0
    for key, v in f.items():
        if v == 0.0:
            continue
        total += class_size(key) * v * float(np.prod(x[list(key)]))
    return total


def rank_one(lam: float, a: np.ndarray, m: int) -> SuperSymmetricTensor:
    """The tensor lam * a (x) ... (x) a with m factors."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 1 or m < 1:
        raise ValueError("need a vector and a positive order")
    keys, _, _ = _class_table(a.size, m)
    vals = {k: float(lam) * float(np.prod(a[list(k)])) for k in keys}
    return SuperSymmetricTensor(a.size, m, vals)


def inner(f: SuperSymmetricTensor, g: SuperSymmetricTensor) -> float:
    """Inner product over the full index space, via class multiplicities."""
    if (f.n, f.m) != (g.n, g.m):
        raise ValueError("shape mismatch")
    shared = set(f._values) & set(g._values)
    return float(sum(class_size(k) * f._values[k] * g._values[k]
                     for k in shared))


def identity_power(n: int, d: int) -> SuperSymmetricTensor:
    """Symmetric order-2d tensor S with S(x,...,x) = (x.x)**d."""
    if d < 1:
        raise ValueError("need d >= 1")
    t = np.eye(n)
    for _ in range(d - 1):
        t = np.multiply.outer(t, np.eye(n))
    return symmetrize(t)


def random_gaussian(n: int, m: int, seed: int) -> SuperSymmetricTensor:
    """Symmetrization of an i.i.d. standard-normal (n,)*m array.

    Uses numpy's default_rng (PCG64); a fixed seed gives identical tensors
    across calls within this implementation.
    """
    rng = np.random.default_rng(seed)
    return symmetrize(rng.standard_normal((n,) * m))


def random_uniform(n: int, m: int, seed: int) -> SuperSymmetricTensor:
    """Symmetrization of an i.i.d. uniform(-1, 1) (n,)*m array."""
    rng = np.random.default_rng(seed)
    return symmetrize(rng.uniform(-1.0, 1.0, size=(n,) * m))
