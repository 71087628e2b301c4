"""Turning a matrix solution into a tensor principal component.

Covers rank-one certification, eigenvector-to-x recovery, block-coordinate
refinement for solutions that miss the rank-one certificate, deflation, and
the end-to-end driver that also routes reducible inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from .matricize import is_super_symmetric, matr_inv, mode_n_unfold, rank_one_ratio
from .tensors import (SuperSymmetricTensor, eval_homogeneous, eval_multilinear,
                      identity_power, rank_one)

__all__ = [
    "PrincipalComponent",
    "NotRankOne",
    "MultilinearComponent",
    "MbiResult",
    "extract",
    "mbi_refine",
    "deflate",
    "solve_leading_pc",
]


@dataclass(frozen=True)
class PrincipalComponent:
    """Leading component of a symmetric form: value, unit argmax, certificate."""
    lambda_star: float
    x_star: np.ndarray
    certified: bool


@dataclass(frozen=True)
class NotRankOne:
    """Structured non-result: the matrix missed the rank-one certificate."""
    ratio: float
    spectrum: np.ndarray


@dataclass(frozen=True)
class MultilinearComponent:
    """Leading component of a multilinear form: value and one unit vector per mode."""
    lambda_star: float
    xs: Tuple[np.ndarray, ...]
    certified: bool


@dataclass(frozen=True)
class MbiResult:
    x: np.ndarray
    value: float
    sweeps: int
    converged: bool


def _unit(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    nrm = float(np.linalg.norm(x))
    if nrm == 0.0:
        raise ValueError("zero vector cannot be normalized")
    return x / nrm


def _recover_x(y: np.ndarray, n: int, d: int) -> np.ndarray:
    # y ~ vect of an order-d rank-one tensor; the dominant left singular
    # vector of its mode-0 unfolding is robust to small asymmetry
    if d == 1:
        return _unit(y)
    T = y.reshape((n,) * d)
    u, _, _ = np.linalg.svd(mode_n_unfold(T, 0), full_matrices=False)
    return _unit(u[:, 0])


def _fix_sign(F: SuperSymmetricTensor, x: np.ndarray) -> np.ndarray:
    plus = eval_homogeneous(F, x)
    minus = eval_homogeneous(F, -x)
    if minus > plus:
        return -x
    if minus == plus and x[np.argmax(np.abs(x))] < 0:
        return -x
    return x


def extract(F: SuperSymmetricTensor, X: np.ndarray, rank_tol: float = 1e-6
            ) -> Union[PrincipalComponent, NotRankOne]:
    """Recover (lambda*, x*) from a feasible matrix solution X.

    If the second-to-first singular value ratio of X is within `rank_tol`,
    the leading eigenvector is reshaped to an order-d tensor, x is read off
    as the dominant singular direction, the sign maximizing the form is
    chosen, and lambda* is the form's value at x.  Otherwise a NotRankOne
    carrying the spectrum is returned.

    Parameters
    ----------
    F : SuperSymmetricTensor
        The even-order tensor whose form is being maximized.
    X : ndarray
        Matrix feasible for the trace-one symmetric set.
    rank_tol : float
        Certification threshold on sigma_2/sigma_1.
    """
    if F.m % 2:
        raise ValueError("extraction needs an even order")
    n, d = F.n, F.m // 2
    X = np.asarray(X, dtype=float)
    if abs(float(np.trace(X)) - 1.0) > 1e-8:
        raise ValueError("X is infeasible: trace is not one")
    ok, violation = is_super_symmetric(matr_inv(X, n, d), tol=1e-8)
    if not ok:
        raise ValueError(f"X is infeasible: symmetry violated by {violation:.3e}")
    ratio, (_, y) = rank_one_ratio(X)
    if ratio > rank_tol:
        return NotRankOne(ratio, np.linalg.eigvalsh(X))
    x = _fix_sign(F, _recover_x(y, n, d))
    return PrincipalComponent(eval_homogeneous(F, x), x, True)


def _block_gradient(t: np.ndarray, xs: Sequence[np.ndarray], j: int) -> np.ndarray:
    out = np.moveaxis(t, j, 0)
    others = [xs[k] for k in range(len(xs)) if k != j]
    for x in reversed(others):
        out = np.tensordot(out, x, axes=([out.ndim - 1], [0]))
    return out


def mbi_refine(t, x0s: Sequence[np.ndarray], tol: float = 1e-10,
               max_sweeps: int = 1000) -> MbiResult:
    """Block-coordinate ascent on the multilinear form of a cubical tensor.

    Each step replaces one block with its normalized block gradient, which
    maximizes the form over that block and therefore never decreases the
    objective.  Sweeps stop when the relative improvement drops below `tol`
    or the sweep cap is hit (the best iterate is returned flagged either
    way).  The returned x is the block direction whose homogeneous value is
    largest, sign fixed toward the larger value.
    """
    if isinstance(t, SuperSymmetricTensor):
        t = t.to_dense()
    t = np.asarray(t, dtype=float)
    m = t.ndim
    if len(set(t.shape)) != 1:
        raise ValueError("block refinement needs a cubical tensor")
    if len(x0s) != m:
        raise ValueError(f"need {m} start blocks, got {len(x0s)}")
    xs = [_unit(x) for x in x0s]
    value = eval_multilinear(t, xs)
    converged = False
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        previous = value
        for j in range(m):
            g = _block_gradient(t, xs, j)
            norm_g = float(np.linalg.norm(g))
            if norm_g == 0.0:
                continue
            xs[j] = g / norm_g
            value = norm_g
        if abs(value - previous) <= tol * max(1.0, abs(previous)):
            converged = True
            break

    def homogeneous(x):
        return eval_multilinear(t, [x] * m)

    best = max(xs, key=lambda x: max(homogeneous(x), homogeneous(-x)))
    if homogeneous(-best) > homogeneous(best):
        best = -best
    elif homogeneous(-best) == homogeneous(best) and best[np.argmax(np.abs(best))] < 0:
        best = -best
    return MbiResult(best, homogeneous(best), sweeps, converged)


def _is_coquadratic_psd(t: np.ndarray, probes: int = 100, seed: int = 0,
                        tol: float = 1e-8) -> bool:
    # pairwise-repeated arguments must give a nonnegative multilinear value
    rng = np.random.default_rng(seed)
    n, m = t.shape[0], t.ndim
    d = m // 2
    scale = max(1.0, float(np.max(np.abs(t))))
    for _ in range(probes):
        half = [_unit(rng.standard_normal(n)) for _ in range(d)]
        xs = [v for v in half for _ in range(2)]
        if eval_multilinear(t, xs) < -tol * scale:
            return False
    return True


def _refine_not_rank_one(F: SuperSymmetricTensor, X: np.ndarray, x0: np.ndarray,
                         restarts: int, seed: int) -> np.ndarray:
    """Fallback for an uncertified solve: block ascent plus random restarts.

    The ascent target is the solution tensor when it passes the co-quadratic
    PSD probes (then its multilinear and homogeneous optima agree); the
    shifted original form is used otherwise.
    """
    n, m = F.n, F.m
    target = matr_inv(X, n, m // 2)
    if not _is_coquadratic_psd(target, seed=seed):
        target = (F + 6.0 * identity_power(n, m // 2)).to_dense()
    starts = [x0]
    rng = np.random.default_rng(seed)
    for _ in range(restarts):
        starts.append(_unit(rng.standard_normal(n)))
    candidates = [mbi_refine(target, [s] * m).x for s in starts]
    best = max(candidates, key=lambda x: eval_homogeneous(F, x))
    return _fix_sign(F, best)


def deflate(F: SuperSymmetricTensor, pc: PrincipalComponent) -> SuperSymmetricTensor:
    """Subtract the rank-one component lambda* x*^(x m) from F."""
    if not pc.certified:
        raise ValueError("refusing to deflate an uncertified component")
    return F - pc.lambda_star * rank_one(1.0, pc.x_star, F.m)


def solve_leading_pc(F, method: str = "sdp", cfg=None):
    """End-to-end driver: reduce if needed, solve, extract, refine.

    Parameters
    ----------
    F : SuperSymmetricTensor or ndarray
        Even-order symmetric tensors are solved directly; odd-order
        symmetric tensors are squared first; dense order-3 and order-4
        arrays take the bi-quadratic route; other even-order dense arrays
        are embedded into one larger symmetric tensor.
    method : {"sdp", "nnp"}
        Relaxation solved by the ADMM.
    cfg : SolverConfig, optional

    Returns
    -------
    (component, report)
        A PrincipalComponent for symmetric inputs, a MultilinearComponent
        for multilinear ones; the report is the underlying solver's.
    """
    from . import admm, extensions  # deferred: those modules import this one

    if cfg is None:
        cfg = admm.SolverConfig()
    if method not in ("nnp", "sdp"):
        raise ValueError(f"unknown method {method!r}")

    if isinstance(F, SuperSymmetricTensor):
        if F.m % 2 == 0:
            solver = admm.solve_nnp if method == "nnp" else admm.solve_sdp
            report = solver(F, cfg)
            pc = extract(F, report.X, cfg.rank_tol)
            if isinstance(pc, NotRankOne):
                x = _refine_not_rank_one(F, report.X, report.extracted_x,
                                         restarts=5, seed=cfg.seed)
                pc = PrincipalComponent(eval_homogeneous(F, x), x, False)
            return pc, report
        # odd order: maximize the squared norm of the once-contracted form
        G = extensions.odd_to_even(F)
        pc_even, report = solve_leading_pc(G, method, cfg)
        x = pc_even.x_star
        if eval_homogeneous(F, x) < 0:
            x = -x
        return PrincipalComponent(eval_homogeneous(F, x), x,
                                  pc_even.certified), report

    t = np.asarray(F, dtype=float)
    if t.ndim == 3:
        return extensions.solve_trilinear(t, cfg)
    if t.ndim == 4:
        return extensions.solve_quadrilinear(t, cfg)
    if t.ndim % 2 == 0:
        return extensions.solve_multilinear(t, method, cfg)
    raise ValueError(f"no solve route for a dense order-{t.ndim} array")
