"""Alternating-direction solvers for the two convex relaxations.

Both drivers split the feasible set between two blocks: X carries the
trace-one symmetric affine constraints (a closed-form projection), Y
carries the spectral part (nuclear shrinkage for the penalized model, PSD
projection for the semidefinite relaxation), and a multiplier ties them
together.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .extraction import _fix_sign, _recover_x
from .matricize import matr, rank_one_ratio
from .projection import project_C, project_psd, shrink_nuclear
from .tensors import SuperSymmetricTensor, eval_homogeneous

__all__ = [
    "SolverConfig",
    "SolveReport",
    "solve_nnp",
    "solve_sdp",
    "neg_eig_mass",
]


@dataclass(frozen=True)
class SolverConfig:
    """Knobs shared by both solvers.

    rho is the nuclear-norm penalty weight (penalized model only), mu the
    splitting parameter, tol the stopping threshold on relative change plus
    primal residual, rank_tol the rank-one certification threshold on
    sigma_2/sigma_1, and seed feeds any randomized post-processing.
    """
    rho: float = 10.0
    mu: float = 0.5
    tol: float = 1e-6
    max_iter: int = 50_000
    rank_tol: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if min(self.rho, self.mu, self.tol, self.rank_tol) <= 0:
            raise ValueError("rho, mu, tol and rank_tol must be positive")
        if self.tol >= 1.0:
            raise ValueError("tol must be below 1")
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")


@dataclass
class SolveReport:
    """Diagnostics of one solve; X is the final feasible primal iterate."""
    objective: float
    nuclear_norm: float
    iterations: int
    primal_residual: float
    rel_change: float
    rank_one_ratio: float
    neg_eig_mass: float
    extracted_lambda: float
    extracted_x: np.ndarray
    termination: str  # "converged" | "iter_cap"
    X: np.ndarray = field(repr=False, default=None)


def neg_eig_mass(X: np.ndarray) -> float:
    """Absolute sum of the negative eigenvalues of a symmetric matrix."""
    X = np.asarray(X, dtype=float)
    w = np.linalg.eigvalsh(0.5 * (X + X.T))
    return float(-np.sum(w[w < 0.0]))


def run_admm(project_feasible, y_update, Y0: np.ndarray, cfg: SolverConfig):
    """Generic splitting loop shared by all drivers.

    project_feasible maps Y + mu*Lam back onto the affine block; y_update
    maps (X, Lam) to the next spectral block.  Stops when
    ||X_k - X_{k-1}||_F / ||X_{k-1}||_F + ||X_k - Y_k||_F <= tol, with the
    relative change read as absolute on the first pass (there is no
    previous iterate).  Returns (X, Y, iterations, rel_change, primal,
    converged).
    """
    Y = Y0
    Lam = np.zeros_like(Y0)
    X_prev = None
    rel = primal = np.inf
    for iteration in range(1, cfg.max_iter + 1):
        X = project_feasible(Y + cfg.mu * Lam)
        Y = y_update(X, Lam)
        Lam = Lam - (X - Y) / cfg.mu
        diff = X if X_prev is None else X - X_prev
        denom = 1.0 if X_prev is None else float(np.linalg.norm(X_prev))
        rel = float(np.linalg.norm(diff)) / (denom if denom > 0.0 else 1.0)
        primal = float(np.linalg.norm(X - Y))
        if rel + primal <= cfg.tol:
            return X, Y, iteration, rel, primal, True
        X_prev = X
    return X, Y, cfg.max_iter, rel, primal, False


def _diagonal_start(F: SuperSymmetricTensor) -> np.ndarray:
    # feasible rank-one start at the best coordinate direction
    n, d = F.n, F.m // 2
    best = max(range(n), key=lambda i: F[(i,) * F.m])
    size = n ** d
    Y0 = np.zeros((size, size))
    p = int(np.ravel_multi_index((best,) * d, (n,) * d))
    Y0[p, p] = 1.0
    return Y0


def _prepare(F: SuperSymmetricTensor):
    if not isinstance(F, SuperSymmetricTensor):
        raise TypeError("solver input must be a SuperSymmetricTensor")
    if F.m % 2:
        raise ValueError("solvers need an even order; square odd orders first")
    if all(v == 0.0 for _, v in F.items()):
        raise ValueError("zero tensor is degenerate")
    return F.n, F.m // 2, matr(F)


def _report(F: SuperSymmetricTensor, Fm: np.ndarray, X: np.ndarray,
            iterations: int, rel: float, primal: float, converged: bool
            ) -> SolveReport:
    n, d = F.n, F.m // 2
    w = np.linalg.eigvalsh(X)
    ratio, (_, y) = rank_one_ratio(X)
    x = _fix_sign(F, _recover_x(y, n, d))
    return SolveReport(
        objective=float(np.sum(Fm * X)),
        nuclear_norm=float(np.sum(np.abs(w))),
        iterations=iterations,
        primal_residual=primal,
        rel_change=rel,
        rank_one_ratio=ratio,
        neg_eig_mass=float(-np.sum(w[w < 0.0])),
        extracted_lambda=eval_homogeneous(F, x),
        extracted_x=x,
        termination="converged" if converged else "iter_cap",
        X=X,
    )


def solve_nnp(F: SuperSymmetricTensor, cfg: SolverConfig = None) -> SolveReport:
    """Maximize tr(FX) - rho*||X||_* over the trace-one symmetric set.

    X-update: project Y + mu*Lam onto the affine set.  Y-update: shrink the
    singular values of X - mu*(Lam - F) by mu*rho.  Multiplier update:
    Lam <- Lam - (X - Y)/mu.
    """
    cfg = cfg or SolverConfig()
    n, d, Fm = _prepare(F)
    tau = cfg.mu * cfg.rho

    def y_update(X, Lam):
        return shrink_nuclear(X - cfg.mu * (Lam - Fm), tau)

    X, _, iterations, rel, primal, ok = run_admm(
        lambda Z: project_C(Z, n, d), y_update, _diagonal_start(F), cfg)
    return _report(F, Fm, X, iterations, rel, primal, ok)


def solve_sdp(F: SuperSymmetricTensor, cfg: SolverConfig = None) -> SolveReport:
    """Maximize tr(FX) over the trace-one symmetric set intersected with PSD.

    Same X and multiplier updates as the penalized model; the Y-update
    projects X + mu*F - mu*Lam onto the PSD cone.
    """
    cfg = cfg or SolverConfig()
    n, d, Fm = _prepare(F)

    def y_update(X, Lam):
        return project_psd(X + cfg.mu * Fm - cfg.mu * Lam)

    X, _, iterations, rel, primal, ok = run_admm(
        lambda Z: project_C(Z, n, d), y_update, _diagonal_start(F), cfg)
    return _report(F, Fm, X, iterations, rel, primal, ok)
