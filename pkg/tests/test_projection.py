import itertools

import numpy as np
import pytest

from tensorpca import (alpha, project_C, project_partial_C, shrink_nuclear,
                       project_psd, matr, matr_inv, rank_one,
                       is_super_symmetric, is_partial_symmetric, kkt_project)


def kkt_project_partial(Z, n, m):
    # dense reference: orbit equalities chained within each 4-element class
    # plus the trace row, solved as an equality-constrained least-distance
    size = (n * m) ** 2
    orbits = {}
    for pos, (i, j, k, l) in enumerate(itertools.product(
            range(n), range(m), range(n), range(m))):
        key = min((i, j, k, l), (k, j, i, l), (i, l, k, j), (k, l, i, j))
        orbits.setdefault(key, []).append(pos)
    rows, b = [], []
    for members in orbits.values():
        for other in members[1:]:
            row = np.zeros(size)
            row[members[0]], row[other] = 1.0, -1.0
            rows.append(row)
            b.append(0.0)
    trace = np.zeros(size)
    for i, j in itertools.product(range(n), range(m)):
        trace[((i * m + j) * n + i) * m + j] = 1.0
    rows.append(trace)
    b.append(1.0)
    A, b = np.array(rows), np.array(b)
    z = Z.reshape(-1)
    mult, *_ = np.linalg.lstsq(A @ A.T, A @ z - b, rcond=None)
    return (z - A.T @ mult).reshape(n * m, n * m)


def test_alpha_small_cases():
    assert alpha((1,), 1) == 1.0
    assert alpha((0, 1), 1) == 1.0
    assert alpha((2, 0), 2) == 1.0
    assert alpha((1, 1), 2) == pytest.approx(1.0 / 3.0)
    assert alpha((1, 1, 1), 3) == pytest.approx(6.0 / 90.0)


def test_project_C_worked_case():
    # n=2, d=2, Z = 2 * matr(e1^(x4)): the multiplier is -3/4 and the three
    # even-diagonal classes move by alpha/2 times it
    Z = np.zeros((4, 4))
    Z[0, 0] = 2.0
    X = project_C(Z, 2, 2)
    T = matr_inv(X, 2, 2)
    assert T[0, 0, 0, 0] == pytest.approx(13.0 / 8.0, abs=1e-14)
    assert T[0, 0, 1, 1] == pytest.approx(-1.0 / 8.0, abs=1e-14)
    assert T[1, 1, 1, 1] == pytest.approx(-3.0 / 8.0, abs=1e-14)
    assert T[0, 0, 0, 1] == pytest.approx(0.0, abs=1e-14)
    assert T[0, 1, 1, 1] == pytest.approx(0.0, abs=1e-14)
    assert float(np.trace(X)) == pytest.approx(1.0, abs=1e-14)


def test_project_C_output_is_feasible():
    rng = np.random.default_rng(0)
    for n, d in [(2, 2), (3, 2), (2, 3)]:
        for _ in range(10):
            Z = rng.standard_normal((n**d, n**d))
            X = project_C(Z, n, d)
            assert abs(float(np.trace(X)) - 1.0) <= 1e-12
            ok, violation = is_super_symmetric(matr_inv(X, n, d), tol=1e-12)
            assert ok, violation


def test_project_C_fixes_feasible_points():
    F = rank_one(1.0, np.array([0.6, 0.8]), 4)
    X = matr(F)  # trace one, symmetric
    np.testing.assert_allclose(project_C(X, 2, 2), X, atol=1e-14)


def test_project_C_is_orthogonal_projection():
    # the correction Z - P(Z) must be orthogonal to all feasible differences
    rng = np.random.default_rng(1)
    n, d = 3, 2
    Z = rng.standard_normal((9, 9))
    X = project_C(Z, n, d)
    for seed in range(5):
        W = project_C(rng.standard_normal((9, 9)), n, d)
        assert abs(float(np.sum((Z - X) * (W - X)))) < 1e-10


def test_project_C_agrees_with_kkt_reference():
    rng = np.random.default_rng(2)
    for n, d in [(2, 2), (3, 2)]:
        for _ in range(10):
            Z = rng.standard_normal((n**d, n**d))
            np.testing.assert_allclose(project_C(Z, n, d),
                                       kkt_project(Z, n, d), atol=1e-8)


def test_shrink_nuclear_diagonal_example():
    Y = shrink_nuclear(np.diag([3.0, 1.0]), 2.0)
    np.testing.assert_allclose(Y, np.diag([1.0, 0.0]), atol=1e-14)


def test_shrink_nuclear_matches_svd_reference():
    rng = np.random.default_rng(3)
    A = rng.standard_normal((6, 6))
    M = 0.5 * (A + A.T)
    for tau in (0.0, 0.3, 2.0):
        U, s, Vt = np.linalg.svd(M)
        ref = (U * np.maximum(s - tau, 0.0)) @ Vt
        np.testing.assert_allclose(shrink_nuclear(M, tau), ref, atol=1e-12)
    with pytest.raises(ValueError):
        shrink_nuclear(M, -1.0)


def test_shrink_nuclear_is_prox_optimal():
    rng = np.random.default_rng(4)
    A = rng.standard_normal((5, 5))
    M = 0.5 * (A + A.T)
    tau = 0.7

    def objective(Y):
        return tau * np.sum(np.abs(np.linalg.eigvalsh(Y))) \
            + 0.5 * np.linalg.norm(Y - M) ** 2

    Y = shrink_nuclear(M, tau)
    base = objective(Y)
    for _ in range(20):
        B = rng.standard_normal((5, 5))
        assert base <= objective(Y + 1e-3 * 0.5 * (B + B.T)) + 1e-12


def test_project_psd_clips_spectrum():
    rng = np.random.default_rng(5)
    A = rng.standard_normal((6, 6))
    M = 0.5 * (A + A.T)
    P = project_psd(M)
    assert np.min(np.linalg.eigvalsh(P)) >= -1e-12
    # variational inequality against random PSD points
    for _ in range(20):
        B = rng.standard_normal((6, 3))
        Q = B @ B.T
        assert float(np.sum((M - P) * (Q - P))) <= 1e-10 * np.linalg.norm(Q)
    C = rng.standard_normal((6, 6))
    PSD = C @ C.T
    np.testing.assert_allclose(project_psd(PSD), PSD, atol=1e-12)


def test_project_partial_C_output_is_feasible():
    rng = np.random.default_rng(6)
    for n, m in [(2, 2), (3, 4)]:
        for _ in range(10):
            Z = rng.standard_normal((n * m, n * m))
            X = project_partial_C(Z, n, m)
            assert abs(float(np.trace(X)) - 1.0) <= 1e-12
            ok, violation = is_partial_symmetric(X.reshape(n, m, n, m))
            assert ok, violation
            np.testing.assert_array_equal(X, X.T)


def test_project_partial_C_agrees_with_kkt_reference():
    rng = np.random.default_rng(7)
    for n, m in [(2, 2), (2, 3), (3, 4)]:
        for _ in range(10):
            Z = rng.standard_normal((n * m, n * m))
            np.testing.assert_allclose(project_partial_C(Z, n, m),
                                       kkt_project_partial(Z, n, m), atol=1e-8)


def test_projection_shape_checks():
    with pytest.raises(ValueError):
        project_C(np.zeros((3, 3)), 2, 2)
    with pytest.raises(ValueError):
        project_partial_C(np.zeros((5, 5)), 2, 3)
