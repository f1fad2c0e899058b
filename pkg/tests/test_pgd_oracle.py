import numpy as np
import pytest

from mdiffnet.admm import AdmmConfig
from mdiffnet.admm import solve as admm_solve
from mdiffnet.exceptions import DegenerateInputError
from mdiffnet.loss import penalized_loss
from mdiffnet.oracle import (KktReport, brute_force_minimize, direct_delta_update,
                             kkt_residual, lambda_max)
from mdiffnet.pgd import PgdConfig, solve, step_size

from conftest import random_cov_pair, random_spd


def test_config_validation():
    with pytest.raises(ValueError):
        PgdConfig(eps=0)
    with pytest.raises(ValueError):
        PgdConfig(max_iter=0)
    assert PgdConfig().eps == 1e-3
    assert PgdConfig().max_iter == 5000


def test_step_size_examples(rng):
    assert step_size(np.eye(3), np.eye(3)) == 1.0
    assert step_size(2 * np.eye(3), 4 * np.eye(3)) == pytest.approx(1 / 8)
    Sx, Sy = random_cov_pair(rng, 2, 4)
    top = np.linalg.eigvalsh(np.kron(Sy, Sx)).max()
    assert 1 / step_size(Sx, Sy) == pytest.approx(top, rel=1e-9)


def test_step_size_degenerate():
    with pytest.raises(DegenerateInputError):
        step_size(np.zeros((2, 2)), np.eye(2))


def test_identical_covariances(rng):
    S, _ = random_cov_pair(rng, 2, 3)
    res = solve(S, S, 0.1, 2)
    assert res.report.iterations <= 1
    assert res.report.converged
    np.testing.assert_array_equal(res.delta, 0.0)


def test_lambda_max_gives_empty(rng):
    for _ in range(10):
        Sx, Sy = random_cov_pair(rng, 2, 4)
        lam = lambda_max(Sx, Sy, 2)
        res = solve(Sx, Sy, lam, 2)
        assert res.edges == frozenset()
        assert np.count_nonzero(res.delta) == 0


def test_objective_monotone(rng):
    Sx, Sy = random_cov_pair(rng, 2, 5)
    lam = 0.1 * lambda_max(Sx, Sy, 2)
    r = solve(Sx, Sy, lam, 2, PgdConfig(eps=1e-12, max_iter=3000)).report
    trace = np.array([0.0] + r.objective_trace)
    assert np.all(np.diff(trace) <= 1e-10)


def test_cross_solver_agreement(rng):
    for _ in range(5):
        Sx, Sy = random_cov_pair(rng, 3, 6)
        lam = 0.2 * lambda_max(Sx, Sy, 3)
        a = admm_solve(Sx, Sy, lam, 3, AdmmConfig(tol_abs=1e-8, tol_rel=1e-8, max_iter=20_000))
        b = solve(Sx, Sy, lam, 3, PgdConfig(eps=1e-10, max_iter=50_000))
        la = penalized_loss(a.delta, Sx, Sy, lam, 3)
        lb = penalized_loss(b.delta, Sx, Sy, lam, 3)
        assert abs(la - lb) <= 1e-3 * abs(la)


def test_kkt_of_converged_pgd(rng):
    Sx, Sy = random_cov_pair(rng, 2, 4)
    lam = 0.1 * lambda_max(Sx, Sy, 2)
    res = solve(Sx, Sy, lam, 2, PgdConfig(eps=1e-10, max_iter=50_000))
    assert res.report.converged
    assert kkt_residual(res.delta, Sx, Sy, lam, 2).within(1e-2 * lam)


def test_sa_ma_coincide_for_m1(rng):
    Sx, Sy = random_cov_pair(rng, 1, 6)
    lam = 0.2 * lambda_max(Sx, Sy, 1)
    a = solve(Sx, Sy, lam, 1, PgdConfig(mode="ma"))
    b = solve(Sx, Sy, lam, 1, PgdConfig(mode="sa"))
    np.testing.assert_array_equal(a.delta, b.delta)


def test_direct_update_examples(rng):
    W, U = rng.standard_normal((2, 4, 4))
    Z = np.zeros((4, 4))
    np.testing.assert_allclose(direct_delta_update(Z, Z, W, U, 1.0), W - U, atol=1e-14)
    I = np.eye(4)
    np.testing.assert_allclose(direct_delta_update(I, I, W, U, 1.0), (W - U) / 2, atol=1e-14)
    with pytest.raises(ValueError):
        direct_delta_update(np.eye(17), np.eye(17), np.zeros((17, 17)), np.zeros((17, 17)), 1.0)


def test_kkt_at_zero(rng):
    Sx, Sy = random_cov_pair(rng, 2, 3)
    lam = lambda_max(Sx, Sy, 2)
    rep = kkt_residual(np.zeros_like(Sx), Sx, Sy, lam, 2)
    assert rep.max_active_violation == 0.0 and rep.max_inactive_violation == 0.0
    assert rep.n_inactive == 9
    with pytest.raises(ValueError):
        kkt_residual(np.zeros_like(Sx), Sx, Sy, 0.0, 2)


def test_kkt_report_nonnegative_fields(rng):
    Sx, Sy = random_cov_pair(rng, 2, 3)
    rep = kkt_residual(rng.standard_normal(Sx.shape), Sx, Sy, 0.1, 2)
    assert isinstance(rep, KktReport)
    assert rep.max_active_violation >= 0 and rep.max_inactive_violation >= 0


def test_true_delta_is_stationary_not_penalized_optimum(rng):
    Ox = random_spd(rng, 4)
    Oy = Ox.copy()
    Oy[0:2, 2:4] += 0.3
    Oy[2:4, 0:2] += 0.3
    Sx, Sy = np.linalg.inv(Ox), np.linalg.inv(Oy)
    D = Oy - Ox
    G = Sx @ D @ Sy - (Sx - Sy)
    assert np.abs(G).max() <= 1e-10
    lam = 0.01
    rep = kkt_residual(D, Sx, Sy, lam, 2)
    # G = 0 on active blocks leaves exactly lam of violation
    assert rep.max_active_violation == pytest.approx(lam, rel=1e-6)


def test_brute_force_examples(rng):
    S, _ = random_cov_pair(rng, 2, 2)
    np.testing.assert_array_equal(brute_force_minimize(S, S, 0.1, 2), 0.0)
    Sx, Sy = random_cov_pair(rng, 2, 2)
    lam = lambda_max(Sx, Sy, 2)
    np.testing.assert_array_equal(brute_force_minimize(Sx, Sy, lam, 2), 0.0)
    with pytest.raises(ValueError):
        brute_force_minimize(np.eye(8), np.eye(8), 0.1, 2)


def test_brute_force_kkt(rng):
    for m, p in [(1, 3), (2, 3), (3, 2)]:
        Sx, Sy = random_cov_pair(rng, m, p, n=40)
        lam = 0.1 * lambda_max(Sx, Sy, m)
        D = brute_force_minimize(Sx, Sy, lam, m)
        assert kkt_residual(D, Sx, Sy, lam, m).within(1e-5 * lam)
