import numpy as np
import pytest

from anash.descent import SolverConfig, run_descent
from anash.duals import (
    DualSolution,
    build_dual_lp,
    compute_lambda_mu,
    extract_duals,
    solve_dual,
)
from anash.game import (
    BR_TOL,
    BimatrixGame,
    MixedStrategy,
    StrategyProfile,
    best_response_set,
)
from anash.instances import InstanceSpec, generate
from anash.lp import LpSolution


def stationary_point(game, delta=0.05):
    cert = run_descent(game, SolverConfig(delta=delta))
    assert cert.stationary
    return cert


def test_dual_lp_shape_small_game():
    # uniform profile of matching pennies: both pure strategies of each
    # player are best responses, so p and q each get two entries
    R = np.array([[1.0, 0.0], [0.0, 1.0]])
    game = BimatrixGame(R, 1.0 - R)
    profile = StrategyProfile(MixedStrategy.uniform(2), MixedStrategy.uniform(2))
    lp = build_dual_lp(game, profile)
    assert lp.sense == "max"
    assert lp.objective.size == 2 + 2 + 4
    # 3 weight equalities plus one row per pure strategy of each player
    assert len(lp.constraints) == 3 + 2 + 2
    assert lp.bounds[-2:] == [(None, None), (None, None)]


def test_dual_objective_matches_gamma():
    for seed in range(8):
        game = generate(InstanceSpec("uniform-random", n=4, seed=seed))
        cert = stationary_point(game)
        duals = solve_dual(game, cert.profile)
        assert duals.dual_objective == pytest.approx(cert.gamma, abs=1e-6)


def test_dual_weights_partition():
    for seed in range(8):
        game = generate(InstanceSpec("uniform-random", n=5, seed=seed))
        cert = stationary_point(game)
        duals = solve_dual(game, cert.profile)
        assert duals.P >= -1e-9
        assert duals.Q >= -1e-9
        assert duals.P + duals.Q == pytest.approx(1.0, abs=1e-8)


def test_dual_strategies_supported_on_best_responses():
    # the dual LP builds its weight blocks over the br_tol-approximate
    # best-response sets, so supports live inside those sets
    for seed in range(8):
        game = generate(InstanceSpec("uniform-random", n=4, seed=seed))
        cert = stationary_point(game)
        duals = solve_dual(game, cert.profile)
        if not duals.degenerate_w:
            br = best_response_set(game, "row", cert.profile.col, BR_TOL).indices
            assert set(np.flatnonzero(duals.w.probs > 1e-12)) <= br
        if not duals.degenerate_z:
            br = best_response_set(game, "col", cert.profile.row, BR_TOL).indices
            assert set(np.flatnonzero(duals.z.probs > 1e-12)) <= br


def test_lambda_mu_match_einsum_oracle():
    rng = np.random.default_rng(17)
    for seed in range(8):
        game = generate(InstanceSpec("uniform-random", n=4, seed=seed))
        cert = stationary_point(game)
        duals = solve_dual(game, cert.profile)
        params = compute_lambda_mu(game, cert.profile, duals)
        w, z = duals.w.probs, duals.z.probs
        x, y = cert.profile.row.probs, cert.profile.col.probs
        lam = np.einsum("i,ij,j->", w, game.R, z) - np.einsum(
            "i,ij,j->", x, game.R, z
        )
        mu = np.einsum("i,ij,j->", w, game.C, z) - np.einsum(
            "i,ij,j->", w, game.C, y
        )
        assert params.lam == pytest.approx(lam, abs=1e-12)
        assert params.mu == pytest.approx(mu, abs=1e-12)
        assert params.lam <= 1.0 + 1e-9
        assert params.mu <= 1.0 + 1e-9


def test_lambda_mu_hand_values():
    # w and z pure: lambda = R[w,z] - x.R[:,z], mu = C[w,z] - C[w,:].y
    R = np.array([[0.9, 0.1], [0.3, 0.7]])
    C = np.array([[0.2, 0.8], [0.6, 0.4]])
    game = BimatrixGame(R, C)
    x = MixedStrategy(np.array([0.5, 0.5]))
    y = MixedStrategy(np.array([0.5, 0.5]))
    duals = DualSolution(
        w=MixedStrategy.pure(0, 2),
        z=MixedStrategy.pure(1, 2),
        P=0.5,
        Q=0.5,
        a=0.0,
        b=0.0,
        dual_objective=0.0,
    )
    params = compute_lambda_mu(game, StrategyProfile(x, y), duals)
    # lambda = R[0,1] - (R[0,1]+R[1,1])/2 = 0.1 - 0.4
    assert params.lam == pytest.approx(-0.3, abs=1e-15)
    # mu = C[0,1] - (C[0,0]+C[0,1])/2 = 0.8 - 0.5
    assert params.mu == pytest.approx(0.3, abs=1e-15)


def test_extract_duals_degenerate_block():
    # an all-zero p block collapses w to the least-index best response
    R = np.array([[1.0, 0.0], [0.0, 1.0]])
    game = BimatrixGame(R, 1.0 - R)
    profile = StrategyProfile(MixedStrategy.uniform(2), MixedStrategy.uniform(2))
    fake = LpSolution(
        status="optimal",
        primal_values=np.array([0.0, 0.0, 0.5, 0.5, 0.0, 1.0, 0.0, 0.0]),
        objective_value=0.0,
        dual_values=np.zeros(7),
    )
    duals = extract_duals(game, profile, fake)
    assert duals.degenerate_w
    assert not duals.degenerate_z
    assert duals.w.probs[np.argmax(game.R @ profile.col.probs)] == 1.0
    assert duals.z.probs == pytest.approx([0.5, 0.5], abs=1e-12)


def test_solve_dual_deterministic():
    game = generate(InstanceSpec("uniform-random", n=5, seed=9))
    cert = stationary_point(game)
    a = solve_dual(game, cert.profile)
    b = solve_dual(game, cert.profile)
    assert np.array_equal(a.w.probs, b.w.probs)
    assert np.array_equal(a.z.probs, b.z.probs)
    assert a.P == b.P and a.Q == b.Q
