import math

import numpy as np
import pytest

from kreinweave import ErasureConfig, FrameFamily, KreinSpace, error_operator, erasure_trial, monte_carlo_bound
from kreinweave import uniform_tight_frame
from kreinweave.erasure import estimator_moments, exact_erasure_mean, trial_rng
from kreinweave.errors import InsufficientRedundancyError, NotAFrameError, ZeroVectorError


@pytest.mark.parametrize("n,m", [(1, 1), (1, 2), (2, 2), (2, 4), (3, 7), (4, 4), (5, 16), (16, 256)])
def test_harmonic_frame_is_uniform_tight(n, m):
    F = uniform_tight_frame(n, m)
    V = F.vectors
    assert V.shape == (m, n)
    np.testing.assert_allclose(np.sum(V**2, axis=1), n, rtol=1e-8)
    np.testing.assert_allclose(V.T @ V, m * np.eye(n), atol=1e-8 * m)


def test_harmonic_frame_needs_redundancy():
    with pytest.raises(InsufficientRedundancyError):
        uniform_tight_frame(4, 3)
    with pytest.raises(InsufficientRedundancyError):
        ErasureConfig(n=4, m=2)


def test_exact_micro_case():
    # two copies of the unit vector in R^1: error 1, 0, 0, 1 over the four patterns
    F = uniform_tight_frame(1, 2)
    assert exact_erasure_mean(F, F, [], [[1.0]]) == pytest.approx(0.5, abs=1e-15)


def test_exact_mean_brute_force_oracle():
    F = uniform_tight_frame(2, 5)
    k = np.array([0.3, -1.1])
    total = 0.0
    for pattern in range(32):
        keep = np.array([(pattern >> i) & 1 for i in range(5)], float)
        k_hat = (2 / 5) * sum(keep[i] * (F[i] @ k) * F[i] for i in range(5))
        total += np.linalg.norm(k_hat - k) / np.linalg.norm(k) / 32
    assert exact_erasure_mean(F, F, [0, 2], [k]) == pytest.approx(total, rel=1e-12)


def test_exact_mean_matches_single_trials():
    F = uniform_tight_frame(2, 8)
    k = np.array([1.0, 0.5])
    rng = np.random.default_rng(3)
    errs = [erasure_trial(F, F, [], k, rng=rng)[1] for _ in range(20000)]
    exact = exact_erasure_mean(F, F, [], [k])
    se = np.std(errs) / np.sqrt(len(errs))
    assert abs(np.mean(errs) - exact) < 4 * se


def test_error_operator_identity_and_zero():
    F = uniform_tight_frame(3, 6)
    G = F.mapped(np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1.0]]))
    # with unit weights each half reproduces via its own dual frame
    np.testing.assert_allclose(error_operator(F, F, [], np.ones(6)), np.eye(3), atol=1e-12)
    np.testing.assert_allclose(error_operator(F, G, {1, 4}, np.zeros(6)), np.zeros((3, 3)))


def test_error_operator_indefinite_reconstruction():
    sp = KreinSpace((1, -1, 1), "complex")
    rng = np.random.default_rng(0)
    F = FrameFamily(sp, rng.standard_normal((5, 3)) + 1j * rng.standard_normal((5, 3)))
    np.testing.assert_allclose(error_operator(F, F, {0, 3}, np.ones(5)), np.eye(3), atol=1e-10)
    # single term: k -> delta [k, S^-1 z] z
    S = (F.vectors.T @ F.vectors.conj()) * sp.signs
    dual = np.linalg.solve(S, F.vectors[2])
    k = rng.standard_normal(3)
    delta = np.zeros(5)
    delta[2] = 0.7
    expect = 0.7 * np.sum(sp.signs * k * np.conj(dual)) * F.vectors[2]
    np.testing.assert_allclose(error_operator(F, F, [], delta) @ k, expect, atol=1e-12)


def test_error_operator_needs_frames():
    sp = KreinSpace((1, -1))
    F = FrameFamily(sp, [[1, 0], [2, 0]])
    with pytest.raises(NotAFrameError):
        error_operator(F, F, [], [1, 1])


def test_erasure_trial_zero_vector():
    F = uniform_tight_frame(2, 4)
    with pytest.raises(ZeroVectorError):
        erasure_trial(F, F, [], [0.0, 0.0])


def test_trial_streams_are_keyed():
    a = trial_rng(7, 3).random(4)
    np.testing.assert_array_equal(a, trial_rng(7, 3).random(4))
    assert not np.array_equal(a, trial_rng(7, 4).random(4))
    assert not np.array_equal(a, trial_rng(7, 3, stream=1).random(4))


@pytest.mark.parametrize("second", ["same", "rotated"])
def test_monte_carlo_deterministic(second):
    cfg = ErasureConfig(n=4, m=32, trials=1500, seed=11, second_frame=second, test_vectors=2)
    a = monte_carlo_bound(cfg, keep_trials=True, workers=1)
    b = monte_carlo_bound(cfg, keep_trials=True, workers=3)
    assert a.per_trial == b.per_trial
    assert a.to_dict() == b.to_dict()


def test_monte_carlo_prefix_stable():
    # trial t depends only on (seed, t)
    short = monte_carlo_bound(ErasureConfig(n=3, m=12, trials=600, seed=2), keep_trials=True)
    long = monte_carlo_bound(ErasureConfig(n=3, m=12, trials=1100, seed=2), keep_trials=True)
    assert long.per_trial[:600] == short.per_trial


def test_epsilon_and_log_one():
    assert ErasureConfig(n=4, m=16).epsilon == pytest.approx(math.sqrt(0.25 * math.log(4)))
    rep = monte_carlo_bound(ErasureConfig(n=1, m=4, trials=50))
    assert rep.epsilon == 0.0 and rep.m_hat is None


def test_seed_stability():
    a = monte_carlo_bound(ErasureConfig(n=4, m=64, trials=4000, seed=1)).m_hat
    b = monte_carlo_bound(ErasureConfig(n=4, m=64, trials=4000, seed=2)).m_hat
    assert abs(a - b) / a < 0.10


def test_error_halves_when_redundancy_quadruples():
    e1 = monte_carlo_bound(ErasureConfig(n=16, m=256, trials=2000, seed=3)).mean_relative_error
    e2 = monte_carlo_bound(ErasureConfig(n=16, m=1024, trials=2000, seed=3)).mean_relative_error
    assert e2 / e1 == pytest.approx(0.5, rel=0.1)


@pytest.mark.parametrize("second", ["same", "rotated"])
def test_estimator_unbiased(second):
    cfg = ErasureConfig(n=3, m=9, trials=20000, seed=5, second_frame=second)
    k = np.array([1.0, -2.0, 0.5])
    mean, se = estimator_moments(cfg, k)
    assert np.all(np.abs(mean - k) < 4 * se)


def test_biased_when_erasure_prob_not_half():
    rep = monte_carlo_bound(ErasureConfig(n=2, m=8, trials=100, erasure_prob=0.3))
    assert not rep.unbiased


@pytest.mark.parametrize("bad", [dict(trials=0), dict(erasure_prob=1.0), dict(second_frame="x"), dict(seed=-1)])
def test_config_validation(bad):
    with pytest.raises(ValueError):
        ErasureConfig(n=2, m=4, **bad)
