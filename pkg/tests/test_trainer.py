import numpy as np
import pytest

from crudecast.errors import DataError, TrainingError
from crudecast.network import Layout, Network, flatten, forward, gradient, init_network, jacobian, residuals
from crudecast.supervised import FeatureSpec, build_design
from crudecast.trainer import TrainOptions, fit_gd, fit_lm, multi_trial
from crudecast.transform import TransformedSeries, momentum


def sine_task(n=200):
    t = np.linspace(0.0, 2.0 * np.pi, n)
    return t[:, None], np.sin(t)[:, None]


class TestOptions:
    def test_validation(self):
        with pytest.raises(DataError):
            TrainOptions(algorithm="adam")
        with pytest.raises(DataError):
            TrainOptions(max_iterations=0)
        with pytest.raises(DataError):
            TrainOptions(mu_init=0.0)
        with pytest.raises(DataError):
            TrainOptions(mu_factor=1.0)


class TestFitLm:
    def test_linear_exactness(self):
        # identity-activation fixture: the effective linear map must match
        # the closed-form least-squares solution (normal-equations oracle)
        rng = np.random.default_rng(42)
        X = rng.standard_normal((50, 5))
        w_true = rng.standard_normal(5)
        y = (X @ w_true + 0.7)[:, None]
        lay = Layout(5, 3, 1, hidden_activation="identity")
        opts = TrainOptions(max_iterations=500, grad_tol=1e-13, seed=3)
        rep = fit_lm(init_network(lay, 3), X, y, opts)
        net = rep.final_net
        eff = np.concatenate([(net.W2 @ net.W1).ravel(), (net.W2 @ net.b1 + net.b2)])
        coef, *_ = np.linalg.lstsq(np.column_stack([X, np.ones(50)]), y[:, 0], rcond=None)
        assert np.linalg.norm(eff - coef) < 1e-8

    def test_zero_residual_start(self):
        rng = np.random.default_rng(1)
        net = init_network(Layout(3, 2, 1), 5)
        X = rng.standard_normal((10, 3))
        y = forward(net, X)
        rep = fit_lm(net, X, y, TrainOptions())
        assert rep.iterations_used == 0
        assert rep.stop_reason == "grad_tol"
        np.testing.assert_array_equal(flatten(rep.final_net), flatten(net))

    def test_zero_gradient_with_tolerance_disabled_hits_mu_max(self):
        rng = np.random.default_rng(2)
        net = init_network(Layout(2, 2, 1), 6)
        X = rng.standard_normal((8, 2))
        y = forward(net, X)
        rep = fit_lm(net, X, y, TrainOptions(grad_tol=0.0))
        assert rep.stop_reason == "mu_max"
        np.testing.assert_array_equal(flatten(rep.final_net), flatten(net))

    def test_accepted_losses_strictly_decrease(self):
        X, y = sine_task(80)
        rep = fit_lm(init_network(Layout(1, 4, 1), 2), X, y, TrainOptions(max_iterations=50, seed=2))
        assert np.all(np.diff(rep.loss_curve) < 0)
        assert rep.loss_curve[-1] <= rep.loss_curve[0]
        assert rep.iterations_used <= 50

    def test_sine_capability(self):
        X, y = sine_task(200)
        lay = Layout(1, 8, 1)
        good = 0
        for seed in range(5):
            rep = fit_lm(init_network(lay, seed), X, y, TrainOptions(max_iterations=200, seed=seed))
            rmse = float(np.sqrt(rep.loss_curve[-1] / len(X)))
            good += rmse < 0.05
        assert good >= 4

    def test_loss_tol_stop(self):
        X, y = sine_task(80)
        rep = fit_lm(init_network(Layout(1, 8, 1), 0), X, y,
                     TrainOptions(max_iterations=1000, loss_tol=1e-3))
        assert rep.stop_reason == "loss_tol"
        assert rep.loss_curve[-1] <= 1e-3

    def test_large_mu_step_follows_gradient(self):
        # as mu grows the damped step direction collapses onto -gradient
        rng = np.random.default_rng(7)
        net = init_network(Layout(3, 4, 1), 8)
        X = rng.standard_normal((20, 3))
        y = rng.standard_normal((20, 1))
        J = jacobian(net, X)
        g = J.T @ residuals(net, X, y)
        mu = 1e8
        delta = np.linalg.solve(J.T @ J + mu * np.eye(g.size), -g)
        cos = float(delta @ (-g) / (np.linalg.norm(delta) * np.linalg.norm(g)))
        assert cos > 0.999

    def test_determinism(self):
        X, y = sine_task(60)
        opts = TrainOptions(max_iterations=30, seed=4)
        a = fit_lm(init_network(Layout(1, 4, 1), 4), X, y, opts)
        b = fit_lm(init_network(Layout(1, 4, 1), 4), X, y, opts)
        np.testing.assert_array_equal(flatten(a.final_net), flatten(b.final_net))
        np.testing.assert_array_equal(a.loss_curve, b.loss_curve)

    def test_empty_data(self):
        net = init_network(Layout(2, 2, 1), 0)
        with pytest.raises(DataError):
            fit_lm(net, np.zeros((0, 2)), np.zeros((0, 1)), TrainOptions())


class TestFitGd:
    def test_zero_learning_rate(self):
        X, y = sine_task(40)
        net = init_network(Layout(1, 3, 1), 1)
        rep = fit_gd(net, X, y, TrainOptions(algorithm="gd", gd_learning_rate=0.0, max_iterations=20))
        np.testing.assert_array_equal(flatten(rep.final_net), flatten(net))

    def test_convex_monotone_decrease(self):
        # identity activation and linear data give a convex quadratic loss
        rng = np.random.default_rng(9)
        X = rng.standard_normal((30, 2))
        y = (X @ np.array([0.5, -0.2]))[:, None]
        lay = Layout(2, 1, 1, hidden_activation="identity")
        rep = fit_gd(init_network(lay, 2), X, y,
                     TrainOptions(algorithm="gd", gd_learning_rate=0.005, max_iterations=100))
        assert np.all(np.diff(rep.loss_curve) <= 1e-15)

    def test_divergence_stop(self):
        X, y = sine_task(40)
        rep = fit_gd(init_network(Layout(1, 6, 1), 3), X, y,
                     TrainOptions(algorithm="gd", gd_learning_rate=0.5, max_iterations=500))
        assert rep.stop_reason == "diverged"

    def test_nonfinite_loss_raises(self):
        # a step this large overflows the squared residuals to inf
        X, y = sine_task(40)
        with pytest.raises(TrainingError, match="non-finite"):
            with np.errstate(over="ignore"):
                fit_gd(init_network(Layout(1, 6, 1), 3), X, y,
                       TrainOptions(algorithm="gd", gd_learning_rate=1e200, max_iterations=10))

    def test_lm_needs_fewer_iterations_than_gd(self):
        X, y = sine_task(120)
        lay = Layout(1, 8, 1)
        for seed in range(3):
            lm = fit_lm(init_network(lay, seed), X, y, TrainOptions(max_iterations=150, seed=seed))
            target = float(lm.loss_curve[-1])
            gd = fit_gd(init_network(lay, seed), X, y,
                        TrainOptions(algorithm="gd", gd_learning_rate=0.01,
                                     max_iterations=2000, loss_tol=target))
            gd_iters = gd.iterations_used if gd.stop_reason == "loss_tol" else 2000
            assert gd_iters > lm.iterations_used


def dataset_from_prices(prices, lags=1, split=0.9):
    mom = momentum(np.asarray(prices, dtype=np.float64), 1)
    split_idx = int(np.floor(split * len(prices)))
    return build_design([FeatureSpec(mom, lags)], mom, (1,), split_index=split_idx)


class TestMultiTrial:
    def test_single_trial_mean_equals_trial(self):
        ds = dataset_from_prices(100 + 5 * (-1.0) ** np.arange(120))
        res = multi_trial(Layout(1, 2, 1), ds, TrainOptions(max_iterations=30, seed=3), n_trials=1)
        assert len(res.trials) == 1
        assert res.mean_out["hit_rate"] == res.trials[0].metrics_out.hit_rate
        assert res.std_out["hit_rate"] == 0.0

    def test_deterministic(self):
        ds = dataset_from_prices(100 + 5 * (-1.0) ** np.arange(120))
        opts = TrainOptions(max_iterations=30, seed=3)
        a = multi_trial(Layout(1, 2, 1), ds, opts, n_trials=3)
        b = multi_trial(Layout(1, 2, 1), ds, opts, n_trials=3)
        assert a.mean_out == b.mean_out
        assert a.std_in == b.std_in

    def test_sign_alternating_reaches_perfect_hit_rate(self):
        ds = dataset_from_prices(100 + 5 * (-1.0) ** np.arange(200))
        res = multi_trial(Layout(1, 2, 1), ds, TrainOptions(max_iterations=50, seed=1), n_trials=5)
        assert res.mean_in["hit_rate"] == 1.0
        assert res.mean_out["hit_rate"] == 1.0
        assert res.std_out["hit_rate"] == 0.0
        assert res.stable

    def test_seed_sequence(self):
        ds = dataset_from_prices(100 + 5 * (-1.0) ** np.arange(120))
        res = multi_trial(Layout(1, 2, 1), ds, TrainOptions(max_iterations=10, seed=40), n_trials=3)
        assert res.seeds == [40, 41, 42]

    def test_trial_failure_carries_index(self):
        rng = np.random.default_rng(0)
        prices = 100.0 + rng.standard_normal(120).cumsum() * 0.1
        ds = dataset_from_prices(prices)
        bad = TrainOptions(algorithm="gd", gd_learning_rate=1e200, max_iterations=5, seed=9)
        with pytest.raises(TrainingError, match=r"trial 0 \(seed 9\)"):
            with np.errstate(over="ignore"):
                multi_trial(Layout(1, 2, 1), ds, bad, n_trials=2)

    def test_parallel_matches_serial(self):
        rng = np.random.default_rng(10)
        prices = 100.0 + rng.standard_normal(150).cumsum() * 0.1
        ds = dataset_from_prices(prices, lags=2)
        opts = TrainOptions(max_iterations=20, seed=5)
        serial = multi_trial(Layout(2, 3, 1), ds, opts, n_trials=4, jobs=1)
        parallel = multi_trial(Layout(2, 3, 1), ds, opts, n_trials=4, jobs=3)
        assert serial.mean_out == parallel.mean_out
        assert serial.best_index == parallel.best_index

    def test_requires_single_horizon(self):
        prices = 100.0 + np.arange(50.0)
        mom = momentum(prices, 1)
        ds = build_design([FeatureSpec(mom, 1)], mom, (1, 2), split_index=40)
        with pytest.raises(DataError, match="single-horizon"):
            multi_trial(Layout(1, 2, 1), ds, TrainOptions(), n_trials=1)

    def test_stability_flag_threshold(self):
        rng = np.random.default_rng(11)
        prices = 100.0 + rng.standard_normal(150).cumsum() * 0.1
        ds = dataset_from_prices(prices, lags=2)
        opts = TrainOptions(max_iterations=15, seed=2)
        res = multi_trial(Layout(2, 3, 1), ds, opts, n_trials=4, stability_threshold=1.0)
        assert res.stable
        res2 = multi_trial(Layout(2, 3, 1), ds, opts, n_trials=4, stability_threshold=0.0)
        assert res2.stable == (res2.std_out["hit_rate"] == 0.0)
