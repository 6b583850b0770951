import numpy as np
import pytest

from oracles import autocorr, pooled_local_ols, scalar_ar_series
from shrflow import (
    EpochedSeries,
    MultichannelSeries,
    NonFiniteError,
    OrderBelowGlobalError,
    TooEarlyError,
    TooLateError,
    TooShortError,
    compute_innovations,
    fit_ar_channel,
    fit_local_ar,
)


def decay_series(rho, n, x0=1.0):
    x = np.empty(n)
    x[0] = x0
    for t in range(1, n):
        x[t] = rho * x[t - 1]
    return x


class TestFitArChannel:
    def test_noiseless_decay_recovers_exactly(self):
        model = fit_ar_channel(decay_series(0.5, 50), order=1)
        assert abs(model.coefficients[0] - 0.5) < 1e-10
        assert model.innovation_variance < 1e-20

    def test_all_zero_series_gives_minimum_norm_zero(self):
        model = fit_ar_channel(np.zeros(20), order=2)
        np.testing.assert_array_equal(model.coefficients, [0.0, 0.0])
        assert model.innovation_variance == 0.0

    def test_constant_series_gives_finite_fit(self):
        # Degenerate design: min-norm solve, never an exception.
        model = fit_ar_channel(np.full(30, 7.0), order=2)
        assert np.isfinite(model.coefficients).all()

    def test_ar2_recovery_within_ols_error(self):
        # Oracle: brute-force scalar recursion; tolerance ~ 1/sqrt(N_T).
        x = scalar_ar_series([0.5, -0.3], n=10_000, seed=42)
        model = fit_ar_channel(x, order=2)
        np.testing.assert_allclose(model.coefficients, [0.5, -0.3], atol=0.05)

    def test_too_short(self):
        with pytest.raises(TooShortError):
            fit_ar_channel(np.zeros(5), order=2)  # needs 2*2+2 = 6

    def test_nonfinite(self):
        x = np.zeros(20)
        x[3] = np.nan
        with pytest.raises(NonFiniteError):
            fit_ar_channel(x, order=1)

    def test_residuals_orthogonal_to_regressors(self):
        x = scalar_ar_series([0.4, 0.2], n=500, seed=3)
        model = fit_ar_channel(x, order=2)
        resid = x[2:] - (
            model.coefficients[0] * x[1:-1] + model.coefficients[1] * x[:-2]
        )
        for lag in (1, 2):
            reg = x[2 - lag : len(x) - lag]
            bound = 1e-8 * np.linalg.norm(resid) * np.linalg.norm(reg)
            assert abs(np.dot(resid, reg)) <= bound

    def test_determinism_bit_identical(self):
        x = scalar_ar_series([0.5], n=300, seed=9)
        a = fit_ar_channel(x, order=3).coefficients
        b = fit_ar_channel(x, order=3).coefficients
        assert a.tobytes() == b.tobytes()

    def test_scale_equivariance(self):
        x = scalar_ar_series([0.6, -0.2], n=400, seed=11)
        base = fit_ar_channel(x, order=2)
        scaled = fit_ar_channel(1000.0 * x, order=2)
        np.testing.assert_allclose(
            scaled.coefficients, base.coefficients, rtol=1e-10, atol=1e-12
        )
        np.testing.assert_allclose(
            scaled.innovation_variance, 1e6 * base.innovation_variance, rtol=1e-8
        )


class TestComputeInnovations:
    def test_white_noise_innovations_stay_white(self):
        rng = np.random.default_rng(5)
        series = MultichannelSeries(values=rng.standard_normal((2, 1000)))
        inn = compute_innovations(series, global_order=1)
        assert inn.values.shape == (2, 999)
        for row in inn.values:
            assert abs(autocorr(row, 1)) < 0.08  # ~2.5/sqrt(N)

    def test_noiseless_ar1_leaves_zero_residual(self):
        series = MultichannelSeries(values=decay_series(0.5, 60)[None, :])
        inn = compute_innovations(series, global_order=1)
        assert np.max(np.abs(inn.values)) < 1e-9

    def test_order_below_global_rejected(self):
        series = MultichannelSeries(values=np.random.default_rng(0).standard_normal((1, 50)))
        with pytest.raises(OrderBelowGlobalError):
            compute_innovations(series, global_order=2, per_channel_orders=[1])

    def test_mixed_orders_align_on_max(self):
        rng = np.random.default_rng(8)
        series = MultichannelSeries(values=rng.standard_normal((2, 120)))
        inn = compute_innovations(series, global_order=1, per_channel_orders=[1, 3])
        assert inn.values.shape == (2, 117)
        assert inn.max_order == 3
        assert inn.global_order == 1
        # channel 0 residuals are aligned to start at frame max_order.
        model = fit_ar_channel(series.values[0], 1)
        x = series.values[0]
        expected = x[3:] - model.coefficients[0] * x[2:-1]
        np.testing.assert_allclose(inn.values[0], expected, atol=1e-12)

    def test_wrong_order_count(self):
        series = MultichannelSeries(values=np.zeros((2, 50)))
        with pytest.raises(OrderBelowGlobalError):
            compute_innovations(series, global_order=1, per_channel_orders=[1])


def make_decay_epochs(rho, n_frames, n_epochs, scale_seed=0):
    rng = np.random.default_rng(scale_seed)
    initials = rng.uniform(0.5, 2.0, size=n_epochs)
    values = np.empty((1, n_frames, n_epochs))
    for j, x0 in enumerate(initials):
        values[0, :, j] = decay_series(rho, n_frames, x0=x0)
    return EpochedSeries(values=values)


class TestFitLocalAr:
    def test_noiseless_local_model_is_exact(self):
        epochs = make_decay_epochs(0.8, n_frames=10, n_epochs=4)
        models = fit_local_ar(epochs, target_time=5, global_order=1)
        assert len(models) == 1
        assert abs(models[0].coefficients[0] - 0.8) < 1e-10
        assert np.max(np.abs(models[0].innovations)) < 1e-10
        assert models[0].innovations.shape == (2, 4)

    def test_too_early(self):
        epochs = EpochedSeries(values=np.random.default_rng(0).standard_normal((1, 10, 3)))
        with pytest.raises(TooEarlyError):
            fit_local_ar(epochs, target_time=4, global_order=2)  # 2Q+1 = 5

    def test_too_late(self):
        epochs = EpochedSeries(values=np.random.default_rng(0).standard_normal((1, 10, 3)))
        with pytest.raises(TooLateError):
            fit_local_ar(epochs, target_time=11, global_order=2)

    def test_white_noise_matches_explicit_normal_equations(self):
        rng = np.random.default_rng(21)
        epochs = EpochedSeries(values=rng.standard_normal((2, 15, 200)))
        models = fit_local_ar(epochs, target_time=10, global_order=2)
        for i, model in enumerate(models):
            oracle = pooled_local_ols(epochs.values[i], tau=10, order=2)
            np.testing.assert_allclose(model.coefficients, oracle, atol=1e-8)
            np.testing.assert_allclose(model.coefficients, [0.0, 0.0], atol=0.15)

    def test_innovation_rows_cover_local_times_ascending(self):
        rng = np.random.default_rng(33)
        epochs = EpochedSeries(values=rng.standard_normal((1, 12, 6)))
        tau, q = 8, 2
        model = fit_local_ar(epochs, target_time=tau, global_order=q)[0]
        u = epochs.values[0]
        for r in range(q + 1):
            t = (tau - 1) - q + r  # 0-based frame of row r
            pred = sum(
                model.coefficients[k - 1] * u[t - k, :] for k in range(1, q + 1)
            )
            np.testing.assert_allclose(model.innovations[r], u[t, :] - pred, atol=1e-12)
