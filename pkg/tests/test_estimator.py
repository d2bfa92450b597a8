import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from levylab.estimator import (
    ScalingFunctionEstimator,
    TailIndexEstimator,
    TruncationWarning,
)
from levylab.sampler import generate_increments
from levylab.stable import empirical_nu, validate_params


class TestSklearnProtocol:
    def test_get_params_roundtrip(self):
        est = ScalingFunctionEstimator(horizon=4, q_grid=[1.0], q_grid_alpha=1.2)
        params = est.get_params()
        assert params["horizon"] == 4
        assert params["q_grid_alpha"] == 1.2
        cloned = clone(est)
        assert cloned.get_params() == params

    def test_set_params(self):
        est = ScalingFunctionEstimator().set_params(horizon=6)
        assert est.horizon == 6

    def test_not_fitted(self):
        with pytest.raises(NotFittedError):
            ScalingFunctionEstimator().predict(1.0)
        with pytest.raises(NotFittedError):
            TailIndexEstimator().predict()

    def test_fit_returns_self(self):
        est = ScalingFunctionEstimator(horizon=2, q_grid=[1.0])
        assert est.fit(np.ones(8)) is est


class TestScalingFunctionEstimator:
    def test_recovers_stable_exponents(self):
        p = validate_params(1.5, 1.0, 0.0)
        x = generate_increments(p, 2520 * 40, 11).values
        est = ScalingFunctionEstimator(horizon=10, q_grid=[0.5, 1.0]).fit(x)
        for q, nu in zip(est.q_grid_, est.nu_hat_):
            assert nu == pytest.approx(empirical_nu(q, 1.5), abs=0.05)

    def test_truncation_warning(self):
        est = ScalingFunctionEstimator(horizon=2, q_grid=[1.0])
        with pytest.warns(TruncationWarning):
            est.fit(np.arange(9, dtype=float))
        assert est.n_used_ == 8

    def test_too_short_rejected(self):
        with pytest.raises(ValueError):
            ScalingFunctionEstimator(horizon=10).fit(np.ones(100))

    def test_default_grid_from_alpha(self):
        est = ScalingFunctionEstimator(horizon=2, q_grid_alpha=1.0).fit(
            np.random.default_rng(0).standard_normal(64)
        )
        assert est.q_grid_[0] == 0.0
        assert est.q_grid_[-1] == pytest.approx(2.0)

    def test_predict_interpolates(self):
        p = validate_params(1.5, 1.0, 0.0)
        x = generate_increments(p, 2520 * 4, 12).values
        est = ScalingFunctionEstimator(horizon=10, q_grid=[0.5, 1.5]).fit(x)
        mid = est.predict(1.0)
        assert min(est.nu_hat_) <= mid <= max(est.nu_hat_)

    def test_zero_order_exponent_zero(self):
        est = ScalingFunctionEstimator(horizon=4, q_grid=[0.0]).fit(
            np.random.default_rng(1).standard_normal(12 * 10)
        )
        assert est.nu_hat_[0] == pytest.approx(0.0, abs=1e-12)


class TestTailIndexEstimator:
    def test_pareto_recovery(self):
        u = np.random.default_rng(5).random(200_000)
        est = TailIndexEstimator(fraction=0.05).fit(u ** (-1.0 / 1.5))
        assert est.tail_index_ == pytest.approx(1.5, abs=0.1)
        assert est.predict() == est.tail_index_

    def test_uses_absolute_values(self):
        u = np.random.default_rng(6).random(200_000)
        x = u ** (-1.0 / 0.8)
        signs = np.random.default_rng(7).choice([-1.0, 1.0], size=x.size)
        est = TailIndexEstimator(fraction=0.05).fit(signs * x)
        assert est.tail_index_ == pytest.approx(0.8, abs=0.1)

    def test_clone(self):
        est = TailIndexEstimator(fraction=0.01)
        assert clone(est).fraction == 0.01
