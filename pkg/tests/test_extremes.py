import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from levylab.extremes import (
    AllZeroInputError,
    TauTooSmallError,
    TooFewSamplesError,
    ZeroDenominatorError,
    block_extremes,
    check_sandwich_inequality,
    check_scalar_inequalities,
    estimate_tail_exponent,
    exp_moment_bound,
    lambda_constants,
    lambda_sequence,
    sandwich_sweep,
    ratio_RN,
    sandwich_constants,
)
from levylab.sampler import IncrementSeries, RngStream, sample_stable
from levylab.stable import validate_params


def series(values, alpha=1.5):
    return IncrementSeries(
        params=validate_params(alpha, 1.0, 0.0),
        lag=1,
        seed=0,
        values=np.asarray(values, dtype=float),
    )


def stable_series(alpha, n, seed, stream=0):
    p = validate_params(alpha, 1.0, 0.0)
    vals = sample_stable(p, RngStream(seed, stream).generator, n)
    return IncrementSeries(params=p, lag=1, seed=seed, values=vals)


def empirical_cdf(samples, xs):
    return np.searchsorted(np.sort(samples), xs, side="right") / len(samples)


class TestBlockExtremes:
    def test_simple_block(self):
        e = block_extremes(series([3.0, -1.0]), 1.0, 2)
        assert (e.u[0], e.v[0]) == (3.0, 1.0)

    def test_tie_gives_equal_u_v(self):
        e = block_extremes(series([2.0, 2.0, 1.0]), 2.0, 3)
        assert (e.u[0], e.v[0]) == (4.0, 4.0)

    def test_tau_too_small(self):
        with pytest.raises(TauTooSmallError):
            block_extremes(series([1.0, 2.0]), 1.0, 1)

    def test_sandwich_invariant(self):
        s = stable_series(1.5, 3 * 1000, 5)
        tau, q = 3, 2.0
        e = block_extremes(s, q, tau)
        block_sums = (np.abs(s.values.reshape(-1, tau)) ** q).sum(axis=1)
        assert np.all(e.v <= e.u)
        assert np.all(e.u <= block_sums + 1e-12)
        assert np.all(block_sums <= e.u + (tau - 1) * e.v + 1e-12)

    def test_u_cdf_is_unit_cdf_power_tau(self):
        tau, q = 2, 2.0
        s = stable_series(1.5, tau * 100_000, 8)
        e = block_extremes(s, q, tau)
        unit = np.abs(s.values) ** q
        xs = np.quantile(e.u, np.linspace(0.01, 0.99, 199))
        diff = np.abs(empirical_cdf(e.u, xs) - empirical_cdf(unit, xs) ** tau)
        assert diff.max() < 0.01

    def test_v_cdf_formula(self):
        tau, q = 3, 2.0
        s = stable_series(1.5, tau * 100_000, 9)
        e = block_extremes(s, q, tau)
        unit = np.abs(s.values) ** q
        xs = np.quantile(e.v, np.linspace(0.01, 0.99, 199))
        F = empirical_cdf(unit, xs)
        expected = F**tau + tau * (1 - F) * F ** (tau - 1)
        assert np.abs(empirical_cdf(e.v, xs) - expected).max() < 0.015


class TestRatioRN:
    def test_single_block(self):
        e = block_extremes(series([3.0, -1.0]), 1.0, 2)
        assert ratio_RN(e) == pytest.approx(1 / 3)

    def test_all_tied(self):
        e = block_extremes(series([2.0, 2.0, -2.0, 2.0]), 1.0, 2)
        assert ratio_RN(e) == 1.0

    def test_zero_second_max(self):
        e = block_extremes(series([5.0, 0.0, -3.0, 0.0]), 1.0, 2)
        assert ratio_RN(e) == 0.0

    def test_zero_denominator(self):
        e = block_extremes(series([0.0, 0.0]), 1.0, 2)
        with pytest.raises(ZeroDenominatorError):
            ratio_RN(e)

    def test_prefix(self):
        e = block_extremes(series([3.0, -1.0, 2.0, 2.0]), 1.0, 2)
        assert ratio_RN(e, upto=1) == pytest.approx(1 / 3)
        assert ratio_RN(e, upto=2) == pytest.approx((1 + 2) / (3 + 2))


class TestLambdaSequence:
    def test_hand_constants_beta_one(self):
        lam = lambda_constants(1.0, validate_params(1.0, 1.0, 0.0), 2)
        assert lam.beta == 1.0
        assert lam.c == pytest.approx(2 / math.pi)
        assert lam.delta == pytest.approx(1 / math.pi)
        assert lam.k_const == pytest.approx(1 / (3 * math.pi))
        assert lambda_sequence(1, lam) == pytest.approx(1 / (3 * math.pi))

    def test_beta_half_form(self):
        lam = lambda_constants(3.0, validate_params(1.5, 1.0, 0.0), 2)
        assert lam.beta == pytest.approx(0.5)
        n = 17
        expected = lam.k_const * n**2 / (math.log(n) + 1)
        assert lambda_sequence(n, lam) == pytest.approx(expected)
        assert lambda_sequence(1, lam) == pytest.approx(lam.k_const)

    @pytest.mark.parametrize("q,alpha", [(1.0, 1.0), (3.0, 1.5), (2.0, 1.5)])
    def test_lambda_over_n_increasing(self, q, alpha):
        lam = lambda_constants(q, validate_params(alpha, 1.0, 0.0), 2)
        ns = np.arange(1, 2001)
        ratio = lambda_sequence(ns, lam) / ns
        assert np.all(np.diff(ratio) > 0)

    def test_inverse_square_sum_cauchy(self):
        lam = lambda_constants(3.0, validate_params(1.5, 1.0, 0.0), 2)
        ns = np.arange(1, 1_000_001)
        terms = lambda_sequence(ns, lam) ** (-2 * lam.beta)
        total = terms.sum()
        tail = terms[900_000:].sum()
        assert tail / total < 1e-6


class TestSandwich:
    def test_h_constants(self):
        assert sandwich_constants(1.0, 2) == (4.0, 1.0)
        assert sandwich_constants(2.0, 2) == (16.0, 0.5)

    def test_e_exponent(self):
        assert sandwich_constants(0.5, 3)[1] == 1.0
        assert sandwich_constants(2.0, 3)[1] == 0.5

    def test_all_zero_rejected(self):
        with pytest.raises(AllZeroInputError):
            check_sandwich_inequality(np.zeros(4), 2, 1.0)

    def test_reports_both_sides(self):
        res = check_sandwich_inequality(np.array([1.0, 2.0, -1.0, 0.5]), 2, 1.0)
        assert res.holds
        assert 0.0 <= res.lhs <= res.rhs

    @settings(deadline=None, max_examples=200)
    @given(
        st.lists(
            st.floats(-1e6, 1e6, allow_nan=False), min_size=6, max_size=30
        ).filter(lambda v: any(v) and len(v) % 3 == 0),
        st.sampled_from([0.5, 1.0, 1.5, 3.0]),
    )
    def test_holds_for_arbitrary_vectors(self, values, q):
        res = check_sandwich_inequality(np.asarray(values), 3, q)
        assert res.holds

    @pytest.mark.parametrize("tau", [2, 3, 5])
    @pytest.mark.parametrize("q", [0.5, 1.0, 1.5, 3.0])
    def test_random_sweep(self, tau, q):
        assert sandwich_sweep(2000, tau, q, seed=13) == 0


class TestScalarInequalities:
    def test_unit_point(self):
        assert check_scalar_inequalities(1.0, 0.5)

    def test_near_zero(self):
        for q in (0.3, 1.0, 2.0, 4.0):
            assert check_scalar_inequalities(1e-12, q)

    @pytest.mark.parametrize("q", [0.3, 1.0, 2.0, 4.0])
    def test_dense_grid(self, q):
        for xi in np.linspace(0.01, 10.0, 500):
            assert check_scalar_inequalities(float(xi), q)

    @given(st.floats(1e-6, 100.0), st.floats(0.05, 8.0))
    def test_property(self, xi, q):
        assert check_scalar_inequalities(xi, q)


class TestExpMomentBound:
    def test_tiny_xi_both_sides_near_one(self):
        s = stable_series(1.0, 2 * 10_000, 3)
        e = block_extremes(s, 2.0, 2)
        lam = lambda_constants(2.0, s.params, 2)
        res = exp_moment_bound(e, 1e-12, lam)
        assert res.estimate == pytest.approx(1.0, abs=1e-4)
        assert res.bound == pytest.approx(1.0, abs=1e-4)
        assert res.satisfied

    def test_bound_formula_beta_one(self):
        lam = lambda_constants(1.0, validate_params(1.0, 1.0, 0.0), 2)
        s = stable_series(1.0, 2 * 100, 3)
        e = block_extremes(s, 1.0, 2)
        res = exp_moment_bound(e, 0.1, lam)
        assert res.bound == pytest.approx(math.exp(0.1 * math.log(0.1) / math.pi))

    def test_satisfied_small_xi(self):
        s = stable_series(1.0, 2 * 100_000, 4)
        e = block_extremes(s, 2.0, 2)
        lam = lambda_constants(2.0, s.params, 2)
        assert exp_moment_bound(e, 0.01, lam).satisfied


class TestHillEstimator:
    def test_pareto_oracle(self):
        for beta in (0.5, 1.0, 2.0):
            u = np.random.default_rng(42).random(100_000)
            x = u ** (-1.0 / beta)  # exact Pareto(beta) via inverse CDF
            assert estimate_tail_exponent(x, 0.05) == pytest.approx(beta, abs=0.1)

    def test_too_few_samples(self):
        with pytest.raises(TooFewSamplesError):
            estimate_tail_exponent(np.ones(50))

    def test_fraction_validated(self):
        with pytest.raises(ValueError):
            estimate_tail_exponent(np.ones(200), fraction=1.5)
