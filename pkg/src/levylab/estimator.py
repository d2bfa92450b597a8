"""Scikit-learn style wrappers around the moment-scaling pipeline.

These estimators let the scaling analysis plug into sklearn tooling
(get_params/set_params, cloning, pipelines); the numerical work lives in the
functional modules.
"""

from __future__ import annotations

import warnings

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError
from sklearn.utils.validation import column_or_1d

from .extremes import estimate_tail_exponent
from .moments import (
    MomentGrid,
    default_q_grid,
    fit_scaling,
    horizon_scheme,
    moment_grid,
)
from .sampler import IncrementSeries
from .stable import validate_params


class TruncationWarning(UserWarning):
    """Input length was not a multiple of lcm(1..T); the tail was dropped."""


class ScalingFunctionEstimator(BaseEstimator):
    """Estimate the scaling function nu(q) of a series of unit-lag increments.

    Parameters
    ----------
    horizon : int, largest window size T; moments are computed for tau = 1..T.
    q_grid : array-like or None; moment orders.  None selects a 0.25-spaced
        grid on [0, 2*q_grid_alpha].
    q_grid_alpha : float, reference stability index for the default grid.

    Attributes (after fit)
    ----------------------
    grid_ : MomentGrid of empirical moments.
    nu_hat_, stderr_, r2_ : per-order regression results (arrays over q_grid_).
    n_used_ : number of increments actually used (truncated to a multiple of
        lcm(1..T)).
    """

    def __init__(self, horizon: int = 10, q_grid=None, q_grid_alpha: float = 1.5):
        self.horizon = horizon
        self.q_grid = q_grid
        self.q_grid_alpha = q_grid_alpha

    def fit(self, X, y=None):
        x = column_or_1d(np.asarray(X, dtype=float))
        lcm = horizon_scheme(self.horizon, 1).lcm
        n_used = (len(x) // lcm) * lcm
        if n_used == 0:
            raise ValueError(
                f"need at least lcm(1..{self.horizon}) = {lcm} increments, got {len(x)}"
            )
        if n_used != len(x):
            warnings.warn(
                f"dropped {len(x) - n_used} trailing increments to reach a "
                f"multiple of lcm(1..{self.horizon}) = {lcm}",
                TruncationWarning,
                stacklevel=2,
            )
            x = x[:n_used]
        qs = (
            default_q_grid(self.q_grid_alpha)
            if self.q_grid is None
            else np.asarray(self.q_grid, dtype=float)
        )
        scheme = horizon_scheme(self.horizon, n_used // lcm)
        # params are irrelevant for data-driven moments; use a neutral triple
        series = IncrementSeries(
            params=validate_params(self.q_grid_alpha, 1.0, 0.0),
            lag=1,
            seed=0,
            values=x,
        )
        self.grid_: MomentGrid = moment_grid(series, qs, scheme)
        fits = [fit_scaling(self.grid_, q) for q in qs]
        self.q_grid_ = qs
        self.nu_hat_ = np.array([f.nu_hat for f in fits])
        self.stderr_ = np.array([f.stderr for f in fits])
        self.r2_ = np.array([f.r2 for f in fits])
        self.n_used_ = n_used
        return self

    def predict(self, q):
        """Fitted scaling exponents, linearly interpolated over the q grid."""
        if not hasattr(self, "nu_hat_"):
            raise NotFittedError("call fit before predict")
        return np.interp(np.asarray(q, dtype=float), self.q_grid_, self.nu_hat_)


class TailIndexEstimator(BaseEstimator):
    """Hill estimate of the power-law exponent of the upper tail of |X|."""

    def __init__(self, fraction: float = 0.05):
        self.fraction = fraction

    def fit(self, X, y=None):
        x = np.abs(column_or_1d(np.asarray(X, dtype=float)))
        self.tail_index_ = estimate_tail_exponent(x[x > 0], fraction=self.fraction)
        return self

    def predict(self, X=None):
        if not hasattr(self, "tail_index_"):
            raise NotFittedError("call fit before predict")
        return self.tail_index_
