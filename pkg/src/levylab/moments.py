"""Empirical moments, scaling-function regression, normings, series classifier.

The estimator of E[|X_tau|^q] is the sample average of |.|^q over the N/tau
non-overlapping windows of size tau.  N is kept a multiple of lcm(1..T) so
that every tau <= T divides it exactly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as sp_stats

from .sampler import IncrementSeries, TauDoesNotDivideError
from .stable import tail_constant, validate_params

_INT64_MAX = 2**63 - 1


class NonPositiveMomentError(ValueError):
    """A moment is zero; its logarithm is undefined for regression."""


class DegenerateGridError(ValueError):
    """Fewer than two tau points; no regression possible."""


class ZeroMomentError(ZeroDivisionError):
    """Normalizing moment M[q][1] is zero."""


class NormingMismatchError(ValueError):
    """Norming spec inconsistent with the requested (q, alpha)."""


class InvalidOrderError(ValueError):
    """Series classifier requires q >= alpha."""


def lcm_first(T: int) -> int:
    """lcm(1, 2, ..., T).  Raises OverflowError past the 64-bit range."""
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    out = math.lcm(*range(1, T + 1))
    if out > _INT64_MAX:
        raise OverflowError(f"lcm(1..{T}) exceeds the 64-bit integer range")
    return out


@dataclass(frozen=True)
class HorizonScheme:
    """Horizon T with N = multiplier * lcm(1..T), divisible by every tau <= T."""

    horizon: int
    multiplier: int
    lcm: int
    n_samples: int


def horizon_scheme(T: int, multiplier: int = 1) -> HorizonScheme:
    if multiplier < 1:
        raise ValueError(f"multiplier must be >= 1, got {multiplier}")
    lcm = lcm_first(T)
    return HorizonScheme(
        horizon=T, multiplier=multiplier, lcm=lcm, n_samples=multiplier * lcm
    )


def empirical_moment(s: IncrementSeries, q: float, tau: int) -> float:
    """Sample average of |block sum|^q over N/tau windows of size tau.

    0^0 := 1 so the 0-th moment is identically one.
    """
    if q < 0.0:
        raise ValueError(f"q must be non-negative, got {q}")
    if tau < 1 or s.n % tau != 0:
        raise TauDoesNotDivideError(f"tau={tau} does not divide n={s.n}")
    blocks = s.values.reshape(-1, tau).sum(axis=1) if tau > 1 else s.values
    return float(np.mean(np.abs(blocks) ** q))


@dataclass(frozen=True)
class MomentGrid:
    """Empirical moments over a (q, tau) grid for one series."""

    qs: np.ndarray
    taus: np.ndarray
    n_samples: int
    values: np.ndarray  # shape (len(qs), len(taus))

    def moment(self, q: float, tau: int) -> float:
        iq = int(np.flatnonzero(self.qs == q)[0])
        it = int(np.flatnonzero(self.taus == tau)[0])
        return float(self.values[iq, it])


def default_q_grid(alpha: float, spacing: float = 0.25) -> np.ndarray:
    """0.25-spaced orders on [0, 2*alpha], straddling the kink at q = alpha."""
    return np.arange(0.0, 2.0 * alpha + spacing / 2.0, spacing)


def moment_grid(
    s: IncrementSeries, qs: np.ndarray, scheme: HorizonScheme
) -> MomentGrid:
    """Full grid of empirical moments over qs x {1..T}."""
    if s.n != scheme.n_samples:
        raise ValueError(f"series length {s.n} != scheme N {scheme.n_samples}")
    qs = np.asarray(qs, dtype=float)
    taus = np.arange(1, scheme.horizon + 1)
    values = np.empty((len(qs), len(taus)))
    for j, tau in enumerate(taus):
        blocks = np.abs(s.values.reshape(-1, int(tau)).sum(axis=1))
        for i, q in enumerate(qs):
            values[i, j] = np.mean(blocks**q)
    return MomentGrid(qs=qs, taus=taus, n_samples=s.n, values=values)


@dataclass(frozen=True)
class ScalingFit:
    """OLS of ln M[q][tau] on ln tau; the slope estimates nu(q)."""

    q: float
    nu_hat: float
    intercept: float
    stderr: float
    r2: float


def fit_scaling(grid: MomentGrid, q: float) -> ScalingFit:
    iq = np.flatnonzero(grid.qs == q)
    if len(iq) == 0:
        raise KeyError(f"q={q} not in grid")
    row = grid.values[int(iq[0])]
    if len(grid.taus) < 2:
        raise DegenerateGridError("need at least two tau values to regress")
    if np.any(row <= 0.0):
        raise NonPositiveMomentError(f"non-positive moment at q={q}")
    res = sp_stats.linregress(np.log(grid.taus), np.log(row))
    return ScalingFit(
        q=float(q),
        nu_hat=float(res.slope),
        intercept=float(res.intercept),
        stderr=float(res.stderr),
        r2=float(res.rvalue) ** 2,
    )


def ratio_normalized(grid: MomentGrid, q: float, tau: int) -> float:
    """Stochastically normalized moment M[q][tau] / M[q][1]."""
    m1 = grid.moment(q, 1)
    if m1 == 0.0:
        raise ZeroMomentError("normalizing moment M[q][1] is zero")
    return grid.moment(q, tau) / m1


class NormingKind(str, enum.Enum):
    RAW = "raw"
    CENTERED_LOG = "centered_log"  # q = alpha
    POWER_NORMED = "power_normed"  # q > alpha


@dataclass(frozen=True)
class NormingSpec:
    """How to normalize the estimator for a distributional limit at (q, alpha)."""

    kind: NormingKind
    q: float
    alpha: float
    c: float  # tail constant, used by the centered_log branch

    def __post_init__(self) -> None:
        if self.kind is NormingKind.CENTERED_LOG and self.q != self.alpha:
            raise NormingMismatchError("centered_log requires q = alpha")
        if self.kind is NormingKind.POWER_NORMED and not self.q > self.alpha:
            raise NormingMismatchError("power_normed requires q > alpha")


def norming_spec(kind: NormingKind, q: float, alpha: float, sigma: float = 1.0) -> NormingSpec:
    c = tail_constant(validate_params(alpha, sigma, 0.0)) if alpha < 2.0 else float("nan")
    return NormingSpec(kind=kind, q=q, alpha=alpha, c=c)


def normed_statistic(
    s: IncrementSeries, q: float, tau: int, spec: NormingSpec
) -> float:
    """Estimator at (q, tau) under the norming required by its limit law."""
    if spec.q != q:
        raise NormingMismatchError(f"spec order {spec.q} != requested order {q}")
    m = empirical_moment(s, q, tau)
    n = s.n
    if spec.kind is NormingKind.RAW:
        return m
    if spec.kind is NormingKind.CENTERED_LOG:
        return m - spec.c * tau * math.log(n / tau)
    return n ** (1.0 - q / spec.alpha) * m


class SeriesVerdict(enum.Enum):
    CONVERGES = "converges"
    DIVERGES = "diverges"


def feller_classifier(p_exponent: float, q: float, alpha: float) -> SeriesVerdict:
    """Classify sum_k (k * a_{N_k})^(-alpha/q) for polynomial norming a_N = N^p.

    The summand is proportional to k^(-(1+p) alpha/q), a p-series, which
    converges iff its exponent exceeds one.
    """
    if not alpha > 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if q < alpha:
        raise InvalidOrderError(f"classifier requires q >= alpha, got q={q}")
    if p_exponent < 0.0:
        raise ValueError(f"p_exponent must be >= 0, got {p_exponent}")
    exponent = (1.0 + p_exponent) * alpha / q
    return SeriesVerdict.CONVERGES if exponent > 1.0 else SeriesVerdict.DIVERGES
