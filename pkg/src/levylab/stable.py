"""Strictly-stable laws: parameters, characteristic exponent, tail asymptotics.

Everything here is a pure function of the parameter triple (alpha, sigma,
gamma).  The stability index alpha lives in (0, 2]; alpha = 2 is the Gaussian
boundary and is rejected by every fat-tail quantity with a dedicated error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from scipy.special import gamma as gamma_fn


class ParameterError(ValueError):
    """Invalid stable-law parameter."""


class AlphaOutOfRangeError(ParameterError):
    pass


class SigmaNonPositiveError(ParameterError):
    pass


class GammaOutOfRangeError(ParameterError):
    pass


class AlphaNotFatTailedError(ValueError):
    """Raised when a fat-tail quantity is requested at alpha = 2."""


class WrongAlphaError(ValueError):
    """Raised when an alpha = 1 exact formula is used at alpha != 1."""


@dataclass(frozen=True)
class StableParams:
    """Parameter triple of a strictly stable law.

    alpha: stability index in (0, 2].
    sigma: scale, > 0.
    gamma: skewness; |gamma| <= 1 when alpha != 1, any real when alpha = 1
           (there it acts as a drift of a Cauchy law).
    """

    alpha: float
    sigma: float
    gamma: float

    @property
    def hurst(self) -> float:
        """Self-similarity exponent H = 1/alpha."""
        return 1.0 / self.alpha


def validate_params(alpha: float, sigma: float, gamma: float) -> StableParams:
    """Validate a raw (alpha, sigma, gamma) triple and freeze it."""
    if not (0.0 < alpha <= 2.0):
        raise AlphaOutOfRangeError(f"alpha must lie in (0, 2], got {alpha}")
    if not sigma > 0.0:
        raise SigmaNonPositiveError(f"sigma must be positive, got {sigma}")
    if alpha != 1.0 and abs(gamma) > 1.0:
        raise GammaOutOfRangeError(
            f"gamma must lie in [-1, 1] when alpha != 1, got {gamma}"
        )
    return StableParams(float(alpha), float(sigma), float(gamma))


@dataclass(frozen=True)
class TailAsymptote:
    """Power-law tail P[.. > x] ~ prefactor * x**(-exponent)."""

    exponent: float
    prefactor: float


class DegenerateTail:
    """Marker for a vanishing or exponentially thin tail at boundary skewness."""

    def __repr__(self) -> str:  # pragma: no cover
        return "DEGENERATE"


DEGENERATE = DegenerateTail()


class MomentDoesNotExist:
    """Marker returned when E[|X_t|^q] is infinite (q >= alpha < 2)."""

    def __repr__(self) -> str:  # pragma: no cover
        return "MOMENT_DOES_NOT_EXIST"


MOMENT_DOES_NOT_EXIST = MomentDoesNotExist()


@dataclass(frozen=True)
class ScalingLaw:
    """Moment scaling E[|X_t|^q] = mu(q) * t**nu(q) for 0 <= q < b."""

    b: float
    nu: Callable[[float], float]
    mu: Optional[Callable[[float], float]] = None


def self_similar_scaling_law(p: StableParams) -> ScalingLaw:
    """Scaling law of the self-similar process: b = alpha, nu(q) = q/alpha.

    The prefactor mu(q) = E[|X_1|^q] has no closed form used here; it is
    estimated by Monte Carlo where needed, so mu is left unset.
    """
    alpha = p.alpha
    return ScalingLaw(b=alpha, nu=lambda q: q / alpha)


def _sgn(k: float) -> float:
    # sgn(0) := +1 by convention
    return 1.0 if k >= 0 else -1.0


def char_exponent(k: float, p: StableParams) -> complex:
    """Characteristic exponent psi(k) with E[exp(ikX_t)] = exp(-t psi(k))."""
    if p.alpha == 1.0:
        return complex(p.sigma * abs(k), -p.gamma * k)
    # tan(pi*alpha/2) vanishes identically at the Gaussian boundary
    tan_term = 0.0 if p.alpha == 2.0 else math.tan(math.pi * p.alpha / 2.0)
    mag = p.sigma ** p.alpha * abs(k) ** p.alpha
    return complex(mag, -mag * p.gamma * tan_term * _sgn(k))


def tail_constant(p: StableParams) -> float:
    """Constant c in P[|X_t| > x] ~ t c / x**alpha (requires alpha < 2)."""
    if p.alpha >= 2.0:
        raise AlphaNotFatTailedError("tail constant undefined at alpha = 2")
    return (
        2.0
        / math.pi
        * float(gamma_fn(p.alpha))
        * math.sin(math.pi * p.alpha / 2.0)
        * p.sigma ** p.alpha
    )


def abs_tail_asymptote(p: StableParams, t: float) -> TailAsymptote:
    """Tail of |X_t|: exponent alpha, prefactor t*c."""
    if not t > 0.0:
        raise ValueError(f"t must be positive, got {t}")
    return TailAsymptote(exponent=p.alpha, prefactor=t * tail_constant(p))


def one_sided_tail_asymptote(
    p: StableParams, t: float, side: str
) -> TailAsymptote | DegenerateTail:
    """One-sided tail asymptote of X_t; DEGENERATE at boundary skewness.

    For alpha = 1 the exact arctan law gives (t/pi)*sigma/x on both sides
    regardless of gamma, which only shifts the location.
    """
    if side not in ("right", "left"):
        raise ValueError(f"side must be 'right' or 'left', got {side!r}")
    if not t > 0.0:
        raise ValueError(f"t must be positive, got {t}")
    if p.alpha >= 2.0:
        raise AlphaNotFatTailedError("one-sided asymptote undefined at alpha = 2")
    if p.alpha == 1.0:
        return TailAsymptote(exponent=1.0, prefactor=t / math.pi * p.sigma)
    signed = p.gamma if side == "right" else -p.gamma
    if signed == -1.0:
        # P[X_t > x] = 0 (alpha < 1) or exponentially thin (alpha > 1)
        return DEGENERATE
    prefactor = (
        t
        / math.pi
        * (1.0 + signed)
        * float(gamma_fn(p.alpha))
        * math.sin(math.pi * p.alpha / 2.0)
        * p.sigma ** p.alpha
    )
    return TailAsymptote(exponent=p.alpha, prefactor=prefactor)


def cauchy_tail_exact(p: StableParams, t: float, x: float) -> float:
    """Exact right tail P[X_t > x] for alpha = 1 (Cauchy with drift gamma)."""
    if p.alpha != 1.0:
        raise WrongAlphaError(f"exact arctan law requires alpha = 1, got {p.alpha}")
    if not t > 0.0:
        raise ValueError(f"t must be positive, got {t}")
    return 0.5 - math.atan((x - t * p.gamma) / (t * p.sigma)) / math.pi


def empirical_nu(q: float, alpha: float) -> float:
    """Piecewise-linear scaling function of empirical moments: min(q/alpha, 1)."""
    if not (0.0 < alpha <= 2.0):
        raise AlphaOutOfRangeError(f"alpha must lie in (0, 2], got {alpha}")
    if q < 0.0:
        raise ValueError(f"q must be non-negative, got {q}")
    return min(q / alpha, 1.0)


def theoretical_nu(q: float, alpha: float) -> float | MomentDoesNotExist:
    """Scaling function q/alpha of true moments, defined only where they exist."""
    if not (0.0 < alpha <= 2.0):
        raise AlphaOutOfRangeError(f"alpha must lie in (0, 2], got {alpha}")
    if q < 0.0:
        raise ValueError(f"q must be non-negative, got {q}")
    if alpha < 2.0 and q >= alpha:
        return MOMENT_DOES_NOT_EXIST
    return q / alpha
