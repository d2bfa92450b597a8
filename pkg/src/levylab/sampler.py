"""Seeded generation of i.i.d. strictly-stable unit increments.

Sampling uses the Chambers-Mallows-Stuck (CMS) transformation of a uniform
angle and a unit exponential, which is exact and rejection-free.  The law
psi(k) = sigma^alpha |k|^alpha [1 - i gamma tan(pi alpha/2) sgn(k)] coincides
with the classical "1-parameterization" S_alpha(sigma, beta=gamma, mu=0), so
CMS applies with skew beta = gamma after multiplying the standard variate by
sigma.  At alpha = 1 the law psi(k) = sigma|k| - i gamma k is a Cauchy law of
scale sigma shifted by the drift gamma, sampled as gamma + sigma*tan(angle).

Streams are numpy PCG64 generators keyed by SeedSequence(master_seed,
stream_index): reproducible and statistically independent across indices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .stable import StableParams


class TauDoesNotDivideError(ValueError):
    """Window size tau does not divide the series length."""


@dataclass
class RngStream:
    """One reproducible random stream out of a seeded family."""

    master_seed: int
    stream_index: int = 0
    _generator: np.random.Generator | None = field(
        default=None, repr=False, compare=False
    )

    @property
    def generator(self) -> np.random.Generator:
        if self._generator is None:
            seq = np.random.SeedSequence(
                entropy=self.master_seed, spawn_key=(self.stream_index,)
            )
            self._generator = np.random.Generator(np.random.PCG64(seq))
        return self._generator


@dataclass(frozen=True)
class IncrementSeries:
    """A seeded batch of increments of the process at a common lag."""

    params: StableParams
    lag: int
    seed: int
    values: np.ndarray

    @property
    def n(self) -> int:
        return len(self.values)


def sample_stable(p: StableParams, rng: np.random.Generator, size: int) -> np.ndarray:
    """Vectorized CMS draws distributed as X_1 under psi."""
    phi = rng.uniform(-math.pi / 2.0, math.pi / 2.0, size=size)
    if p.alpha == 1.0:
        return p.gamma + p.sigma * np.tan(phi)
    w = rng.standard_exponential(size=size)
    alpha = p.alpha
    if p.gamma == 0.0:
        x = (
            np.sin(alpha * phi)
            / np.cos(phi) ** (1.0 / alpha)
            * (np.cos((1.0 - alpha) * phi) / w) ** ((1.0 - alpha) / alpha)
        )
    else:
        t = p.gamma * math.tan(math.pi * alpha / 2.0)
        b = math.atan(t) / alpha
        s = (1.0 + t * t) ** (1.0 / (2.0 * alpha))
        x = (
            s
            * np.sin(alpha * (phi + b))
            / np.cos(phi) ** (1.0 / alpha)
            * (np.cos(phi - alpha * (phi + b)) / w) ** ((1.0 - alpha) / alpha)
        )
    return p.sigma * x


def draw_stable(p: StableParams, stream: RngStream) -> float:
    """One variate distributed as X_1; advances the stream state."""
    return float(sample_stable(p, stream.generator, 1)[0])


def generate_increments(p: StableParams, n: int, seed: int) -> IncrementSeries:
    """Lag-1 series of n i.i.d. draws, a pure function of (p, n, seed)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    stream = RngStream(master_seed=seed, stream_index=0)
    values = sample_stable(p, stream.generator, n)
    values.flags.writeable = False
    return IncrementSeries(params=p, lag=1, seed=seed, values=values)


def aggregate(s: IncrementSeries, tau: int) -> IncrementSeries:
    """Exact block sums of tau consecutive increments; lag becomes tau."""
    if tau < 1:
        raise ValueError(f"tau must be >= 1, got {tau}")
    if s.n % tau != 0:
        raise TauDoesNotDivideError(f"tau={tau} does not divide n={s.n}")
    summed = s.values.reshape(-1, tau).sum(axis=1)
    summed.flags.writeable = False
    return IncrementSeries(params=s.params, lag=s.lag * tau, seed=s.seed, values=summed)


def levels(s: IncrementSeries) -> np.ndarray:
    """Path levels X_0 = 0, X_1, ..., X_n as prefix sums of the increments."""
    out = np.empty(s.n + 1)
    out[0] = 0.0
    np.cumsum(s.values, out=out[1:])
    return out
