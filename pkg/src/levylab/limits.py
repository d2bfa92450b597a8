"""Monte Carlo harnesses for the distributional and almost-sure limit results.

Every harness is a pure function of its configuration: replica r draws from
stream (master_seed, stream_offset + r), and results are reduced in replica
order, so outputs are reproducible regardless of worker scheduling.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .moments import (
    HorizonScheme,
    NormingSpec,
    SeriesVerdict,
    empirical_moment,
    feller_classifier,
    normed_statistic,
)
from .sampler import IncrementSeries, RngStream, sample_stable
from .stable import StableParams, empirical_nu, tail_constant


class EmptySampleError(ValueError):
    """KS test needs non-empty samples."""


@dataclass(frozen=True)
class McConfig:
    """Configuration of one Monte Carlo harness run."""

    params: StableParams
    q: float
    taus: tuple[int, ...]
    scheme: HorizonScheme
    replicas: int
    master_seed: int

    def __post_init__(self) -> None:
        if self.replicas < 1:
            raise ValueError(f"replicas must be >= 1, got {self.replicas}")
        if any(t > self.scheme.horizon for t in self.taus):
            raise ValueError("every tau must be <= the scheme horizon")


@dataclass(frozen=True)
class KsResult:
    """Two-sample Kolmogorov-Smirnov distance with its level-0.01 critical value."""

    statistic: float
    n1: int
    n2: int
    threshold: float

    @property
    def passed(self) -> bool:
        return self.statistic < self.threshold


# asymptotic critical constant of the two-sample KS test at level 0.01
KS_CRITICAL_001 = 1.628


def ks_two_sample(a: Sequence[float], b: Sequence[float]) -> KsResult:
    """Exact sup-distance between the two empirical CDFs."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise EmptySampleError("both samples must be non-empty")
    a_sorted = np.sort(a)
    b_sorted = np.sort(b)
    grid = np.concatenate([a_sorted, b_sorted])
    cdf_a = np.searchsorted(a_sorted, grid, side="right") / a.size
    cdf_b = np.searchsorted(b_sorted, grid, side="right") / b.size
    statistic = float(np.max(np.abs(cdf_a - cdf_b)))
    threshold = KS_CRITICAL_001 * math.sqrt((a.size + b.size) / (a.size * b.size))
    return KsResult(statistic=statistic, n1=a.size, n2=b.size, threshold=threshold)


def _replica_series(
    params: StableParams, n: int, master_seed: int, stream_index: int
) -> IncrementSeries:
    stream = RngStream(master_seed=master_seed, stream_index=stream_index)
    values = sample_stable(params, stream.generator, n)
    return IncrementSeries(params=params, lag=1, seed=master_seed, values=values)


def _map_replicas(fn: Callable[[int], float], replicas: int, threads: int) -> np.ndarray:
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return np.fromiter(pool.map(fn, range(replicas)), dtype=float, count=replicas)
    return np.fromiter((fn(r) for r in range(replicas)), dtype=float, count=replicas)


def mc_normed_sample(
    cfg: McConfig,
    tau: int,
    spec: NormingSpec,
    stream_offset: int = 0,
    threads: int = 1,
) -> np.ndarray:
    """Independent realizations of the normed statistic, one per replica."""
    if tau not in cfg.taus:
        raise ValueError(f"tau={tau} not in config taus {cfg.taus}")
    n = cfg.scheme.n_samples

    def one(r: int) -> float:
        s = _replica_series(cfg.params, n, cfg.master_seed, stream_offset + r)
        return normed_statistic(s, cfg.q, tau, spec)

    return _map_replicas(one, cfg.replicas, threads)


@dataclass(frozen=True)
class TauInvarianceResult:
    """Pairwise KS comparisons of the normed statistic across window sizes."""

    pairs: list[tuple[int, int, KsResult]]
    passed: bool


def tau_invariance_test(
    cfg: McConfig,
    spec: NormingSpec,
    scale_by_tau: bool = True,
    threads: int = 1,
) -> TauInvarianceResult:
    """KS-compare {statistic/tau} across all tau pairs; pass iff all below threshold.

    Set scale_by_tau=False to skip the /tau scaling; with the raw norming this
    is the negative control, since the raw statistics at different tau differ
    by a factor tau that the scaling would otherwise cancel.
    """
    if len(cfg.taus) < 2:
        raise ValueError("need at least two tau values")
    samples = {}
    for i, tau in enumerate(cfg.taus):
        vals = mc_normed_sample(
            cfg, tau, spec, stream_offset=i * cfg.replicas, threads=threads
        )
        samples[tau] = vals / tau if scale_by_tau else vals
    pairs = []
    for i, ti in enumerate(cfg.taus):
        for tj in cfg.taus[i + 1:]:
            pairs.append((ti, tj, ks_two_sample(samples[ti], samples[tj])))
    return TauInvarianceResult(pairs=pairs, passed=all(r.passed for _, _, r in pairs))


def equality_in_law_test(cfg: McConfig, tau: int, threads: int = 1) -> KsResult:
    """KS-compare the estimator at window tau with tau^(q/alpha) times the
    estimator at window 1 computed on independent series of length N/tau."""
    n = cfg.scheme.n_samples
    if n % tau != 0:
        raise ValueError(f"tau={tau} does not divide N={n}")
    q, alpha = cfg.q, cfg.params.alpha

    def left(r: int) -> float:
        s = _replica_series(cfg.params, n, cfg.master_seed, r)
        return empirical_moment(s, q, tau)

    def right(r: int) -> float:
        s = _replica_series(cfg.params, n // tau, cfg.master_seed, cfg.replicas + r)
        return tau ** (q / alpha) * empirical_moment(s, q, 1)

    a = _map_replicas(left, cfg.replicas, threads)
    b = _map_replicas(right, cfg.replicas, threads)
    return ks_two_sample(a, b)


def centered_sine_curve(
    params: StableParams,
    Ns: Sequence[int],
    draws: int,
    seed: int,
) -> np.ndarray:
    """Monte Carlo estimates of E[N sin(|X_1|^alpha / N)] - c ln N on a shared pool."""
    if list(Ns) != sorted(Ns):
        raise ValueError("Ns must be increasing")
    stream = RngStream(master_seed=seed, stream_index=0)
    pool = np.abs(sample_stable(params, stream.generator, draws)) ** params.alpha
    c = tail_constant(params)
    out = np.empty(len(Ns))
    for i, n in enumerate(Ns):
        out[i] = float(np.mean(n * np.sin(pool / n))) - c * math.log(n)
    return out


@dataclass(frozen=True)
class ConvergenceReport:
    """Median/IQR trajectory of a statistic along an increasing N ladder."""

    ns: np.ndarray
    medians: np.ndarray
    spreads: np.ndarray
    target: float
    samples: np.ndarray = field(repr=False)  # shape (replicas, len(ns))


def _ladder_report(
    cfg: McConfig,
    multipliers: Sequence[int],
    per_replica: Callable[[IncrementSeries, np.ndarray], np.ndarray],
    target: float,
    threads: int = 1,
) -> ConvergenceReport:
    """Evaluate a prefix statistic at N = multiplier * lcm for each replica.

    Each replica draws one series at the largest N; smaller ladder points are
    prefixes of it, so the ladder is coupled within a replica while marginal
    distributions at each N are exact.
    """
    multipliers = sorted(multipliers)
    ns = np.array([m * cfg.scheme.lcm for m in multipliers])
    n_max = int(ns[-1])
    rows = []
    for r in range(cfg.replicas):
        s = _replica_series(cfg.params, n_max, cfg.master_seed, r)
        rows.append(per_replica(s, ns))
    samples = np.vstack(rows)
    medians = np.median(samples, axis=0)
    q75, q25 = np.percentile(samples, [75, 25], axis=0)
    return ConvergenceReport(
        ns=ns, medians=medians, spreads=q75 - q25, target=target, samples=samples
    )


def ratio_convergence_study(
    cfg: McConfig,
    tau: int,
    multipliers: Sequence[int] = (4, 40, 400),
) -> ConvergenceReport:
    """Trajectory of M[q][tau]/M[q][1] along the N ladder; target tau^nu_e(q)."""
    q = cfg.q
    alpha = cfg.params.alpha

    def per_replica(s: IncrementSeries, ns: np.ndarray) -> np.ndarray:
        unit = np.abs(s.values) ** q
        blocks = np.abs(s.values.reshape(-1, tau).sum(axis=1)) ** q
        cum_unit = np.cumsum(unit)
        cum_blocks = np.cumsum(blocks)
        out = np.empty(len(ns))
        for i, n in enumerate(ns):
            m_tau = tau * cum_blocks[n // tau - 1] / n
            m_one = cum_unit[n - 1] / n
            out[i] = m_tau / m_one
        return out

    target = float(tau ** empirical_nu(q, alpha))
    return _ladder_report(cfg, multipliers, per_replica, target)


def rn_study(
    cfg: McConfig,
    tau: int,
    multipliers: Sequence[int] = (4, 40, 400),
) -> ConvergenceReport:
    """Trajectory of R_N = sum(V)/sum(U) along the N ladder; target 0."""
    q = cfg.q

    def per_replica(s: IncrementSeries, ns: np.ndarray) -> np.ndarray:
        powered = np.abs(s.values.reshape(-1, tau)) ** q
        part = np.partition(powered, (tau - 2, tau - 1), axis=1)
        cum_u = np.cumsum(part[:, tau - 1])
        cum_v = np.cumsum(part[:, tau - 2])
        out = np.empty(len(ns))
        for i, n in enumerate(ns):
            blocks = n // tau
            out[i] = cum_v[blocks - 1] / cum_u[blocks - 1]
        return out

    return _ladder_report(cfg, multipliers, per_replica, target=0.0)


@dataclass(frozen=True)
class DivergenceDemo:
    """Running-max trajectories of the norming-constant statistic, with verdict."""

    multipliers: np.ndarray
    running_max: np.ndarray  # shape (seeds, len(multipliers))
    verdict: SeriesVerdict


def divergence_demo(
    cfg: McConfig,
    tau: int,
    p_exponent: float,
    multipliers: Sequence[int] = (4, 40, 400),
    n_seeds: int | None = None,
) -> DivergenceDemo:
    """Trajectory of max over k' <= k of M[q][tau]_{N_k'} / N_k'^p per seed.

    The statistic is evaluated at every multiplier k up to the largest, so the
    running max sees the whole trajectory, and is recorded at the requested
    ladder points.
    """
    verdict = feller_classifier(p_exponent, cfg.q, cfg.params.alpha)
    multipliers = sorted(multipliers)
    k_max = multipliers[-1]
    lcm = cfg.scheme.lcm
    seeds = cfg.replicas if n_seeds is None else n_seeds
    q = cfg.q
    rows = []
    for r in range(seeds):
        s = _replica_series(cfg.params, k_max * lcm, cfg.master_seed, r)
        blocks = np.abs(s.values.reshape(-1, tau).sum(axis=1)) ** q
        cum_blocks = np.cumsum(blocks)
        ks = np.arange(1, k_max + 1)
        n_k = ks * lcm
        m_tau = tau * cum_blocks[n_k // tau - 1] / n_k
        traj = np.maximum.accumulate(m_tau / n_k.astype(float) ** p_exponent)
        rows.append(traj[np.array(multipliers) - 1])
    return DivergenceDemo(
        multipliers=np.array(multipliers),
        running_max=np.vstack(rows),
        verdict=verdict,
    )
