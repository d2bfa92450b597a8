"""Command-line interface: simulate series, run estimators and harnesses.

Subcommands: simulate, scaling, ratio, limits, extremes, tails.
Exit codes: 0 success, 1 assertion failure, 2 invalid input, 3 I/O error.

CSV conventions: UTF-8, '#'-prefixed header comments carrying the run
configuration, values at 17 significant digits so round-trips are bit-exact.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .extremes import (
    check_scalar_inequalities,
    estimate_tail_exponent,
    lambda_constants,
    lambda_sequence,
    sandwich_sweep,
)
from .limits import (
    McConfig,
    equality_in_law_test,
    ratio_convergence_study,
    tau_invariance_test,
)
from .moments import (
    NormingKind,
    default_q_grid,
    fit_scaling,
    horizon_scheme,
    moment_grid,
    norming_spec,
)
from .sampler import IncrementSeries, generate_increments
from .stable import (
    MOMENT_DOES_NOT_EXIST,
    ParameterError,
    abs_tail_asymptote,
    empirical_nu,
    theoretical_nu,
    validate_params,
)

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_INVALID = 2
EXIT_IO = 3


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8"), True


def _write_table(path, columns, rows, header_lines, fmt):
    """Write a table as commented CSV or as a JSON object."""
    fh, close = _open_out(path)
    try:
        if fmt == "json":
            payload = {
                "header": header_lines,
                "rows": [dict(zip(columns, [_json_val(v) for v in row])) for row in rows],
            }
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        else:
            for line in header_lines:
                fh.write(f"# {line}\n")
            fh.write(",".join(columns) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
    finally:
        if close:
            fh.close()


def _json_val(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def _read_series(path: str, as_levels: bool) -> np.ndarray:
    data = np.loadtxt(path, comments="#", ndmin=1)
    if data.ndim != 1:
        raise ValueError(f"{path}: expected a single numeric column")
    return np.diff(data) if as_levels else data


def _params(args) -> "StableParams":
    return validate_params(args.alpha, args.sigma, args.gamma)


def _config_header(args, extra: dict | None = None) -> list[str]:
    items = {
        "alpha": args.alpha,
        "sigma": args.sigma,
        "gamma": args.gamma,
        "seed": args.seed,
        "horizon": args.horizon,
        "multiplier": args.multiplier,
    }
    if extra:
        items.update(extra)
    return [
        f"levylab {__version__}",
        " ".join(f"{k}={_fmt(v)}" for k, v in items.items()),
    ]


def cmd_simulate(args) -> int:
    p = _params(args)
    scheme = horizon_scheme(args.horizon, args.multiplier)
    series = generate_increments(p, scheme.n_samples, args.seed)
    fh, close = _open_out(args.output)
    try:
        for line in _config_header(args, {"n": scheme.n_samples}):
            fh.write(f"# {line}\n")
        for v in series.values:
            fh.write(_fmt(float(v)) + "\n")
    finally:
        if close:
            fh.close()
    return EXIT_OK


def _load_or_simulate(args) -> tuple[np.ndarray, list[str]]:
    notes = []
    if args.input:
        values = _read_series(args.input, args.levels)
        notes.append(f"input={args.input}")
    else:
        p = _params(args)
        scheme = horizon_scheme(args.horizon, args.multiplier)
        values = generate_increments(p, scheme.n_samples, args.seed).values
    return values, notes


def cmd_scaling(args) -> int:
    values, notes = _load_or_simulate(args)
    lcm = horizon_scheme(args.horizon, 1).lcm
    n_used = (len(values) // lcm) * lcm
    if n_used == 0:
        raise ValueError(
            f"need at least lcm(1..{args.horizon}) = {lcm} increments, got {len(values)}"
        )
    if n_used != len(values):
        print(
            f"warning: truncated {len(values) - n_used} trailing increments "
            f"(length must be a multiple of lcm(1..{args.horizon}) = {lcm})",
            file=sys.stderr,
        )
        notes.append(f"truncated_to={n_used}")
        values = values[:n_used]
    scheme = horizon_scheme(args.horizon, n_used // lcm)
    series = IncrementSeries(
        params=_params(args), lag=1, seed=args.seed, values=values
    )
    qs = np.asarray(args.q, dtype=float) if args.q else default_q_grid(args.alpha)
    grid = moment_grid(series, qs, scheme)
    header = _config_header(args, {"n": n_used}) + notes

    fit_rows = []
    for q in qs:
        f = fit_scaling(grid, q)
        nu_th = theoretical_nu(float(q), args.alpha)
        fit_rows.append(
            (
                float(q),
                f.nu_hat,
                f.stderr,
                f.r2,
                empirical_nu(float(q), args.alpha),
                float("nan") if nu_th is MOMENT_DOES_NOT_EXIST else float(nu_th),
            )
        )
    _write_table(
        args.output,
        ["q", "nu_hat", "stderr", "r2", "nu_empirical", "nu_theoretical"],
        fit_rows,
        header,
        args.format,
    )
    if args.grid_output:
        grid_rows = [
            (float(q), int(tau), grid.moment(float(q), int(tau)))
            for q in qs
            for tau in grid.taus
        ]
        _write_table(
            args.grid_output, ["q", "tau", "moment"], grid_rows, header, args.format
        )
    return EXIT_OK


def cmd_ratio(args) -> int:
    p = _params(args)
    q = args.q[0] if args.q else 3.0
    cfg = McConfig(
        params=p,
        q=q,
        taus=(args.tau,),
        scheme=horizon_scheme(args.horizon, max(args.multipliers)),
        replicas=args.replicas,
        master_seed=args.seed,
    )
    report = ratio_convergence_study(cfg, args.tau, args.multipliers)
    rows = [
        (int(n), float(m), float(s), report.target)
        for n, m, s in zip(report.ns, report.medians, report.spreads)
    ]
    _write_table(
        args.output,
        ["n", "median", "iqr", "target"],
        rows,
        _config_header(args, {"q": q, "tau": args.tau, "replicas": args.replicas}),
        args.format,
    )
    final_ok = abs(report.medians[-1] - report.target) <= args.tolerance * report.target
    iqr_ok = all(np.diff(report.spreads) < 0)
    return EXIT_OK if final_ok and iqr_ok else EXIT_ASSERTION


def cmd_limits(args) -> int:
    p = _params(args)
    q = args.q[0] if args.q else 3.0
    scheme = horizon_scheme(args.horizon, args.multiplier)
    taus = tuple(args.taus)
    cfg = McConfig(
        params=p,
        q=q,
        taus=taus,
        scheme=scheme,
        replicas=args.replicas,
        master_seed=args.seed,
    )
    rows = []
    ok = True

    kind = NormingKind.CENTERED_LOG if q == p.alpha else NormingKind.POWER_NORMED
    spec = norming_spec(kind, q, p.alpha, p.sigma)
    inv = tau_invariance_test(cfg, spec, threads=args.threads)
    for ti, tj, ks in inv.pairs:
        rows.append(
            (f"tau_invariance_{kind.value}", ti, tj, ks.statistic, ks.threshold, ks.passed)
        )
    ok &= inv.passed

    raw = norming_spec(NormingKind.RAW, q, p.alpha, p.sigma)
    neg = tau_invariance_test(cfg, raw, scale_by_tau=False, threads=args.threads)
    for ti, tj, ks in neg.pairs:
        rows.append(("negative_control_raw", ti, tj, ks.statistic, ks.threshold, ks.passed))
    ok &= not neg.passed  # the control must fail

    for tau in taus:
        if tau < 2 or scheme.n_samples % tau:
            continue
        ks = equality_in_law_test(cfg, tau, threads=args.threads)
        rows.append(("equality_in_law", 1, tau, ks.statistic, ks.threshold, ks.passed))
        ok &= ks.passed

    _write_table(
        args.output,
        ["test", "tau_a", "tau_b", "ks_statistic", "ks_threshold", "passed"],
        rows,
        _config_header(args, {"q": q, "replicas": args.replicas}),
        args.format,
    )
    return EXIT_OK if ok else EXIT_ASSERTION


def cmd_extremes(args) -> int:
    p = _params(args)
    rows = []
    violations = 0
    for tau in (2, 3, 5):
        for q in (0.5, 1.0, 1.5, 3.0):
            bad = sandwich_sweep(args.vectors, tau, q, seed=args.seed)
            violations += bad
            rows.append(("vector_sandwich", tau, q, args.vectors, bad))
    xi_grid = np.linspace(0.01, 10.0, 1000)
    for q in (0.3, 1.0, 2.0, 4.0):
        bad = sum(0 if check_scalar_inequalities(float(xi), q) else 1 for xi in xi_grid)
        violations += bad
        rows.append(("scalar_inequalities", 0, q, len(xi_grid), bad))
    q = args.q[0] if args.q else 2.0 * p.alpha
    lam = lambda_constants(q, p, args.tau)
    rows.append(("lambda_constants_delta", args.tau, q, 1, lam.delta))
    rows.append(("lambda_constants_k", args.tau, q, 1, lam.k_const))
    rows.append(("lambda_1", args.tau, q, 1, float(lambda_sequence(1, lam))))
    _write_table(
        args.output,
        ["check", "tau", "q", "count", "result"],
        rows,
        _config_header(args, {"vectors": args.vectors}),
        args.format,
    )
    return EXIT_OK if violations == 0 else EXIT_ASSERTION


def cmd_tails(args) -> int:
    p = _params(args)
    if args.input:
        values = _read_series(args.input, args.levels)
    else:
        scheme = horizon_scheme(args.horizon, args.multiplier)
        values = generate_increments(p, scheme.n_samples, args.seed).values
    abs_vals = np.abs(values)
    alpha_hat = estimate_tail_exponent(abs_vals[abs_vals > 0], fraction=args.fraction)
    asym = abs_tail_asymptote(p, 1.0)
    x = float(np.quantile(abs_vals, 0.999))
    prefactor_hat = x**p.alpha * float(np.mean(abs_vals > x))
    rows = [
        ("tail_exponent", alpha_hat, p.alpha, abs(alpha_hat - p.alpha)),
        ("tail_prefactor", prefactor_hat, asym.prefactor,
         abs(prefactor_hat - asym.prefactor) / asym.prefactor),
    ]
    _write_table(
        args.output,
        ["quantity", "estimate", "reference", "deviation"],
        rows,
        _config_header(args, {"fraction": args.fraction}),
        args.format,
    )
    ok = abs(alpha_hat - p.alpha) <= args.alpha_tolerance
    ok &= abs(prefactor_hat - asym.prefactor) <= args.prefactor_tolerance * asym.prefactor
    return EXIT_OK if ok else EXIT_ASSERTION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="levylab",
        description="Simulate self-similar Levy processes and analyse moment scaling.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--alpha", type=float, default=1.5)
        sp.add_argument("--sigma", type=float, default=1.0)
        sp.add_argument("--gamma", type=float, default=0.0)
        sp.add_argument("--horizon", type=int, default=10)
        sp.add_argument("--multiplier", type=int, default=1)
        sp.add_argument("--q", type=float, action="append", default=None)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--replicas", type=int, default=20)
        sp.add_argument("--input", default=None)
        sp.add_argument("--levels", action="store_true",
                        help="treat input values as path levels; first-difference them")
        sp.add_argument("--output", default=None)
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--format", choices=["csv", "json"], default="csv")

    sp = sub.add_parser("simulate", help="write a seeded series of unit increments")
    common(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("scaling", help="moment grid and scaling-function fits")
    common(sp)
    sp.add_argument("--grid-output", default=None)
    sp.set_defaults(func=cmd_scaling)

    sp = sub.add_parser("ratio", help="stochastically normalized ratio study")
    common(sp)
    sp.add_argument("--tau", type=int, default=2)
    sp.add_argument("--multipliers", type=int, nargs="+", default=[4, 40, 400])
    sp.add_argument("--tolerance", type=float, default=0.15)
    sp.set_defaults(func=cmd_ratio)

    sp = sub.add_parser("limits", help="distributional limit harnesses (KS tests)")
    common(sp)
    sp.add_argument("--taus", type=int, nargs="+", default=[1, 3])
    sp.set_defaults(func=cmd_limits)

    sp = sub.add_parser("extremes", help="sandwich-inequality sweeps and constants")
    common(sp)
    sp.add_argument("--tau", type=int, default=2)
    sp.add_argument("--vectors", type=int, default=100_000)
    sp.set_defaults(func=cmd_extremes)

    sp = sub.add_parser("tails", help="tail exponent and prefactor diagnostics")
    common(sp)
    sp.add_argument("--fraction", type=float, default=0.05)
    sp.add_argument("--alpha-tolerance", type=float, default=0.1)
    sp.add_argument("--prefactor-tolerance", type=float, default=0.15)
    sp.set_defaults(func=cmd_tails)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError, ValueError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
