"""Command-line interface.

Subcommands: ``kernel-dump``, ``estimate``, ``tune``, ``sweep`` and ``signal``.
Primary outputs (CSV/JSON) are deterministic; a run manifest with a timestamp
is written next to every output file.
"""

from __future__ import annotations

import argparse
import csv
import datetime as dt
import io
import json
import sys

import numpy as np

from . import __version__
from .estimator import SampledSignal, delayed_config, estimate_series, window_subintervals
from .jacobi import JacobiParams
from .kernel import EstimatorConfig, discretize, kernel_function
from .signals import (
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_SNR_DB,
    DEFAULT_TS,
    demo_record,
    error_metrics,
    test_signal_truth,
)
from .sweep import SweepPlan, run_sweep
from .tuning import (
    NoInteriorMinimizer,
    bound_constants,
    delayed_bound_constants,
    optimal_window,
    psi,
    rate_exponent,
)
from .quadrature import QuadratureError


class UsageError(Exception):
    pass


def fmt(value) -> str:
    if value is None:
        return ""
    value = float(value)
    if not np.isfinite(value):
        return ""
    return format(value, ".17g")


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) if not isinstance(v, (int, np.integer)) else str(v) for v in row])
    return buf.getvalue()


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _emit(args, text: str, params: dict, suffix: str = "") -> None:
    """Write primary output to ``args.output`` (``-`` is stdout) plus its manifest."""
    target = args.output
    if target in (None, "-"):
        sys.stdout.write(text)
        return
    path = target + suffix
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(text)
    _write_manifest(args, params, [path])


def _write_manifest(args, params: dict, outputs: list[str]) -> None:
    manifest = {
        "command": args.command,
        "parameters": params,
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "outputs": outputs,
        "created": dt.datetime.now(dt.timezone.utc).isoformat(),
    }
    path = args.manifest or outputs[0] + ".manifest.json"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_json_text(manifest))


def _config_from(args, h=None) -> EstimatorConfig:
    try:
        params = JacobiParams(args.alpha, args.beta)
        config = EstimatorConfig(args.n, args.q, params, args.t_tau, h if h is not None else args.h)
        if getattr(args, "delayed", False):
            config = delayed_config(config)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return config


def _config_dict(config: EstimatorConfig) -> dict:
    return {
        "n": config.n,
        "q": config.q,
        "alpha": config.alpha,
        "beta": config.beta,
        "t_tau": config.t_tau,
        "h": config.h,
    }


def cmd_kernel_dump(args) -> None:
    config = _config_from(args)
    try:
        kernel = discretize(config, args.m, args.quadrature)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    nodes = kernel.nodes
    with np.errstate(divide="ignore", invalid="ignore"):
        q_values = np.asarray(kernel_function(config)(nodes), dtype=float)
    rows = [(j, nodes[j], q_values[j], kernel.weights[j]) for j in range(kernel.m + 1)]
    params = {**_config_dict(config), "m": args.m, "quadrature": args.quadrature}
    _emit(args, _csv_text(["j", "tau", "Q", "weight"], rows), params)


def _read_signal(path: str) -> SampledSignal:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"t", "value"} <= set(reader.fieldnames):
            raise UsageError(f"{path}: expected a header row with columns 't' and 'value'")
        rows = [(float(r["t"]), float(r["value"])) for r in reader]
    if len(rows) < 2:
        raise UsageError(f"{path}: need at least 2 samples")
    t = np.array([r[0] for r in rows])
    steps = np.diff(t)
    Ts = (t[-1] - t[0]) / (len(t) - 1)
    if Ts <= 0 or np.any(np.abs(steps - Ts) > 1e-9 * Ts):
        raise UsageError(f"{path}: time column is not a uniform grid (|dt - Ts| > 1e-9 Ts)")
    return SampledSignal(np.array([r[1] for r in rows]), float(Ts), float(t[0]))


def cmd_estimate(args) -> None:
    if args.demo == bool(args.input):
        raise UsageError("give exactly one of --input or --demo")
    truth = None
    noise = {}
    if args.demo:
        _, signal, spec = demo_record(args.snr_db, args.seed)
        truth = test_signal_truth()
        noise = {"snr_db": args.snr_db, "c": spec.c, "delta": spec.delta}
    else:
        signal = _read_signal(args.input)
    scheme = args.quadrature or ("trapezoid" if args.demo else "corrected")
    config = _config_from(args)
    try:
        window_subintervals(config.h, signal.Ts)
        series = estimate_series(signal, config, scheme)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    params = {**_config_dict(config), "quadrature": scheme, "delay": series.delay,
              "compare_at_delay": args.compare_at_delay, "demo": args.demo, **noise}
    if truth is None:
        text = _csv_text(["x", "estimate"], zip(series.times, series.values))
    else:
        metrics = error_metrics(series, truth, args.compare_at_delay)
        truth_values = series.values - metrics.residuals
        text = _csv_text(
            ["x", "estimate", "truth", "residual"],
            zip(series.times, series.values, truth_values, metrics.residuals),
        )
        params.update(rms_error=metrics.rms, max_abs_error=metrics.max_abs)
    print(f"delay = {series.delay:.6g}", file=sys.stderr)
    _emit(args, text, params)


def cmd_tune(args) -> None:
    config = _config_from(args, h=1.0)
    if args.M < 0:
        raise UsageError("--M must be non-negative")
    if args.delta is not None and not args.delta > 0:
        raise UsageError("--delta must be positive")
    if args.delayed:
        C, E = delayed_bound_constants(config, args.M)
    else:
        C, E = bound_constants(config, args.M)
    report = {
        **{k: v for k, v in _config_dict(config).items() if k != "h"},
        "delayed": args.delayed,
        "M": args.M,
        "delta": args.delta,
        "C_q": C,
        "E_q": E,
        "rate_exponent": rate_exponent(config.n, config.q, args.delayed),
        "h_star": None,
        "psi_at_h_star": None,
    }
    if args.delta is not None:
        h = optimal_window(C, E, config.n, config.q, args.delta, args.delayed)
        report["h_star"] = h
        report["psi_at_h_star"] = psi(C, E, config.n, config.q, args.delta, h, args.delayed)
    _emit(args, _json_text(report), report)


def cmd_sweep(args) -> None:
    try:
        params = JacobiParams(args.alpha, args.beta)
        if not (0 < args.delta_min < args.delta_max):
            raise ValueError("need 0 < --delta-min < --delta-max")
        plan = SweepPlan(
            n=args.n,
            q=args.q,
            params=params,
            delayed=args.delayed,
            deltas=tuple(np.logspace(np.log10(args.delta_min), np.log10(args.delta_max), args.levels)),
            trials=args.trials,
            M=args.M,
            dense_m=args.dense_m,
            noise_knots=args.noise_knots,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    result = run_sweep(plan, test_signal_truth(), args.seed)
    payload = result.to_dict()
    rows = [
        (lv.delta, lv.h_used, lv.m, lv.psi, lv.mean_error, lv.spread) for lv in result.levels
    ]
    csv_text = _csv_text(["delta", "h_used", "m", "psi", "mean_error", "spread"], rows)
    print(
        f"slope = {result.slope:.4f}, theory = {result.theoretical_exponent:.4f}, "
        f"pass = {result.passed}",
        file=sys.stderr,
    )
    if args.output in (None, "-"):
        sys.stdout.write(_json_text(payload))
        return
    paths = [args.output + ".csv", args.output + ".json"]
    for path, text in zip(paths, (csv_text, _json_text(payload))):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
    _write_manifest(args, payload["plan"], paths)


def cmd_signal(args) -> None:
    clean, noisy, spec = demo_record(args.snr_db, args.seed, args.samples, args.ts)
    rows = zip(clean.times, clean.samples, noisy.samples)
    params = {"samples": args.samples, "Ts": args.ts, "snr_db": args.snr_db, "c": spec.c, "delta": spec.delta}
    _emit(args, _csv_text(["x", "clean", "noisy"], rows), params)


def _add_estimator_flags(p, h_default=None, need_h=False):
    p.add_argument("--n", type=int, required=True, help="derivative order")
    p.add_argument("--q", type=int, default=0, help="truncation order")
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--t-tau", dest="t_tau", type=float, default=0.0, help="normalized delay in [0, 1]")
    if need_h:
        p.add_argument("--h", type=float, required=h_default is None, default=h_default, help="window length")


def _add_output_flags(p, help_text="output file ('-' for stdout)"):
    p.add_argument("--output", "-o", default="-", help=help_text)
    p.add_argument("--manifest", default=None, help="manifest path (default: <output>.manifest.json)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="causal-jacobi", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kernel-dump", help="nodes, kernel values and FIR weights as CSV")
    _add_estimator_flags(p, h_default=1.0, need_h=True)
    p.add_argument("--m", type=int, required=True, help="number of subintervals")
    p.add_argument("--delayed", action="store_true", help="use t_tau = theta_{q+1}")
    p.add_argument("--quadrature", choices=["corrected", "trapezoid"], default="corrected")
    _add_output_flags(p)
    p.set_defaults(func=cmd_kernel_dump)

    p = sub.add_parser("estimate", help="derivative estimates of a sampled signal")
    _add_estimator_flags(p, need_h=True)
    p.add_argument("--input", help="CSV with columns t,value on a uniform grid")
    p.add_argument("--demo", action="store_true", help="use the built-in noisy test signal")
    p.add_argument("--snr-db", type=float, default=DEFAULT_SNR_DB)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--delayed", action="store_true", help="use t_tau = theta_{q+1}")
    p.add_argument("--compare-at-delay", action="store_true", help="residuals against f^(n)(x - t_tau h)")
    p.add_argument(
        "--quadrature",
        choices=["corrected", "trapezoid"],
        default=None,
        help="discretization (default: trapezoid with --demo, corrected otherwise)",
    )
    _add_output_flags(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("tune", help="error-bound constants and optimal window as JSON")
    _add_estimator_flags(p)
    p.add_argument("--delayed", action="store_true", help="use t_tau = theta_{q+1} and the raised-order bound")
    p.add_argument("--M", type=float, required=True, help="bound on the relevant derivative of f")
    p.add_argument("--delta", type=float, default=None, help="noise level (needed for h*)")
    _add_output_flags(p)
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("sweep", help="convergence-rate sweep on the test signal")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--delayed", action="store_true")
    p.add_argument("--delta-min", type=float, default=1e-4)
    p.add_argument("--delta-max", type=float, default=1e-1)
    p.add_argument("--levels", type=int, default=6)
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--M", type=float, default=None, help="derivative bound (default: computed from the test signal)")
    p.add_argument("--dense-m", type=int, default=100)
    p.add_argument("--noise-knots", type=int, default=20)
    _add_output_flags(p, "output prefix for <prefix>.csv and <prefix>.json ('-' prints JSON)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("signal", help="the test record: x, clean and noisy samples as CSV")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--ts", type=float, default=DEFAULT_TS)
    p.add_argument("--snr-db", type=float, default=DEFAULT_SNR_DB)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    _add_output_flags(p)
    p.set_defaults(func=cmd_signal)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except UsageError as exc:
        parser.exit(2, f"{parser.prog} {args.command}: error: {exc}\n")
    except (NoInteriorMinimizer, QuadratureError, RuntimeError, ValueError, OSError) as exc:
        parser.exit(1, f"{parser.prog} {args.command}: {exc}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
