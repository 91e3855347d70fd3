"""Command-line front end.

Subcommands: analytic, simulate, sweep-rho, sweep-expected-t,
sweep-threshold, tradeoff, validate. Defaults follow the standard
configuration lambda=0.5, mu=1, nu=0.005, recovery=20, periods=100000.
Relative output paths resolve against $AGEMON_OUT_DIR when it is set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .analytics import analytic_report, error_rate_closed_form, mean_aoi_closed_form
from .errors import OracleError, ParameterError
from .experiments import ResultRow, SweepSpec, run_sweep
from .oracle import monte_carlo_cross_check
from .report import render_svg, write_csv
from .sim import SimParams, simulate
from .summary import summarize

DEFAULT_SEED = 20260810

_SWEEP_DEFAULTS = {
    "sweep-rho": ("rho", "0.05:0.95:0.05"),
    "sweep-expected-t": ("expected_T", "20:200:20"),
    "sweep-threshold": ("threshold", "1:20:1"),
    "tradeoff": ("rho", "0.05:0.95:0.05"),
}


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--lambda", dest="lam", type=float, default=0.5,
                        help="update generation rate (default 0.5)")
    parser.add_argument("--mu", type=float, default=1.0,
                        help="queue service rate (default 1.0)")
    parser.add_argument("--nu", type=float, default=0.005,
                        help="failure rate (default 0.005)")
    parser.add_argument("--recovery", type=float, default=20.0,
                        help="deterministic recovery duration in seconds (default 20)")
    parser.add_argument("--periods", type=int, default=100_000,
                        help="number of periods to simulate (default 100000)")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help=f"master seed (default {DEFAULT_SEED})")
    parser.add_argument("--enforce-assumption3", dest="require_delivery", action="store_true",
                        help="resample each period until at least one update is "
                             "delivered before the failure (conditioned runs)")


def _add_output_flags(parser: argparse.ArgumentParser, svg: bool = True) -> None:
    parser.add_argument("--out", help="CSV output path")
    if svg:
        parser.add_argument("--svg", help="SVG chart output path")
    parser.add_argument("--resamples", type=int, default=1000,
                        help="bootstrap resamples for confidence half-widths (0 disables)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="agemon",
        description="Freshness and failure-detection metrics for an update stream "
                    "from an intermittently failing sensor behind an M/M/1 queue.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analytic", help="print the closed-form report")
    _add_param_flags(p)
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")

    p = sub.add_parser("simulate", help="simulate one configuration and print its metrics")
    _add_param_flags(p)
    _add_output_flags(p, svg=False)

    for name, (variable, default_grid) in _SWEEP_DEFAULTS.items():
        help_text = {
            "sweep-rho": "sweep the service utilization (analytic + empirical age and error)",
            "sweep-expected-t": "sweep the mean working time E[T] = 1/nu",
            "sweep-threshold": "sweep the detector threshold on one shared simulation",
            "tradeoff": "age/error pairs over the utilization grid",
        }[name]
        p = sub.add_parser(name, help=help_text)
        _add_param_flags(p)
        _add_output_flags(p)
        p.add_argument("--grid", default=default_grid,
                       help=f"sweep grid as start:stop:step (default {default_grid})")
        p.add_argument("--analytic-only", action="store_true",
                       help="skip simulation, emit analytic columns only")

    p = sub.add_parser("validate", help="quadrature and Monte Carlo cross-check report")
    _add_param_flags(p)
    p.add_argument("--out", help="JSON output path")
    p.add_argument("--resamples", type=int, default=1000)
    return parser


def _parse_grid(text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ParameterError(f"grid must be start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(x) for x in parts)
    except ValueError as exc:
        raise ParameterError(f"grid must be numeric, got {text!r}") from exc
    return start, stop, step


def _resolve(path_text: str) -> Path:
    path = Path(path_text)
    base = os.environ.get("AGEMON_OUT_DIR")
    if base and not path.is_absolute():
        return Path(base) / path
    return path


def _params(args: argparse.Namespace) -> SimParams:
    return SimParams(
        lam=args.lam,
        mu=args.mu,
        nu=args.nu,
        r=args.recovery,
        periods=args.periods,
        master_seed=args.seed,
        require_delivery=args.require_delivery,
    )


def _cmd_analytic(args: argparse.Namespace) -> int:
    report = analytic_report(args.lam, args.mu, args.nu, args.recovery)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        for key, value in report.to_dict().items():
            print(f"{key} = {value}")
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    params = _params(args)
    summary = summarize(simulate(params), resamples=args.resamples)
    for key, value in summary.to_dict().items():
        print(f"{key} = {value}")
    if args.out:
        row = ResultRow(
            swept_var="rho",
            swept_value=params.rho,
            aoi_empirical=summary.aoi_time_average,
            err_empirical=summary.error.error_rate,
            fp_rate=summary.error.fp_rate,
            fn_rate=summary.error.fn_rate,
            seed=params.master_seed,
        )
        if args.resamples > 0:
            row.aoi_ci = summary.aoi_ci_halfwidth
            row.err_ci = summary.error_ci_halfwidth
        if params.rho < 1.0:
            row.aoi_analytic = mean_aoi_closed_form(params.lam, params.mu, params.nu, params.r)
            row.err_analytic = error_rate_closed_form(params.lam, params.nu, params.r)
        path = write_csv([row], _resolve(args.out), params)
        print(f"wrote {path}")
    return 0


_SVG_COLUMNS = {
    "rho": ("swept_value", ("aoi_analytic", "aoi_empirical", "err_analytic", "err_empirical")),
    "expected_T": ("swept_value", ("aoi_analytic", "aoi_empirical")),
    "threshold": ("swept_value", ("err_analytic", "err_empirical")),
    "tradeoff": ("aoi_empirical", ("err_empirical",)),
}


def _cmd_sweep(args: argparse.Namespace, command: str) -> int:
    variable, _ = _SWEEP_DEFAULTS[command]
    start, stop, step = _parse_grid(args.grid)
    spec = SweepSpec(variable=variable, start=start, stop=stop, step=step, fixed=_params(args))
    rows = run_sweep(spec, with_sim=not args.analytic_only, resamples=args.resamples)
    out = _resolve(args.out) if args.out else _resolve(f"{command}.csv")
    path = write_csv(rows, out, spec.fixed)
    print(f"wrote {path}")
    if args.svg:
        key = "tradeoff" if command == "tradeoff" else variable
        x_col, y_cols = _SVG_COLUMNS[key]
        if args.analytic_only:
            y_cols = tuple(c for c in y_cols if "analytic" in c) or y_cols
            if key == "tradeoff":
                x_col = "aoi_analytic"
                y_cols = ("err_analytic",)
        svg_path = render_svg(rows, x_col, y_cols, _resolve(args.svg), title=command)
        print(f"wrote {svg_path}")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    report = monte_carlo_cross_check(_params(args), resamples=args.resamples)
    text = json.dumps(report.to_dict(), indent=2)
    print(text)
    if args.out:
        path = _resolve(args.out)
        try:
            path.write_text(text + "\n", encoding="utf-8")
        except OSError as exc:
            raise OSError(f"could not write report {path}: {exc}") from exc
        print(f"wrote {path}")
    return 0


def run_subcommand(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "analytic":
            return _cmd_analytic(args)
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "validate":
            return _cmd_validate(args)
        return _cmd_sweep(args, args.command)
    except (ParameterError, OracleError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_subcommand(sys.argv[1:]))


if __name__ == "__main__":
    main()
