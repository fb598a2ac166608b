"""Command-line interface: simulate / bounds / layout / linkbudget."""

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np

from .geometry import drop_users, export_layout_csv
from .coloring import color_scenario1, color_scenario2
from .harness import (
    RunConfig,
    bounds_config,
    emit_csv,
    format_summary,
    run_sweep,
    summarize,
)
from .linkbudget import transmit_snr


def _add_common(parser):
    parser.add_argument("--config", help="JSON config file mirroring RunConfig fields")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--out", help="output CSV path")
    parser.add_argument("--no-plot", action="store_true",
                        help="skip rendering PNG figures next to the CSV")


def _add_sweep_flags(parser):
    parser.add_argument("--iterations", type=int)
    parser.add_argument("--gamma-min", type=float, dest="gamma_min")
    parser.add_argument("--gamma-max", type=float, dest="gamma_max")
    parser.add_argument("--gamma-step", type=float, dest="gamma_step")
    parser.add_argument("--scenario", choices=["1", "2", "both"])
    parser.add_argument("--threads", type=int)
    parser.add_argument("--fixed-users", action="store_true",
                        help="freeze user positions across iterations")


def _build_config(args, default_out) -> RunConfig:
    config = RunConfig.from_json(args.config) if args.config else RunConfig()
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if getattr(args, "iterations", None) is not None:
        overrides["iterations"] = args.iterations
    if getattr(args, "gamma_min", None) is not None:
        overrides["gamma_min_db"] = args.gamma_min
    if getattr(args, "gamma_max", None) is not None:
        overrides["gamma_max_db"] = args.gamma_max
    if getattr(args, "gamma_step", None) is not None:
        overrides["gamma_step_db"] = args.gamma_step
    if getattr(args, "scenario", None) is not None:
        overrides["scenarios"] = (1, 2) if args.scenario == "both" else (int(args.scenario),)
    if getattr(args, "threads", None) is not None:
        overrides["threads"] = args.threads
    if getattr(args, "fixed_users", False):
        overrides["fixed_users"] = True
    if args.out is not None:
        overrides["out"] = args.out
    elif not args.config:
        overrides["out"] = default_out
    return dataclasses.replace(config, **overrides)


def _render_sweep_figure(result, csv_path):
    from .plots import plot_sweep  # deferred: matplotlib import is slow

    png = Path(csv_path).with_suffix(".png")
    plot_sweep(result, png)
    return png


def _cmd_simulate(args) -> int:
    config = _build_config(args, "sweep.csv")
    result = run_sweep(config)
    emit_csv(result, config.out)
    print(f"wrote {config.out}")
    try:
        print(format_summary(summarize(result)))
    except ValueError as exc:
        print(f"(no cross-system summary: {exc})")
    if not args.no_plot:
        print(f"wrote {_render_sweep_figure(result, config.out)}")
    return 0


def _cmd_bounds(args) -> int:
    config = bounds_config(_build_config(args, "bounds.csv"))
    result = run_sweep(config)
    emit_csv(result, config.out)
    print(f"wrote {config.out}")
    if not args.no_plot:
        print(f"wrote {_render_sweep_figure(result, config.out)}")
    return 0


def _cmd_layout(args) -> int:
    config = _build_config(args, "layout.csv")
    grid = config.grid()
    rng = np.random.default_rng(config.seed)
    users = drop_users(grid, rng)
    plan = None
    if grid.rows % 2 == 0 and grid.cols % 2 == 0:
        plan = color_scenario2(grid) if args.scenario == "2" else color_scenario1(grid)
    export_layout_csv(grid, users, config.out, plan=plan)
    print(f"wrote {config.out}")
    if not args.no_plot:
        from .plots import plot_layout

        png = Path(config.out).with_suffix(".png")
        plot_layout(grid, users, png, plan=plan)
        print(f"wrote {png}")
    return 0


def _cmd_linkbudget(args) -> int:
    config = _build_config(args, "unused.csv")
    b = config.budget
    print("link budget (dB terms):")
    print(f"  terminal RF power       {b.tx_power_dbw:+8.2f} dBW")
    print(f"  tx antenna gain         {b.tx_antenna_gain_db:+8.2f} dB")
    print(f"  free space loss         {-b.free_space_loss_db:+8.2f} dB")
    print(f"  atmospheric loss        {-b.atmospheric_loss_db:+8.2f} dB")
    print(f"  fading margin           {-b.fading_margin_db:+8.2f} dB")
    print(f"  receiver noise power    {-b.noise_power_dbw:+8.2f} dB (subtracted)")
    g0 = transmit_snr(b, include_sat_gain=False)
    g1 = transmit_snr(b, include_sat_gain=True)
    print(f"gamma without sat gain (pattern carries the {b.max_sat_gain_dbi:.0f} dBi peak): "
          f"{g0.gamma_db:.2f} dB")
    print(f"gamma with sat gain (unit-peak pattern):   {g1.gamma_db:.2f} dB")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="mudcap",
        description="Return-link capacity of multibeam mobile satellite systems: "
        "full-reuse MUD vs clustered MUD vs conventional 4-color decoding.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="Monte Carlo sweep over all systems")
    _add_common(p)
    _add_sweep_flags(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("bounds", help="analytic bounds and asymptote only (no MC)")
    _add_common(p)
    _add_sweep_flags(p)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("layout", help="export beam/user geometry and color plan")
    _add_common(p)
    p.add_argument("--scenario", choices=["1", "2"], default="1")
    p.set_defaults(func=_cmd_layout)

    p = sub.add_parser("linkbudget", help="print the transmit-SNR derivation")
    _add_common(p)
    p.set_defaults(func=_cmd_linkbudget)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
