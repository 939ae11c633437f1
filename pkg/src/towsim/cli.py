"""``towsim`` command line: run, steady, validate."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .model import ConfigError, validate_config
from .numerics import SingularMatrixError
from .scenario import load_reference_scenario, load_scenario
from .shiptrack import KNOT, TrajectoryError
from .simulate import SimulationError, run_scenario, write_csv
from .statics import REFERENCE_PITCH_DEG, steady_state

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERIC = 2


def steady_command(cfg, speed: float) -> str:
    """Human-readable steady-state report for ``cfg`` towed at ``speed`` m/s."""
    s = steady_state(cfg, speed)
    buoy = "opposes weight" if s.buoyancy_opposes_weight else "adds to weight"
    lines = [
        f"speed               {speed:.6g} m/s ({speed / KNOT:.6g} kn)",
        f"drag model          {s.drag_model} (buoyancy {buoy})",
        f"cable pitch psi1    {s.psi_cable_deg:.4f} deg from vertical, {90 - s.psi_cable_deg:.4f} deg from horizontal",
        f"array pitch psi2    {s.psi_array_deg:.4f} deg from vertical, {90 - s.psi_array_deg:.4f} deg from horizontal",
        f"tow tension T1      {s.tension_tow:.6g} N",
        f"array tension T2    {s.tension_array:.6g} N",
    ]
    for name, f in (("cable", s.cable), ("array", s.array)):
        lines.append(f"{name:<6} forces        drag {f.drag:.6g} N, weight {f.weight:.6g} N, buoyancy {f.buoyancy:.6g} N")
    lines += [
        f"depth estimate      {s.depth_estimate:.6g} m",
        f"reference psi1      {REFERENCE_PITCH_DEG} deg (reported value; not independently reproduced, "
        f"the drag law behind it is not stated)",
    ]
    return "\n".join(lines)


def _load(path):
    return load_reference_scenario() if path is None else load_scenario(path)


def _overrides(cfg, args):
    changes = {}
    if args.dt is not None:
        changes["dt"] = args.dt
    if args.stride is not None:
        changes["output_stride"] = args.stride
    if args.duration is not None and args.duration > 0:
        changes["duration"] = args.duration
    return validate_config(cfg.with_overrides(**changes)) if changes else cfg


def _cmd_run(args) -> int:
    cfg, traj = _load(args.config)
    cfg = _overrides(cfg, args)
    records = run_scenario(cfg, traj, duration=args.duration)
    write_csv(records, args.out, n_links=cfg.n_links)
    print(f"wrote {len(records)} records ({cfg.n_links} links) to {args.out}")
    return EXIT_OK


def _cmd_steady(args) -> int:
    cfg, traj = _load(args.config)
    speed = traj.speed if args.speed_knots is None else args.speed_knots * KNOT
    if speed < 0:
        raise ConfigError("--speed-knots must be non-negative")
    print(steady_command(cfg, speed))
    return EXIT_OK


def _cmd_validate(args) -> int:
    cfg, traj = _load(args.config)
    print(f"ok: {cfg.n_links} links, {len(traj.legs)} legs, {traj.duration:g} s trajectory, "
          f"dt {cfg.dt:g} s, duration {cfg.duration:g} s")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="towsim", description="Towed cable and sensor-array yaw dynamics.")
    sub = parser.add_subparsers(dest="command", required=True)
    config_help = "scenario file (default: bundled reference scenario)"

    run = sub.add_parser("run", help="simulate a scenario and write a CSV time series")
    run.add_argument("--config", type=Path, help=config_help)
    run.add_argument("--out", type=Path, required=True)
    run.add_argument("--dt", type=float)
    run.add_argument("--duration", type=float)
    run.add_argument("--stride", type=int)
    run.set_defaults(func=_cmd_run)

    steady = sub.add_parser("steady", help="print the steady-state pitch and tension report")
    steady.add_argument("--config", type=Path, help=config_help)
    steady.add_argument("--speed-knots", type=float)
    steady.set_defaults(func=_cmd_steady)

    validate = sub.add_parser("validate", help="check a scenario file")
    validate.add_argument("--config", type=Path, help=config_help)
    validate.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, TrajectoryError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SimulationError, SingularMatrixError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
