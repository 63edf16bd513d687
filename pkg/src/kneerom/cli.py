"""``rom`` command line tool.

Exit codes: 0 success, 1 usage, 2 data error, 3 numeric/degenerate error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import simulate as sim
from .cv_baseline import extract_trace
from .discretize import DiscretizeConfig, KneeAngleTrace
from .errors import RomError
from .gravity import FilterSpec
from .pipeline import (
    RunConfig,
    compare,
    filter_info,
    read_angle_csv,
    run_session,
    write_angle_csv,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _targets(text):
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid target list {text!r}") from None


def _add_filter_args(p):
    p.add_argument("--rate", type=float, default=250.0, help="sampling rate, Hz")
    p.add_argument("--cutoff", type=float, default=1.0, help="low-pass cutoff, Hz")
    p.add_argument("--order", type=int, default=4, help="filter order (even)")


def build_parser():
    parser = _Parser(prog="rom", description="Knee range of motion from two accelerometers.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="compute knee angle, holds and reports for a session")
    p.add_argument("thigh_csv")
    p.add_argument("shank_csv")
    p.add_argument("--method", choices=("a", "b"), default="a")
    _add_filter_args(p)
    p.add_argument("--window-s", type=float, default=1.0)
    p.add_argument("--hold-std", type=float, default=1.0)
    p.add_argument("--move-std", type=float, default=4.0)
    p.add_argument("--targets", type=_targets, default=(30.0, 60.0, 90.0))
    p.add_argument("--tol", type=float, default=5.0)
    p.add_argument("--ceiling", type=float)
    p.add_argument("--floor", type=float)
    p.add_argument("--no-y-correction", action="store_true")
    p.add_argument(
        "--no-delay-compensation",
        action="store_true",
        help="keep raw sample times instead of subtracting the filter delay",
    )
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("compare", help="error of an angle trace against a baseline")
    p.add_argument("angle_csv")
    p.add_argument("baseline_csv")
    p.add_argument("--baseline-kind", choices=("cv", "synthetic"), default="synthetic")

    p = sub.add_parser("cv-extract", help="marker angles from a frame manifest")
    p.add_argument("manifest")
    p.add_argument("--out", required=True, type=Path, help="output CSV path")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("filter-info", help="print filter coefficients and response")
    _add_filter_args(p)

    p = sub.add_parser("simulate", help="write a synthetic hinge session")
    p.add_argument("--profile", choices=("hinge", "walking", "staircase"), default="hinge")
    p.add_argument("--duration", type=float, default=10.0)
    p.add_argument("--rate", type=float, default=250.0)
    p.add_argument("--fps", type=float, default=10.0)
    p.add_argument("--noise", type=float, default=0.0, help="noise std, m/s^2")
    p.add_argument("--disturbance", type=float, default=0.0, help="amplitude, m/s^2")
    p.add_argument("--disturbance-hz", type=float, default=2.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-frames", action="store_true")
    p.add_argument("--out", required=True, type=Path)
    return parser


def _run(args):
    cfg = RunConfig(
        method=args.method,
        filter=FilterSpec(args.order, args.cutoff, args.rate),
        discretize=DiscretizeConfig(args.window_s, args.hold_std, args.move_std),
        targets=args.targets,
        tolerance=args.tol,
        ceiling=args.ceiling,
        floor=args.floor,
        out_dir=args.out,
        correct_y_offset=not args.no_y_correction,
        compensate_delay=not args.no_delay_compensation,
    )
    result = run_session(args.thigh_csv, args.shank_csv, cfg)
    print(f"samples={len(result.trace)} holds={len(result.holds)} "
          f"alerts={len(result.report.alerts)} delay_s={result.delay_s:.4f}")
    for target, tol, count in result.report.bins:
        print(f"target {target:g}+-{tol:g}: {count}")


def _compare(args):
    m = compare(read_angle_csv(args.angle_csv), read_angle_csv(args.baseline_csv),
                args.baseline_kind)
    print(f"max_abs_error={m.max_abs_error:.4f}")
    print(f"peaks={len(m.per_peak_errors)} "
          f"fraction_peaks_within_5deg={m.fraction_peaks_within_5deg:.4f}")
    for t, e in zip(m.peak_times, m.per_peak_errors):
        print(f"peak t={t:.3f} error={e:.4f}")


def _cv_extract(args):
    angles, failures = extract_trace(args.manifest, workers=args.workers)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    if angles:
        trace = KneeAngleTrace([a.t for a in angles], [a.angle for a in angles])
        write_angle_csv(args.out, trace, column="angle_deg")
    else:
        args.out.write_text("t_s,angle_deg\n", encoding="utf-8")
    for f in failures:
        print(f"frame t={f.t:.3f} {f.path}: {f.reason}", file=sys.stderr)
    print(f"frames={len(angles) + len(failures)} measured={len(angles)} failed={len(failures)}")


def _simulate(args):
    if args.profile == "hinge":
        motion = sim.hinge_motion(args.duration, args.rate)
    elif args.profile == "walking":
        motion = sim.walking_motion(args.duration, args.rate)
    else:
        motion = sim.staircase_motion(rate=args.rate)
    written = sim.write_session(
        args.out, motion, fps=args.fps, noise_std=args.noise,
        disturbance_amp=args.disturbance, disturbance_hz=args.disturbance_hz,
        seed=args.seed, frames=not args.no_frames,
    )
    for name, path in written.items():
        print(f"{name}: {path}")


COMMANDS = {
    "run": _run,
    "compare": _compare,
    "cv-extract": _cv_extract,
    "filter-info": lambda a: print(filter_info(FilterSpec(a.order, a.cutoff, a.rate)), end=""),
    "simulate": _simulate,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except RomError as exc:
        print(f"rom: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, ValueError) as exc:
        print(f"rom: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
