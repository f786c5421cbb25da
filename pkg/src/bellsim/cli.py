"""Command-line front end.

Exit codes: 0 success / satisfied, 1 inequality violated, 2 usage or input
error, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from contextlib import contextmanager
from typing import IO

import numpy as np

from . import gedanken, ineq, seqspin
from .core import InternalConsistencyError, format_real
from .csvio import (REPORT_FIELDS, DataFormatError, dump_json, format_bool,
                    format_optional, read_data_columns, report_row, write_rows)
from .hvsampler import check_seed

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_USAGE = 2
EXIT_IO = 3

SEED_ENV = "BELLSIM_SEED"
DEFAULT_TRIALS = 1_000_000

# (theta_A, theta_B, theta_B') for the paired stationary/nonstationary comparison
DEMO_ANGLES = (0.0, 3 * math.pi / 4, math.pi / 4)


class UsageError(Exception):
    pass


def finite_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"angle must be finite: {text!r}")
    return value


def non_negative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {text!r}")
    return value


def seed_arg(text: str) -> int:
    try:
        return check_seed(int(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get(SEED_ENV)
    if env is None or not env.strip():
        return 0
    try:
        return check_seed(int(env))
    except ValueError:
        raise UsageError(f"{SEED_ENV}={env!r} is not an unsigned 64-bit integer") from None


def to_radians(args, value: float) -> float:
    return math.radians(value) if args.degrees else value


def _add_common(p: argparse.ArgumentParser, trials_default: int = DEFAULT_TRIALS,
                formats=("csv", "json"), format_default="csv") -> None:
    p.add_argument("--trials", type=non_negative_int, default=trials_default,
                   help=f"Monte Carlo trials; 0 skips simulation (default {trials_default})")
    p.add_argument("--seed", type=seed_arg, default=None,
                   help=f"64-bit seed (default ${SEED_ENV} or 0)")
    p.add_argument("--format", choices=formats, default=format_default)
    p.add_argument("--workers", type=non_negative_int, default=1,
                   help="threads for simulation; 0 uses every CPU (output is unaffected)")
    p.add_argument("--degrees", action="store_true", help="read angle flags as degrees")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bellsim",
        description="Nonstationary Bell correlations: simulation and inequality audits.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gedanken", help="simulate A, B and counterfactual B'")
    p.add_argument("--theta-a", type=finite_float, required=True)
    p.add_argument("--theta-b", type=finite_float, required=True)
    p.add_argument("--theta-b-prime", type=finite_float, required=True)
    p.add_argument("--dump-trials", metavar="PATH")
    _add_common(p)
    p.set_defaults(handler=cmd_gedanken)

    p = sub.add_parser("sequential", help="simulate three successive spin measurements")
    p.add_argument("--theta1", type=finite_float, required=True)
    p.add_argument("--theta2", type=finite_float, required=True)
    p.add_argument("--dump-trials", metavar="PATH")
    _add_common(p)
    p.set_defaults(handler=cmd_sequential)

    p = sub.add_parser("audit", help="audit +/-1 data columns from a CSV file")
    p.add_argument("--input", required=True, metavar="PATH", help="CSV file, or - for stdin")
    p.add_argument("--form", choices=("bell3", "chsh4"), required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(handler=cmd_audit)

    p = sub.add_parser("sweep", help="tabulate correlations and inequality over an angle grid")
    p.add_argument("--experiment", choices=("gedanken", "sequential", "stationary"),
                   required=True)
    p.add_argument("--parameter", choices=("theta_b", "theta_b_prime", "theta1", "theta2"),
                   required=True)
    p.add_argument("--start", type=finite_float, required=True)
    p.add_argument("--stop", type=finite_float, required=True)
    p.add_argument("--steps", type=non_negative_int, required=True)
    p.add_argument("--theta-a", type=finite_float, default=0.0)
    p.add_argument("--theta-b", type=finite_float, default=0.0)
    p.add_argument("--theta-b-prime", type=finite_float, default=0.0)
    p.add_argument("--theta1", type=finite_float, default=0.0)
    p.add_argument("--theta2", type=finite_float, default=0.0)
    p.add_argument("--convention", choices=[c.value for c in ineq.StationaryAssumption],
                   default=ineq.StationaryAssumption.ALL_PAIRS_NEGATIVE_COSINE.value)
    _add_common(p, trials_default=0, formats=("csv",))
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("demo-violation",
                       help="nonstationary vs stationary correlations at (0, 3pi/4, pi/4)")
    _add_common(p, formats=("text", "csv", "json"), format_default="text")
    p.set_defaults(handler=cmd_demo_violation)
    return parser


@contextmanager
def open_output(path: str):
    try:
        fh = open(path, "w", newline="")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc
    with fh:
        yield fh


def _corr_value(corr, pair):
    return None if corr is None else corr[pair]


def _experiment_payload(name, config, pairs, labels, analytic, empirical,
                        analytic_report, empirical_report):
    return {
        "experiment": name,
        "config": config,
        "correlations": {
            label: {"analytic": analytic[pair], "empirical": _corr_value(empirical, pair)}
            for label, pair in zip(labels, pairs)
        },
        "reports": {
            "analytic": analytic_report.as_dict(),
            "empirical": None if empirical_report is None else empirical_report.as_dict(),
        },
    }


def _write_experiment_csv(out, labels, pairs, analytic, empirical,
                          analytic_report, empirical_report):
    write_rows(out, ("pair", "analytic", "empirical"),
               ((label, format_real(analytic[pair]),
                 format_optional(_corr_value(empirical, pair)))
                for label, pair in zip(labels, pairs)))
    out.write("\n")
    rows = [["analytic", *report_row(analytic_report)]]
    if empirical_report is not None:
        rows.append(["empirical", *report_row(empirical_report)])
    write_rows(out, ("source", *REPORT_FIELDS), rows)


def cmd_gedanken(args, out: IO[str]) -> int:
    theta_a, theta_b, theta_bp = (to_radians(args, v)
                                  for v in (args.theta_a, args.theta_b, args.theta_b_prime))
    seed = resolve_seed(args.seed)
    if args.dump_trials and args.trials == 0:
        raise UsageError("--dump-trials requires --trials >= 1")

    analytic = gedanken.analytic_correlations(theta_a, theta_b, theta_bp)
    analytic_report = gedanken.bell_lhs_gedanken(theta_a, theta_b, theta_bp)
    empirical = empirical_report = None
    if args.trials:
        config = gedanken.GedankenConfig(theta_a, theta_b, theta_bp, args.trials, seed)
        empirical = gedanken.run_experiment(config, args.workers)
        empirical_report = gedanken.empirical_report(config, args.workers)
        if args.dump_trials:
            with open_output(args.dump_trials) as fh:
                gedanken.write_trial_dump(config, fh)

    labels = ("ab", "abprime", "bbprime")
    if args.format == "json":
        config_dict = {"theta_a": theta_a, "theta_b": theta_b, "theta_b_prime": theta_bp,
                       "trials": args.trials, "seed": seed}
        dump_json(_experiment_payload("gedanken", config_dict, gedanken.PAIRS, labels,
                                      analytic, empirical, analytic_report,
                                      empirical_report), out)
    else:
        _write_experiment_csv(out, labels, gedanken.PAIRS, analytic, empirical,
                              analytic_report, empirical_report)
    return EXIT_OK


def cmd_sequential(args, out: IO[str]) -> int:
    theta1, theta2 = to_radians(args, args.theta1), to_radians(args, args.theta2)
    seed = resolve_seed(args.seed)
    if args.dump_trials and args.trials == 0:
        raise UsageError("--dump-trials requires --trials >= 1")

    analytic = seqspin.analytic_chain_correlations(theta1, theta2)
    analytic_report = seqspin.bell_lhs_chain(theta1, theta2)
    empirical = empirical_report = None
    if args.trials:
        config = seqspin.ChainConfig(theta1, theta2, args.trials, seed)
        empirical = seqspin.run_chain(config, args.workers)
        empirical_report = seqspin.empirical_report(config, args.workers)
        if args.dump_trials:
            with open_output(args.dump_trials) as fh:
                seqspin.write_trial_dump(config, fh)

    labels = ("s0s1", "s1s2", "s0s2")
    if args.format == "json":
        config_dict = {"theta1": theta1, "theta2": theta2, "trials": args.trials, "seed": seed}
        dump_json(_experiment_payload("sequential", config_dict, seqspin.PAIRS, labels,
                                      analytic, empirical, analytic_report,
                                      empirical_report), out)
    else:
        _write_experiment_csv(out, labels, seqspin.PAIRS, analytic, empirical,
                              analytic_report, empirical_report)
    return EXIT_OK


def cmd_audit(args, out: IO[str]) -> int:
    try:
        if args.input == "-":
            data = read_data_columns(sys.stdin)
        else:
            with open(args.input, newline="") as fh:
                data = read_data_columns(fh)
    except (DataFormatError, ValueError) as exc:
        raise UsageError(f"{args.input}: {exc}") from None

    expected = 3 if args.form == "bell3" else 4
    if len(data) != expected:
        raise UsageError(f"--form {args.form} needs {expected} columns, "
                         f"{args.input} has {len(data)}: {', '.join(data.names)}")
    audit = ineq.bell3_audit if args.form == "bell3" else ineq.chsh4_audit
    try:
        report = audit(data)
    except InternalConsistencyError as exc:
        print(f"bellsim: internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_VIOLATED

    if args.format == "json":
        dump_json(report.as_dict(), out)
    else:
        write_rows(out, REPORT_FIELDS, [report_row(report)])
    return EXIT_OK if report.satisfied else EXIT_VIOLATED


SWEEP_PARAMETERS = {
    "gedanken": ("theta_b", "theta_b_prime"),
    "stationary": ("theta_b", "theta_b_prime"),
    "sequential": ("theta1", "theta2"),
}
GEDANKEN_SWEEP_HEADER = ("theta", "corr_ab", "corr_abprime", "corr_bbprime",
                         "emp_ab", "emp_abprime", "emp_bbprime", "lhs", "margin", "violated")
SEQUENTIAL_SWEEP_HEADER = ("theta", "corr_s0s1", "corr_s1s2", "corr_s0s2",
                           "emp_s0s1", "emp_s1s2", "emp_s0s2", "lhs", "margin", "violated")


def sweep_rows(experiment: str, parameter: str, grid, fixed: dict, trials: int, seed: int,
               convention: str, workers: int | None = None):
    """Yield one CSV row (list of strings) per grid point, in grid order."""
    for theta in grid:
        angles = dict(fixed, **{parameter: float(theta)})
        empirical = None
        if experiment == "sequential":
            args = (angles["theta1"], angles["theta2"])
            analytic = seqspin.analytic_chain_correlations(*args)
            report = seqspin.bell_lhs_chain(*args)
            pairs = seqspin.PAIRS
            if trials:
                empirical = seqspin.run_chain(seqspin.ChainConfig(*args, trials, seed), workers)
        else:
            args = (angles["theta_a"], angles["theta_b"], angles["theta_b_prime"])
            pairs = gedanken.PAIRS
            if experiment == "stationary":
                analytic = ineq.stationary_correlations(*args, convention)
                report = ineq.stationary_lhs(*args, convention)
            else:
                analytic = gedanken.analytic_correlations(*args)
                report = gedanken.bell_lhs_gedanken(*args)
                if trials:
                    empirical = gedanken.run_experiment(
                        gedanken.GedankenConfig(*args, trials, seed), workers)
        yield ([format_real(theta)]
               + [format_real(analytic[p]) for p in pairs]
               + [format_optional(_corr_value(empirical, p)) for p in pairs]
               + [format_real(report.lhs), format_real(report.margin),
                  format_bool(report.violated)])


def cmd_sweep(args, out: IO[str]) -> int:
    if args.parameter not in SWEEP_PARAMETERS[args.experiment]:
        raise UsageError(f"--parameter {args.parameter} does not apply to "
                         f"--experiment {args.experiment}")
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    if args.start == args.stop:
        raise UsageError("--start and --stop must differ")
    if args.experiment == "stationary" and args.trials:
        raise UsageError("the stationary assignment has no simulation; use --trials 0")
    seed = resolve_seed(args.seed)
    fixed = {name: to_radians(args, getattr(args, name))
             for name in ("theta_a", "theta_b", "theta_b_prime", "theta1", "theta2")}
    grid = np.linspace(to_radians(args, args.start), to_radians(args, args.stop), args.steps)
    header = SEQUENTIAL_SWEEP_HEADER if args.experiment == "sequential" else GEDANKEN_SWEEP_HEADER
    write_rows(out, header, sweep_rows(args.experiment, args.parameter, grid, fixed,
                                       args.trials, seed, args.convention, args.workers))
    return EXIT_OK


def demo_payload(trials: int, seed: int, workers: int | None = None) -> dict:
    theta_a, theta_b, theta_bp = DEMO_ANGLES
    nonstat = gedanken.analytic_correlations(*DEMO_ANGLES)
    stat = ineq.stationary_correlations(*DEMO_ANGLES)
    entries = [
        ("nonstationary", "analytic", nonstat, gedanken.bell_lhs_gedanken(*DEMO_ANGLES)),
    ]
    if trials:
        config = gedanken.GedankenConfig(theta_a, theta_b, theta_bp, trials, seed)
        entries.append(("nonstationary", "empirical", gedanken.run_experiment(config, workers),
                        gedanken.empirical_report(config, workers)))
    entries.append(("stationary", "assumed", stat, ineq.stationary_lhs(*DEMO_ANGLES)))
    return {
        "angles": {"theta_a": theta_a, "theta_b": theta_b, "theta_b_prime": theta_bp},
        "convention": ineq.StationaryAssumption.ALL_PAIRS_NEGATIVE_COSINE.value,
        "trials": trials,
        "seed": seed,
        "results": [
            {"construction": construction, "source": source,
             "correlations": {"ab": corr[gedanken.PAIR_AB],
                              "abprime": corr[gedanken.PAIR_AB_PRIME],
                              "bbprime": corr[gedanken.PAIR_BB_PRIME]},
             "report": report.as_dict()}
            for construction, source, corr, report in entries
        ],
    }


def _write_demo_text(payload: dict, out: IO[str]) -> None:
    ang = payload["angles"]
    out.write("Three-list Bell inequality |<AB> - <AB'>| + <BB'> <= 1\n")
    out.write(f"settings: theta_A = {ang['theta_a']:.6f}, theta_B = {ang['theta_b']:.6f}, "
              f"theta_B' = {ang['theta_b_prime']:.6f} rad\n\n")
    out.write("{:<15}{:<11}{:>10}{:>10}{:>10}{:>11}  verdict\n".format(
        "construction", "source", "<AB>", "<AB'>", "<BB'>", "lhs"))
    for r in payload["results"]:
        c, rep = r["correlations"], r["report"]
        verdict = "satisfied" if rep["satisfied"] else "VIOLATED"
        out.write(f"{r['construction']:<15}{r['source']:<11}{c['ab']:>10.5f}"
                  f"{c['abprime']:>10.5f}{c['bbprime']:>10.5f}{rep['lhs']:>11.8f}  {verdict}\n")
    out.write("\nB' generated from A on the same trial gives <BB'> = "
              "1 - |cos(theta_B - theta_A) - cos(theta_B' - theta_A)|;\n"
              "replacing it with -cos(theta_B - theta_B') (a function of the angle "
              "difference alone) breaks the bound.\n")


def cmd_demo_violation(args, out: IO[str]) -> int:
    payload = demo_payload(args.trials, resolve_seed(args.seed), args.workers)
    if args.format == "json":
        dump_json(payload, out)
    elif args.format == "csv":
        write_rows(out, ("construction", "source", "ab", "abprime", "bbprime", *REPORT_FIELDS),
                   ([r["construction"], r["source"],
                     *(format_real(r["correlations"][k]) for k in ("ab", "abprime", "bbprime")),
                     r["report"]["form"], format_real(r["report"]["lhs"]),
                     format_real(r["report"]["bound"]), format_real(r["report"]["margin"]),
                     format_bool(r["report"]["satisfied"])]
                    for r in payload["results"]))
    else:
        _write_demo_text(payload, out)
    return EXIT_OK


def main(argv=None, out: IO[str] | None = None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args, out)
    except UsageError as exc:
        print(f"bellsim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"bellsim: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
