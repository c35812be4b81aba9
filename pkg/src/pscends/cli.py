"""Command-line front end.

Subcommands: verify | certify | sweep | band | catalog | hypothesis.
Exit codes: 0 success/holds, 1 usage error, 2 negative verdict / violation.
Reports are JSON (append-only: existing files need --force); curve data goes
to CSV via --csv.  Relative output paths resolve against $PSCENDS_OUTDIR.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .errors import (BoundaryEscapeError, DegenerateMetricError, DomainError,
                     HypothesisError, UnreliableStepError)
from .reports import (OUTDIR_ENV, RunConfig, emit_plot_data, exit_code_for,
                      load_config_file, run, write_report)


def _add_output_flags(p: argparse.ArgumentParser):
    p.add_argument("--report", dest="report_path", metavar="PATH",
                   help=f"write the JSON report here (relative to ${OUTDIR_ENV} if set)")
    p.add_argument("--csv", dest="csv_path", metavar="PATH",
                   help="write curve/sweep data as CSV (17 significant digits)")
    p.add_argument("--force", action="store_true",
                   help="allow overwriting existing report/CSV files")
    p.add_argument("--config", metavar="YAML",
                   help="YAML file with defaults for this command's flags")
    p.add_argument("--seed", type=int, default=0, help="64-bit RNG seed (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pscends",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"pscends {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="closed form vs finite-difference oracle on catalog charts")
    p.add_argument("--entry", default="all", help="catalog entry name, or 'all'")
    p.add_argument("--coeff", type=float, help="free case coefficient (default: safe value)")
    p.add_argument("--samples", type=int, default=50, help="random sample points per entry")
    p.add_argument("--step", type=float, default=1e-4, help="finite-difference step")
    _add_output_flags(p)

    p = sub.add_parser("certify", help="positivity certificate for a dimension case")
    p.add_argument("--n", type=int, required=True, help="total dimension (>= 2)")
    p.add_argument("--coeff", type=float, required=True, help="free case coefficient")
    p.add_argument("--entry", help="catalog entry supplying the base (optional)")
    p.add_argument("--omega-sup", dest="omega_sup", type=float,
                   help="curvature-form sup norm for a synthetic flat base")
    p.add_argument("--t-max", dest="t_max", type=float, default=50.0)
    p.add_argument("--grid-points", dest="grid_points", type=int, default=2001)
    _add_output_flags(p)

    p = sub.add_parser("sweep", help="randomized falsification sweep / threshold curve")
    p.add_argument("--kind", choices=("band", "threshold"), default="band")
    p.add_argument("--count", type=int, default=100, help="models / curve points")
    p.add_argument("--one-sided", dest="one_sided", action="store_true",
                   help="audit the doubled (one-sided) width variant")
    p.add_argument("--n", type=int, help="total dimension (threshold sweep)")
    p.add_argument("--omega-sup", dest="omega_sup", type=float,
                   help="curvature-form sup norm (threshold sweep; default 1)")
    _add_output_flags(p)

    p = sub.add_parser("band", help="solve one band model and audit the width bound")
    p.add_argument("--genus", type=int, default=2)
    p.add_argument("--fiber-area", dest="fiber_area", type=float, default=1.0)
    p.add_argument("--phi", default="constant:1",
                   help="warp spec kind:amp[,rate] or samples:file.csv")
    p.add_argument("--half-width", dest="half_width", type=float, default=1.0)
    p.add_argument("--band-length", dest="band_length", type=float,
                   help="potential length L (default: the half-width)")
    p.add_argument("--eps2", type=float, default=0.0)
    p.add_argument("--one-sided", dest="one_sided", action="store_true")
    _add_output_flags(p)

    p = sub.add_parser("catalog", help="list catalog entries (machine readable)")
    _add_output_flags(p)

    p = sub.add_parser("hypothesis", help="area-growth hypothesis checker")
    p.add_argument("--pairs", help="inline samples 'r:A,r:A,...'")
    p.add_argument("--samples-csv", dest="samples_csv", help="CSV with columns r, A(r)")
    p.add_argument("--tail-window", dest="tail_window", type=int, default=3)
    _add_output_flags(p)

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    data = {k: v for k, v in vars(args).items() if k != "config" and v is not None}
    if getattr(args, "config", None):
        file_data = load_config_file(args.config)
        file_data.update(data)  # explicit flags win over config-file values
        data = file_data
    return RunConfig.from_mapping(data)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage problems; remap to the documented 1
        return 0 if exc.code in (0, None) else 1
    try:
        config = _config_from_args(args)
        report = run(config)
    except (DomainError, HypothesisError, FileNotFoundError, OSError, ValueError) as exc:
        print(f"pscends: error: {exc}", file=sys.stderr)
        return 1
    except (DegenerateMetricError, UnreliableStepError, BoundaryEscapeError) as exc:
        print(f"pscends: numerical failure: {exc}", file=sys.stderr)
        return 1

    try:
        if config.report_path:
            path = write_report(report, config.report_path, force=config.force)
            print(f"report written to {path}", file=sys.stderr)
        if config.csv_path:
            path = emit_plot_data(report, config.csv_path, force=config.force)
            print(f"plot data written to {path}", file=sys.stderr)
    except (FileExistsError, DomainError, OSError) as exc:
        print(f"pscends: error: {exc}", file=sys.stderr)
        return 1

    results = dict(report["results"])
    results.pop("curves", None)
    display = {"verdict": results.get("verdict"), **{k: v for k, v in results.items()
                                                     if k not in ("rows", "entries")}}
    if config.command == "catalog":
        display = report["results"]
    elif config.command == "verify":
        display["entries"] = {name: {"max_rel_err": tab["max_rel_err"],
                                     "profile": tab["profile"], "coeff": tab["coeff"]}
                              for name, tab in report["results"]["entries"].items()}
    print(json.dumps(display, indent=2, sort_keys=True, default=str))
    return exit_code_for(report)


if __name__ == "__main__":
    raise SystemExit(main())
