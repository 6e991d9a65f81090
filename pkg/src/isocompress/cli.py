"""Command-line entry point.

Exit codes: 0 success, 2 invalid config, 3 infeasible physics, 4 solver or
invariant failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import sys
from pathlib import Path

from .config import ExperimentConfig, build_config, load_config
from .errors import ConfigError, InfeasibleError, InvariantError, SolverError
from .experiments import Table, run

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_SOLVER = 4

log = logging.getLogger("isocompress")

SUBCOMMANDS = {
    "example1": "example1",
    "spread": "spread",
    "epsilon-scan": "epsilon_scan",
    "cost-grid": "cost_grid",
    "general-pair": "general_pair",
}


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.17g}"
    return str(v)


def render_csv(table: Table) -> str:
    """CSV text: header first, a leading ``schema`` column, ``\\n`` line endings."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["schema", *table.columns])
    for row in table.rows:
        w.writerow([table.schema, *(format_value(v) for v in row)])
    return buf.getvalue()


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="isocompress",
        description="Isoenergetic well compression and binary discrimination costs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", type=Path, help="YAML experiment config")
        sp.add_argument("--out", type=Path, help="CSV output path (overrides output_path)")
        sp.add_argument("--tol", type=float, help="relative constraint tolerance of the solver")
        sp.add_argument("--quiet", action="store_true", help="suppress the summary")
    return parser


def _resolve(args) -> tuple[ExperimentConfig, Path]:
    scenario = SUBCOMMANDS[args.command]
    cfg = load_config(args.config, scenario) if args.config else build_config(scenario)
    if args.tol is not None:
        if not 0 < args.tol < 1:
            raise ConfigError("--tol must lie in (0, 1)")
        if "constraint_tol" not in cfg.parameters:
            raise ConfigError(f"--tol has no effect on {args.command}")
        cfg.parameters["constraint_tol"] = args.tol
    out = args.out or (Path(cfg.output_path) if cfg.output_path else None)
    if out is None:
        out = Path(f"{scenario}.csv")
    return cfg, out


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        cfg, out = _resolve(args)
        table = run(cfg)
    except ConfigError as exc:
        log.error("invalid config: %s", exc)
        return EXIT_CONFIG
    except InfeasibleError as exc:
        log.error("infeasible: %s", exc)
        return EXIT_INFEASIBLE
    except (SolverError, InvariantError) as exc:
        log.error("solver failure: %s", exc)
        return EXIT_SOLVER
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w", newline="") as fh:
            fh.write(render_csv(table))
    except OSError as exc:
        log.error("cannot write %s: %s", out, exc)
        return EXIT_CONFIG
    if not args.quiet:
        print(f"[{table.schema}]")
        for line in table.summary:
            print(line)
        print(f"wrote {len(table.rows)} rows to {out}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
