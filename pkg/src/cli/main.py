"""Command-line front end.

Usage:
    python -m src.cli.main stability --family maxwell --out out/table1
    python -m src.cli.main run --case sod --nx 500 --out out/sod
    python -m src.cli.main run --scheme yee --t-end 0.5 --snapshots 4
    python -m src.cli.main lowmach --mach 0.1 0.001 --threads 2
    python -m src.cli.main convergence --case smooth-vortex --levels 25 50 100
    python -m src.cli.main cases
    python -m src.cli.main run --config runs/kh.cfg --full-scale

Exit status: 0 on success, 1 when a solver fails, 2 on invalid input.
"""

import argparse
import logging
import sys
from typing import Any

from src.cli.config_file import build_config, read_config_file
from src.cli.writers import ArtifactWriter
from src.config import settings
from src.engine.errors import ConfigError, SolverError
from src.engine.runner import execute
from src.models.run_config import Family, Subcommand
from src.models.schemes import CaseId, FluxVariant, MaxwellSchemeId

logger = logging.getLogger(__name__)

HELP = {
    Subcommand.RUN: "Time-integrate one scheme or case and dump fields",
    Subcommand.STABILITY: "CFL_max table or linearized Euler stability map",
    Subcommand.CONVERGENCE: "Grid refinement study",
    Subcommand.LOWMACH: "Low Mach scaling series of the stationary vortex",
    Subcommand.CASES: "List the built-in cases",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="Flat key=value config file")
    common.add_argument(
        "--scheme", choices=[s.value for s in MaxwellSchemeId] + ["euler"], help="Scheme id"
    )
    common.add_argument("--family", choices=[f.value for f in Family], help="Equation family")
    common.add_argument("--case", choices=[c.value for c in CaseId], help="Euler test case")
    common.add_argument("--variant", choices=[v.value for v in FluxVariant], help="Euler flux")
    common.add_argument("--nx", type=int, help="Cells along x")
    common.add_argument("--ny", type=int, help="Cells along y")
    common.add_argument("--cfl", type=float, help="CFL number (default: per scheme or case)")
    common.add_argument("--t-end", dest="t_end", type=float, help="Final time")
    common.add_argument("--mach", type=float, nargs="+", help="Vortex Mach number(s)")
    common.add_argument("--levels", type=int, nargs="+", help="Refinement levels (cells)")
    common.add_argument("--beta-samples", dest="beta_samples", type=int,
                        help="Wavenumber samples per axis for stability sweeps")
    common.add_argument("--snapshots", type=int, help="Intermediate snapshots (default: 0)")
    common.add_argument("--threads", type=int, help="Worker threads (capped by SEQEXP_MAX_THREADS)")
    common.add_argument("--full-scale", dest="full_scale", action="store_true", default=None,
                        help="Kelvin-Helmholtz at 2000x1000")
    common.add_argument("--out", help=f"Output directory (default: {settings.output_dir})")
    common.add_argument("--log-level", dest="log_level", default=settings.log_level,
                        help=f"Logging level (default: {settings.log_level})")

    parser = argparse.ArgumentParser(
        prog="seqexp", description="Sequential-explicit solvers and stability analysis"
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for command, text in HELP.items():
        sub.add_parser(command.value, parents=[common], help=text, description=text)
    return parser


def overrides(args: argparse.Namespace) -> dict[str, Any]:
    keys = ("scheme", "family", "case", "variant", "nx", "ny", "cfl", "t_end", "mach", "levels",
            "beta_samples", "snapshots", "threads", "full_scale", "out")
    return {k: getattr(args, k) for k in keys}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=args.log_level.upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    try:
        file_values: dict[str, Any] = {}
        where: dict[str, int] = {}
        if args.config:
            file_values, where = read_config_file(args.config)
        config = build_config(
            {**file_values, "subcommand": args.subcommand},
            overrides(args),
            where,
            args.config or "<command line>",
        )
    except ConfigError as e:
        parser.error(str(e))

    try:
        artifacts = execute(config)
        ArtifactWriter(config.out, config).write_all(artifacts)
    except ConfigError as e:
        logger.error("%s", e)
        return 2
    except SolverError as e:
        logger.error("%s failed: %s", config.subcommand.value, e)
        return 1
    except ValueError as e:
        logger.error("Invalid input: %s", e)
        return 2

    if config.subcommand is Subcommand.CASES:
        for row in artifacts.tables["cases"].itertuples(index=False):
            print(f"{row.case:<15} {row.description}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
