"""odhall command line.

    odhall run <config> [--out DIR]
    odhall linear-verify <config> [--steps N]
    odhall fit <series.csv> --column NAME --window t0:t1 [--window ...]
    odhall rates <series.csv> --model MODEL --window t0:t1 [--tolerance TOL]
    odhall lp <snapshot> --s S [--field NAME]
    odhall analyze <series.csv> [--rel-tol TOL]
    odhall sweep <config>... [--jobs K]

Exit codes: 0 success, 1 failed check, 2 blow-up, 64 usage or configuration
error, 74 I/O error.
"""

import argparse
import sys
from typing import (
    List,
    Optional,
)

from colorama import just_fix_windows_console

from odhall import __version__
from odhall.cli.commands import COMMANDS
from odhall.core.logging import logger
from odhall.domain.entities import ModelKind
from odhall.schemas import config_defaults
from odhall.shared.constants import (
    EXIT_CHECK_FAILED,
    EXIT_USAGE,
    INEQUALITY_REL_TOL,
)
from odhall.shared.exceptions import (
    OdhallError,
    UsageError,
)
from odhall.shared.utils import parse_window


class OdhallArgumentParser(argparse.ArgumentParser):
    """Argument parser that raises UsageError instead of exiting."""

    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def _window(text: str):
    try:
        return parse_window(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _config_epilog() -> str:
    rows = config_defaults()
    width = max(len(key) for key, _, _ in rows)
    lines = ["config keys (default):"]
    for key, default, description in rows:
        lines.append(f"  {key:<{width}}  {default:<12}  {description}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = OdhallArgumentParser(
        prog="odhall",
        description="Decay-rate laboratory for 2-D compressible Oldroyd-B and Hall-MHD flows.",
        epilog=_config_epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=OdhallArgumentParser)

    p = sub.add_parser("run", help="Integrate a configuration and write its output directory")
    p.add_argument("config", help="INI run configuration")
    p.add_argument("--out", default=None, help="Output directory (default: output.dir)")

    p = sub.add_parser("linear-verify", help="Compare linear steps with per-mode matrix exponentials")
    p.add_argument("config", help="INI run configuration")
    p.add_argument("--steps", type=int, default=None, help="Number of steps (default: t_end/dt)")

    p = sub.add_parser("fit", help="Fit a power-law decay exponent to a series column")
    p.add_argument("series", help="series.csv of a run")
    p.add_argument("--column", required=True, help="CSV column, l2_rho_u or l2_all")
    p.add_argument("--window", type=_window, action="append", required=True, help="t0:t1")
    p.add_argument("--header", action="store_true", help="Print the CSV header first")

    p = sub.add_parser("rates", help="Check fitted exponents against the decay targets")
    p.add_argument("series", help="series.csv of a run")
    p.add_argument("--model", required=True, choices=[kind.value for kind in ModelKind])
    p.add_argument("--window", type=_window, required=True, help="t0:t1")
    p.add_argument("--tolerance", type=float, default=None, help="Override the rate tolerance")

    p = sub.add_parser("lp", help="Per-block Littlewood-Paley dump of a snapshot")
    p.add_argument("snapshot", help="Snapshot file")
    p.add_argument("--s", type=float, required=True, help="Besov regularity index")
    p.add_argument("--field", default="all", help="rho, u, tau, B or all (one combined norm per block)")

    p = sub.add_parser("analyze", help="Energy-inequality check and tracker recomputation")
    p.add_argument("series", help="series.csv of a run")
    p.add_argument(
        "--rel-tol",
        type=float,
        default=INEQUALITY_REL_TOL,
        help="Violation threshold relative to E_sigma(0)/dt",
    )

    p = sub.add_parser("sweep", help="Run several configurations in parallel processes")
    p.add_argument("configs", nargs="+", help="INI run configurations")
    p.add_argument("--jobs", type=int, default=1, help="Worker processes")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point; returns the process exit code."""
    just_fix_windows_console()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except SystemExit as e:
        # --help and --version
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    except OdhallError as e:
        logger.error("command_failed", **e.to_dict())
        print(f"odhall: {e}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.exception("unexpected_error", error=str(e))
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
