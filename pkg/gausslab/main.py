import argparse
import logging
import sys
from typing import Optional, Sequence

from . import config as settings
from .commands import check_commands, example_commands, geometry_commands, polynomial_commands, sweep_commands
from .commands.router import CommandError
from .models import OutputFormat, RunConfig
from .services._errors import ParseError
from .services.report_service import emit_report, exit_code

logger = logging.getLogger(__name__)

# --- All command routers, in help order ---
ROUTERS = [
    polynomial_commands.router,
    geometry_commands.router,
    check_commands.router,
    example_commands.router,
    sweep_commands.router,
]


def _theta(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot read angles from {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    source = common.add_mutually_exclusive_group()
    source.add_argument("--poly", help="polynomial expression, e.g. \"(z1-2)*(z1^2+1)\"")
    source.add_argument("--poly-file", help="file holding one polynomial; '#' starts a comment")
    common.add_argument("--theta", type=_theta, help="rotation angles a,b,... (default: all zero)")
    common.add_argument("--k", type=int, default=1, help="1-based coordinate index")
    common.add_argument("--tol", type=float, default=settings.GAUSSLAB_TOL)
    common.add_argument("--trials", type=int, default=settings.GAUSSLAB_TRIALS)
    common.add_argument("--seed", type=int, default=settings.GAUSSLAB_SEED)
    common.add_argument("--count", type=int, help="sweep size override")
    common.add_argument("--format", dest="output_format", choices=[f.value for f in OutputFormat],
                        default=settings.GAUSSLAB_FORMAT)
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")

    parser = argparse.ArgumentParser(
        prog="gausslab",
        description="Checks critical-point location results for polynomials in one and several variables.",
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="command")
    for router in ROUTERS:
        for command in router.commands:
            sub = commands.add_parser(command.name, aliases=list(command.aliases), parents=[common],
                                      help=command.help, description=command.help)
            for argument in command.arguments:
                sub.add_argument(*argument.flags, **argument.options)
            sub.set_defaults(handler=command.handler, command_name=command.name, needs_poly=command.needs_poly)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Runs one command and prints its report.

    Exit codes: 0 pass, 1 fail, 2 usage or input error, 3 inconclusive.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else settings.GAUSSLAB_LOG_LEVEL,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    name = args.command_name
    if args.needs_poly and args.poly is None and args.poly_file is None:
        parser.print_usage(sys.stderr)
        print(f"gausslab {name}: --poly or --poly-file is required", file=sys.stderr)
        return 2

    try:
        config = RunConfig(command=name, poly_text=args.poly, poly_file=args.poly_file, theta=args.theta,
                           k=args.k, tol=args.tol, trials=args.trials, seed=args.seed,
                           output_format=args.output_format, count=args.count)
        report = args.handler(args, config)
    except CommandError as e:
        print(f"gausslab {name}: {e.detail}", file=sys.stderr)
        return e.exit_code
    except ParseError as e:
        print(f"gausslab {name}: parse error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        logger.debug("%s rejected its input", name, exc_info=True)
        print(f"gausslab {name}: {e}", file=sys.stderr)
        return 2

    sys.stdout.write(emit_report(report, config.output_format) + "\n")
    return exit_code(report)
