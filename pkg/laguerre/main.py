import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Sequence, Union

# Configure logging FIRST before any other imports
logging.basicConfig(
    level=logging.INFO,
    format='[%(levelname)s] %(name)s: %(message)s',
    force=True
)

from pydantic import ValidationError

from laguerre import config
from laguerre.commands import HANDLERS
from laguerre.commands.solve import solver_config
from laguerre.errors import ConfigValidationError, LaguerreError, UsageError
from laguerre.models.schemas import Command, Method, OperatorKind, RunConfig, SolverKind

logger = logging.getLogger(__name__)


def _coupling(text: str) -> Union[float, complex]:
    try:
        return float(text)
    except ValueError:
        pass
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a real or complex number: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps unset flags out of the namespace so --config values survive
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="JSON file with default settings")
    common.add_argument("--alpha", type=float, help="order alpha > 0")
    common.add_argument("--func", help="function descriptor, e.g. exp:1, monomial:1, bump:1,2,3")
    common.add_argument("--nu", type=float, help="weight exponent / contour abscissa")
    common.add_argument("--lambda", dest="lambda", type=_coupling, help="Volterra coupling (real or complex)")
    common.add_argument("--length", type=float, help="interval length l")
    common.add_argument("--tol", type=float, help="series and solver tolerance")
    common.add_argument("--grid", dest="grid_n", type=int, help="number of graded grid nodes")
    common.add_argument("--grading", type=float, help="grid grading exponent")
    common.add_argument("--method", choices=[m.value for m in Method], help="evaluation route for apply")
    common.add_argument("--operator", choices=[o.value for o in OperatorKind], help="operator for apply/mellin")
    common.add_argument("--solver", choices=[s.value for s in SolverKind], help="Volterra route for solve")
    common.add_argument("--tau-max", dest="tau_max", type=float, help="largest |tau| tabulated by mellin")
    common.add_argument("--out", "--output", dest="output", help="CSV path, '-' for stdout")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")

    parser = argparse.ArgumentParser(
        prog="laguerre",
        description="Laguerre fractional integrals, derivatives and Volterra equations",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        Command.APPLY: "apply an operator to a catalog function on the graded grid",
        Command.KERNEL: "tabulate the kernels k+ and k- and the constants C+ and C-",
        Command.MELLIN: "tabulate a Mellin multiplier along a vertical contour",
        Command.SOLVE: "solve f = g + lambda L^alpha f",
        Command.VERIFY: "run the invariant suite and print a PASS/FAIL table",
    }
    for command, text in helps.items():
        sub.add_parser(command.value, parents=[common], help=text, argument_default=argparse.SUPPRESS)
    return parser


def _load_config_file(path: str) -> dict[str, Any]:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigValidationError(f"cannot read config file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigValidationError(f"config file {path} must hold a JSON object")
    return data


def parse_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """Parse and validate the command line; --config values are overridden by flags"""
    parser = build_parser()
    try:
        namespace = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code in (0, None):
            raise
        raise UsageError("invalid command line (see usage above)") from exc

    explicit = vars(namespace)
    settings: dict[str, Any] = {}
    if "config" in explicit:
        settings.update(_load_config_file(explicit.pop("config")))
    settings.update(explicit)

    try:
        cfg = RunConfig.model_validate(settings)
        if cfg.command == Command.SOLVE:
            solver_config(cfg)
    except ValidationError as exc:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}" for err in exc.errors()
        )
        raise ConfigValidationError(problems) from exc
    return cfg


def run(cfg: RunConfig) -> int:
    """Execute one command, mapping computation failures to exit code 4"""
    if cfg.verbose:
        logging.getLogger("laguerre").setLevel(logging.DEBUG)
    logger.info(f"Running '{cfg.command.value}' (output dir {config.OUTPUT_DIR})")
    try:
        return HANDLERS[cfg.command](cfg)
    except LaguerreError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValidationError as exc:
        logger.error(f"invalid parameters reached a service: {exc}")
        print(f"error: {exc}", file=sys.stderr)
        return LaguerreError.exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (UsageError, ConfigValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
