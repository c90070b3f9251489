import argparse
import importlib
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel

from config import Config
from matvec.errors import ConfigError, DimensionError, ParameterError, ValidationError
from utils.records import ExperimentConfig

logger = logging.getLogger("bench")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VALIDATION = 3


def int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from None


def name_list(text: str) -> List[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


class Harness:
    """Command line front end; every subcommand is contributed by an extension module."""

    initial_extensions = [
        "experiments.compare",
        "experiments.opcount",
        "experiments.crossover",
        "experiments.accuracy",
    ]

    def __init__(self, config: Optional[Config] = None, console: Optional[Console] = None):
        self.config = config or Config()
        self.console = console or Console()
        self.parser = argparse.ArgumentParser(
            prog="bench.py",
            description="Hankel matrix-vector product experiments",
            formatter_class=argparse.RawDescriptionHelpFormatter,
            epilog="""
Examples:
  python bench.py compare --n 1,2,3,64 --methods schoolbook,karatsuba
  python bench.py opcount --n 2,4,8,16,32,64 --max-depth 1
  python bench.py crossover --ring float64 --n 2,4,8,16,32,64,128,256
  python bench.py accuracy --n 4,16 --bits 64,256 --limb-bits 16
            """,
        )
        self.parser.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level")
        self.subparsers = self.parser.add_subparsers(dest="command", required=True)
        self.experiments: Dict[str, object] = {}

    def load_extensions(self):
        for ext in self.initial_extensions:
            try:
                importlib.import_module(ext).setup(self)
                logger.debug("Loaded %s", ext)
            except Exception as e:
                self.console.print(f"❌ Failed to load {ext}: {e}")
                logger.exception("extension %s failed to load", ext)

    def add_experiment(self, experiment):
        defaults = experiment.defaults
        config = self.config
        sub = self.subparsers.add_parser(experiment.name, help=experiment.help)
        sub.add_argument("--n", type=int_list, default=int_list(defaults["n"]), help="comma separated orders")
        sub.add_argument("--ring", default=defaults["ring"], help="float64, exact-int or fixed-point")
        sub.add_argument("--methods", type=name_list, default=name_list(defaults["methods"]),
                         help="comma separated subset of schoolbook, fft, decomp, karatsuba, karatsuba-parallel")
        sub.add_argument("--bits", type=int_list, default=int_list(defaults.get("bits", str(config.BITS))),
                         help="fixed-point precision(s) in bits")
        sub.add_argument("--limb-bits", type=int_list, default=[config.LIMB_BITS], help="limb size(s) in bits")
        sub.add_argument("--cutoff", type=int, default=config.CUTOFF, help="schoolbook below this order")
        sub.add_argument("--max-depth", type=int, default=None, help="limit the recursion depth")
        sub.add_argument("--parallel-depth", type=int, default=config.PARALLEL_DEPTH,
                         help="recursion levels that run their subproducts concurrently")
        sub.add_argument("--seed", type=int, default=config.SEED)
        sub.add_argument("--reps", type=int, default=config.REPETITIONS, help="timing repetitions (median is kept)")
        sub.add_argument("--generator", default=defaults["generator"],
                         help="uniform-int, uniform-real, hilbert or ones")
        sub.add_argument("--out", type=Path, default=None, help="output file (default: OUTPUT_DIR/<command>.<format>)")
        sub.add_argument("--format", choices=["csv", "json"], default="csv")
        sub.set_defaults(experiment=experiment)
        self.experiments[experiment.name] = experiment

    def experiment_config(self, args) -> ExperimentConfig:
        return ExperimentConfig(
            methods=tuple(args.methods),
            ring=args.ring,
            sizes=tuple(args.n),
            bits=tuple(args.bits),
            limb_bits=tuple(args.limb_bits),
            cutoff=args.cutoff,
            max_depth=args.max_depth,
            seed=args.seed,
            generator=args.generator,
            repetitions=args.reps,
            output_format=args.format,
            parallel_depth=args.parallel_depth,
        )

    def output_path(self, args, name: str) -> Path:
        if args.out is not None:
            return args.out
        return Path(self.config.OUTPUT_DIR) / f"{name}.{args.format}"

    def run(self, argv: Optional[List[str]] = None) -> int:
        args = self.parser.parse_args(argv)
        if args.verbose:
            logging.getLogger().setLevel(logging.DEBUG)
        try:
            return args.experiment(args)
        except Exception as error:
            return self.on_command_error(args.command, error)

    def on_command_error(self, command: str, error: Exception) -> int:
        """Map an experiment failure to a styled message and an exit code."""
        if isinstance(error, (ConfigError, ParameterError, DimensionError)):
            self.console.print(Panel(
                f"{error}\n\nRun `python bench.py {command} --help` for the accepted values.",
                title="❌ Invalid Configuration",
                border_style="red",
            ))
            return EXIT_CONFIG
        if isinstance(error, ValidationError):
            self.console.print(Panel(str(error), title="🚫 Validation Failed", border_style="yellow"))
            return EXIT_VALIDATION
        logger.exception("Unhandled error in %s", command)
        raise error


def configure_logging(level: str, console: Console):
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=console, rich_tracebacks=True, show_path=False)],
    )


def main(argv: Optional[List[str]] = None) -> int:
    console = Console()
    try:
        config = Config.load()
    except ConfigError as e:
        console.print(f"❌ {e}")
        return EXIT_CONFIG
    configure_logging(config.LOG_LEVEL, console)
    harness = Harness(config, console)
    harness.load_extensions()
    return harness.run(argv)


if __name__ == "__main__":
    sys.exit(main())
