import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from rich.table import Table

from matvec.fft import fft_operation_estimate
from matvec.karatsuba import count_operations
from utils.generators import generate_hankel
from utils.records import ExperimentConfig, RunRecord, write_records, write_rows
from utils.runner import karatsuba_config, measure, ring_for

logger = logging.getLogger(__name__)

FFT_NOTE = (
    "FFT has been reported to overtake the direct product only beyond n = 8000 at 32768-bit "
    "precision; that figure depends on hardware and the big-number library and is not checked here."
)


@dataclass(frozen=True)
class CrossoverSummary:
    """Where the faster of two methods changes over the tested orders."""

    first: str
    second: str
    faster_at_start: str
    flip_n: Optional[int]

    def as_row(self) -> dict:
        return {
            "pair": f"{self.first} vs {self.second}",
            "faster_at_start": self.faster_at_start,
            "flip_n": "none in range" if self.flip_n is None else self.flip_n,
        }


def find_flips(records: List[RunRecord]) -> List[CrossoverSummary]:
    """Smallest tested ``n`` at which each method pair swaps places by median time."""
    times: Dict[Tuple[str, int], int] = {(r.method, r.n): r.wall_time_ns for r in records}
    methods = list(dict.fromkeys(r.method for r in records))
    sizes = sorted({r.n for r in records})
    summaries = []
    for first, second in itertools.combinations(methods, 2):
        leader = None
        flip = None
        for n in sizes:
            faster = first if times[(first, n)] <= times[(second, n)] else second
            if leader is None:
                leader = faster
            elif faster != leader:
                flip = n
                break
        summaries.append(CrossoverSummary(first, second, leader, flip))
    return summaries


def counted_flip(config: ExperimentConfig) -> Optional[int]:
    """Smallest tested ``n`` where the recursive kernel needs fewer multiplications than ``n**2``."""
    for n in sorted(config.sizes):
        if count_operations(n, karatsuba_config(config)).multiplications < n * n:
            return n
    return None


def run_crossover(config: ExperimentConfig) -> Tuple[List[RunRecord], List[CrossoverSummary]]:
    """Median timings and counts per (method, n). Measures only; nothing is asserted."""
    ring = ring_for(config)
    records = []
    for method in config.methods:
        for n in sorted(config.sizes):
            matrix, x = generate_hankel(config.generator, n, config.seed, ring, config.precision)
            records.append(measure(method, matrix, x, ring, config, with_oracle=False))
            logger.info("timed %s at n=%d", method, n)
    return records, find_flips(records)


class CrossoverExperiment:
    name = "crossover"
    help = "time the kernels over a range of orders and report where they cross"
    defaults = {
        "methods": "schoolbook,karatsuba,fft",
        "ring": "float64",
        "n": "2,4,8,16,32,64,128,256,512,1024",
        "generator": "uniform-int",
    }

    def __init__(self, harness):
        self.harness = harness

    def __call__(self, args) -> int:
        config = self.harness.experiment_config(args)
        if max(config.sizes) < 10 * min(config.sizes):
            logger.warning("the tested orders span less than a decade; crossover points may be missed")
        records, flips = run_crossover(config)

        table = Table(title="⏱️ Crossover timings", show_header=True, header_style="bold cyan")
        for column in ("method", "n", "median (µs)", "mults", "adds", "30 n log n"):
            table.add_column(column, justify="right")
        for r in records:
            table.add_row(
                r.method,
                str(r.n),
                f"{r.wall_time_ns / 1000:.1f}",
                "-" if r.mults is None else str(r.mults),
                "-" if r.adds is None else str(r.adds),
                f"{fft_operation_estimate(r.n):.0f}" if r.method == "fft" else "-",
            )
        self.harness.console.print(table)

        for summary in flips:
            where = "none in range" if summary.flip_n is None else f"n = {summary.flip_n}"
            self.harness.console.print(
                f"🔀 {summary.first} vs {summary.second}: {summary.faster_at_start} faster first, flips at {where}"
            )
        if "karatsuba" in config.methods or "karatsuba-parallel" in config.methods:
            counted = counted_flip(config)
            where = "none in range" if counted is None else f"n = {counted}"
            self.harness.console.print(
                f"🧮 First order with fewer multiplications than the direct product: {where}"
            )
        self.harness.console.print(f"[dim]{FFT_NOTE}[/dim]")

        path = self.harness.output_path(args, self.name)
        write_records(records, path, config.output_format)
        summary_path = path.with_name(f"{path.stem}_summary{path.suffix}")
        write_rows((s.as_row() for s in flips), summary_path, config.output_format, ("pair", "faster_at_start", "flip_n"))
        self.harness.console.print(f"📝 Wrote {len(records)} timings to {path} and {len(flips)} flip rows to {summary_path}")
        return 0


def setup(harness):
    harness.add_experiment(CrossoverExperiment(harness))
