import logging
from typing import List

from rich.table import Table

from matvec.errors import ValidationError
from utils.generators import generate_hankel
from utils.records import ExperimentConfig, RunRecord, write_records
from utils.runner import exact_oracle, measure, mismatches, ring_for

logger = logging.getLogger(__name__)


def run_compare(config: ExperimentConfig) -> List[RunRecord]:
    """Run every selected method on identical instances and score it against the exact oracle.

    Records are ordered by ``n`` and then by the order of ``config.methods``.
    """
    ring = ring_for(config)
    records = []
    for n in config.sizes:
        matrix, x = generate_hankel(config.generator, n, config.seed, ring, config.precision)
        reference = exact_oracle(matrix, x)
        for method in config.methods:
            records.append(measure(method, matrix, x, ring, config, reference))
    return records


class CompareExperiment:
    name = "compare"
    help = "cross-validate the kernels against the exact schoolbook oracle"
    defaults = {
        "methods": "schoolbook,fft,karatsuba",
        "ring": "exact-int",
        "n": "1,2,3,4,8,16,32,64",
        "generator": "uniform-int",
    }

    def __init__(self, harness):
        self.harness = harness

    def __call__(self, args) -> int:
        config = self.harness.experiment_config(args)
        records = run_compare(config)

        table = Table(title="🔍 Oracle comparison", show_header=True, header_style="bold cyan")
        for column in ("method", "n", "ring", "time (µs)", "mults", "adds", "max rel error", "exact"):
            table.add_column(column, justify="right")
        for r in records:
            table.add_row(
                r.method,
                str(r.n),
                r.ring,
                f"{r.wall_time_ns / 1000:.1f}",
                "-" if r.mults is None else str(r.mults),
                "-" if r.adds is None else str(r.adds),
                f"{r.max_rel_error:.2e}",
                "-" if r.exact_match is None else ("✅" if r.exact_match else "❌"),
            )
        self.harness.console.print(table)

        path = write_records(records, self.harness.output_path(args, self.name), config.output_format)
        self.harness.console.print(f"📝 Wrote {len(records)} records to {path}")

        failed = mismatches(records)
        if failed:
            details = ", ".join(f"{r.method} n={r.n}" for r in failed)
            raise ValidationError(f"exact-ring results differ from the oracle: {details}")
        return 0


def setup(harness):
    harness.add_experiment(CompareExperiment(harness))
