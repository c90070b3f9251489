import logging
from dataclasses import dataclass
from typing import List, Optional

from rich.table import Table

from matvec.errors import ValidationError
from matvec.karatsuba import count_operations, op_count_bounds
from utils.records import ExperimentConfig, write_rows
from utils.runner import karatsuba_config

logger = logging.getLogger(__name__)

OPCOUNT_COLUMNS = (
    "n",
    "mults",
    "adds",
    "mult_bound",
    "add_bound",
    "published_add_bound",
    "schoolbook_mults",
    "passed",
    "ratio",
)


@dataclass(frozen=True)
class OpCountRow:
    n: int
    mults: int
    adds: int
    mult_bound: Optional[float]
    add_bound: Optional[float]
    published_add_bound: float
    passed: Optional[bool]
    ratio: Optional[float] = None

    @property
    def schoolbook_mults(self) -> int:
        return self.n * self.n

    def as_row(self) -> dict:
        row = {column: getattr(self, column) for column in OPCOUNT_COLUMNS}
        row["published_add_bound"] = round(self.published_add_bound, 1)
        if self.ratio is not None:
            row["ratio"] = round(self.ratio, 4)
        return row


def _envelope(n: int, max_depth: Optional[int]):
    """Asserted (multiplication, addition) envelopes; ``None`` where nothing is asserted."""
    if max_depth is None:
        bounds = op_count_bounds(n)
        return bounds.multiplications, bounds.additions
    if max_depth == 1:
        half = (n + 2) // 2
        return 3 * half * half, None
    return None, None


def run_opcount(config: ExperimentConfig) -> List[OpCountRow]:
    """Counted operations of the recursive kernel against the envelopes for each ``n``."""
    kconfig = karatsuba_config(config)
    counted = {n: count_operations(n, kconfig) for n in sorted(set(config.sizes))}
    rows = []
    for n, report in counted.items():
        mult_bound, add_bound = _envelope(n, config.max_depth)
        checks = []
        if mult_bound is not None:
            checks.append(report.multiplications <= mult_bound)
        if add_bound is not None:
            checks.append(report.additions <= add_bound)
        ratio = None
        if n > 1 and n & (n - 1) == 0 and n // 2 in counted:
            ratio = report.multiplications / counted[n // 2].multiplications
        rows.append(
            OpCountRow(
                n=n,
                mults=report.multiplications,
                adds=report.additions,
                mult_bound=mult_bound,
                add_bound=add_bound,
                published_add_bound=op_count_bounds(n).published_additions,
                passed=all(checks) if checks else None,
                ratio=ratio,
            )
        )
        if checks and not all(checks):
            logger.warning("n=%d: %d mults, %d adds exceed the envelope", n, report.multiplications, report.additions)
    return rows


class OpCountExperiment:
    name = "opcount"
    help = "count multiplications and additions of the recursive kernel against its bounds"
    defaults = {
        "methods": "karatsuba",
        "ring": "exact-int",
        "n": "2,4,8,16,32,64,128,256,512,1024",
        "generator": "ones",
    }

    def __init__(self, harness):
        self.harness = harness

    def __call__(self, args) -> int:
        config = self.harness.experiment_config(args)
        rows = run_opcount(config)

        table = Table(title="🧮 Operation counts", show_header=True, header_style="bold cyan")
        for column in ("n", "mults", "bound", "adds", "bound", "published adds", "n²", "M(n)/M(n/2)", "pass"):
            table.add_column(column, justify="right")
        for row in rows:
            table.add_row(
                str(row.n),
                str(row.mults),
                "-" if row.mult_bound is None else str(row.mult_bound),
                str(row.adds),
                "-" if row.add_bound is None else f"{row.add_bound:.1f}",
                f"{row.published_add_bound:.1f}",
                str(row.schoolbook_mults),
                "-" if row.ratio is None else f"{row.ratio:.4f}",
                "-" if row.passed is None else ("✅" if row.passed else "❌"),
            )
        self.harness.console.print(table)

        path = write_rows((r.as_row() for r in rows), self.harness.output_path(args, self.name), config.output_format, OPCOUNT_COLUMNS)
        self.harness.console.print(f"📝 Wrote {len(rows)} rows to {path}")

        failed = [r.n for r in rows if r.passed is False]
        if failed:
            raise ValidationError(f"operation counts exceed the envelope for n = {', '.join(map(str, failed))}")
        return 0


def setup(harness):
    harness.add_experiment(OpCountExperiment(harness))
