import itertools
import logging
import math
from typing import List

from rich.table import Table

from matvec.decomposition import DecompAccuracyRecord, decomp_matvec, enlarged_complexity_estimate
from matvec.errors import ConfigError, ScaleError, ValidationError
from matvec.rings import FixedPointRing, limb_count
from utils.generators import generate_hankel
from utils.records import ExperimentConfig, write_rows

logger = logging.getLogger(__name__)

ACCURACY_COLUMNS = (
    "n", "bits", "limb_bits", "limbs", "max_rel_error", "max_abs_error", "bits_lost", "status", "exact_regime"
)


def run_accuracy_study(config: ExperimentConfig) -> List[DecompAccuracyRecord]:
    """One oracle-scored decomposition run per (n, bits, limb bits) grid point.

    Points whose limb weights cannot be held in a double are kept with status
    ``scale-error``, NaN errors and ``bits_lost = -1``.
    """
    if config.ring != "fixed-point":
        raise ConfigError("the accuracy study needs the fixed-point ring")
    records = []
    for n, bits, beta in itertools.product(config.sizes, config.bits, config.limb_bits):
        ring = FixedPointRing(bits)
        matrix, x = generate_hankel(config.generator, n, config.seed, ring, bits)
        try:
            _, record = decomp_matvec(matrix, x, beta, oracle=True)
        except ScaleError as e:
            logger.warning("n=%d b=%d beta=%d: %s", n, bits, beta, e)
            record = DecompAccuracyRecord(
                n=n,
                bits=bits,
                limb_bits=beta,
                limbs=limb_count(bits, beta),
                max_rel_error=math.nan,
                max_abs_error=math.nan,
                bits_lost=-1,
                status="scale-error",
            )
        records.append(record)
    return records


def inexact_exact_regime_rows(records: List[DecompAccuracyRecord]) -> List[DecompAccuracyRecord]:
    """Rows inside the exact regime that still differ from the oracle."""
    return [r for r in records if r.exact_regime and (r.max_rel_error != 0 or r.bits_lost > 0)]


def nondecreasing_in_bits(records: List[DecompAccuracyRecord]) -> dict:
    """For each (n, limb bits): whether bits lost never drops as the precision grows."""
    trends = {}
    for key, group in itertools.groupby(
        sorted((r for r in records if r.status == "ok"), key=lambda r: (r.n, r.limb_bits, r.bits)),
        key=lambda r: (r.n, r.limb_bits),
    ):
        lost = [r.bits_lost for r in group]
        trends[key] = all(a <= b for a, b in zip(lost, lost[1:]))
    return trends


class AccuracyExperiment:
    name = "accuracy"
    help = "measure the precision lost by the limb decomposition over an (n, bits, limb bits) grid"
    defaults = {
        "methods": "decomp",
        "ring": "fixed-point",
        "n": "4,16,64",
        "bits": "64,256,1024,4096",
        "generator": "uniform-real",
    }

    def __init__(self, harness):
        self.harness = harness

    def __call__(self, args) -> int:
        config = self.harness.experiment_config(args)
        records = run_accuracy_study(config)

        table = Table(title="🎯 Decomposition accuracy", show_header=True, header_style="bold cyan")
        for column in ("n", "bits", "β", "l", "m log m", "max rel error", "bits lost", "exact", "status"):
            table.add_column(column, justify="right")
        for r in records:
            table.add_row(
                str(r.n),
                str(r.bits),
                str(r.limb_bits),
                str(r.limbs),
                f"{enlarged_complexity_estimate(r.n, r.bits, r.limb_bits):.0f}",
                f"{r.max_rel_error:.2e}",
                str(r.bits_lost),
                "yes" if r.exact_regime else "-",
                "✅" if r.status == "ok" else f"⚠️ {r.status}",
            )
        self.harness.console.print(table)

        for (n, beta), monotone in nondecreasing_in_bits(records).items():
            trend = "never decreases" if monotone else "is not monotone"
            self.harness.console.print(f"📈 n={n}, β={beta}: bits lost {trend} as the precision grows")

        path = write_rows((r.as_row() for r in records), self.harness.output_path(args, self.name), config.output_format, ACCURACY_COLUMNS)
        self.harness.console.print(f"📝 Wrote {len(records)} grid points to {path}")

        failed = inexact_exact_regime_rows(records)
        if failed:
            points = ", ".join(f"(n={r.n}, b={r.bits}, β={r.limb_bits})" for r in failed)
            raise ValidationError(f"exact-regime decomposition results differ from the oracle at {points}")
        return 0


def setup(harness):
    harness.add_experiment(AccuracyExperiment(harness))
