"""Experiment configuration, result records and their CSV/JSON writers."""
import csv
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Mapping, Optional, Sequence, Tuple

from matvec.errors import ConfigError
from matvec.rings import MAX_LIMB_BITS, RINGS
from utils.generators import GENERATORS

logger = logging.getLogger(__name__)

METHODS = ("schoolbook", "fft", "decomp", "karatsuba", "karatsuba-parallel")
FORMATS = ("csv", "json")

RUN_COLUMNS = (
    "method",
    "n",
    "ring",
    "bits",
    "limb_bits",
    "cutoff",
    "wall_time_ns",
    "mults",
    "adds",
    "max_rel_error",
    "exact_match",
)


@dataclass(frozen=True)
class ExperimentConfig:
    """One validated experiment run.

    ``bits`` and ``limb_bits`` are grids; the accuracy study sweeps all of
    them, the other experiments use the first value of each.
    """

    methods: Tuple[str, ...] = ("schoolbook", "karatsuba")
    ring: str = "exact-int"
    sizes: Tuple[int, ...] = (2, 4, 8, 16)
    bits: Tuple[int, ...] = (256,)
    limb_bits: Tuple[int, ...] = (16,)
    cutoff: int = 2
    max_depth: Optional[int] = None
    seed: int = 20240101
    generator: str = "uniform-int"
    repetitions: int = 5
    output_format: str = "csv"
    parallel_depth: int = 2

    def __post_init__(self):
        for name in ("methods", "sizes", "bits", "limb_bits"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        unknown = [m for m in self.methods if m not in METHODS]
        if not self.methods or unknown:
            raise ConfigError(f"methods must be chosen from {', '.join(METHODS)}, got {', '.join(self.methods) or 'none'}")
        if self.ring not in RINGS:
            raise ConfigError(f"ring must be one of {', '.join(RINGS)}, got {self.ring!r}")
        if not self.sizes or min(self.sizes) < 1:
            raise ConfigError("every order n must be at least 1")
        if not self.bits or not self.limb_bits:
            raise ConfigError("bits and limb bits need at least one value")
        if min(self.limb_bits) < 1 or max(self.limb_bits) > MAX_LIMB_BITS:
            raise ConfigError(f"limb bits must lie in 1..{MAX_LIMB_BITS}")
        if min(self.bits) < max(self.limb_bits):
            raise ConfigError("precision must be at least the limb size")
        if self.cutoff < 1:
            raise ConfigError(f"cutoff must be at least 1, got {self.cutoff}")
        if self.max_depth is not None and self.max_depth < 1:
            raise ConfigError(f"max depth must be at least 1, got {self.max_depth}")
        if self.parallel_depth < 0:
            raise ConfigError(f"parallel depth must be non-negative, got {self.parallel_depth}")
        if self.repetitions < 1:
            raise ConfigError(f"repetitions must be at least 1, got {self.repetitions}")
        if self.generator not in GENERATORS:
            raise ConfigError(f"generator must be one of {', '.join(GENERATORS)}, got {self.generator!r}")
        if self.output_format not in FORMATS:
            raise ConfigError(f"format must be csv or json, got {self.output_format!r}")
        if "decomp" in self.methods and self.ring != "fixed-point":
            raise ConfigError("the decomp method needs the fixed-point ring")

    @property
    def precision(self) -> int:
        return self.bits[0]

    @property
    def beta(self) -> int:
        return self.limb_bits[0]


@dataclass(frozen=True)
class RunRecord:
    """One (method, n) measurement. Counts are ``None`` for uncounted kernels."""

    method: str
    n: int
    ring: str
    bits: int
    limb_bits: int
    cutoff: int
    wall_time_ns: int
    mults: Optional[int] = None
    adds: Optional[int] = None
    max_rel_error: Optional[float] = None
    exact_match: Optional[bool] = None

    def as_row(self) -> dict:
        return {column: getattr(self, column) for column in RUN_COLUMNS}


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, float) and math.isnan(value):
        return "nan"
    return value


def write_rows(rows: Iterable[Mapping], path, output_format: str = "csv", columns: Optional[Sequence[str]] = None) -> Path:
    """Write rows to ``path`` as CSV (fixed column order) or a JSON list."""
    rows = [dict(r) for r in rows]
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if columns is None:
        columns = list(rows[0]) if rows else []
    if output_format == "json":
        with open(path, "w") as f:
            json.dump([{c: r.get(c) for c in columns} for r in rows], f, indent=2)
    elif output_format == "csv":
        with open(path, "w", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=list(columns))
            writer.writeheader()
            for row in rows:
                writer.writerow({c: _cell(row.get(c)) for c in columns})
    else:
        raise ConfigError(f"format must be csv or json, got {output_format!r}")
    logger.info("wrote %d rows to %s", len(rows), path)
    return path


def write_records(records: Sequence[RunRecord], path, output_format: str = "csv") -> Path:
    return write_rows((r.as_row() for r in records), path, output_format, RUN_COLUMNS)


def load_rows(path) -> List[dict]:
    """Read back a CSV or JSON result file (format chosen by suffix)."""
    path = Path(path)
    with open(path, newline="") as f:
        if path.suffix == ".json":
            return json.load(f)
        return list(csv.DictReader(f))
