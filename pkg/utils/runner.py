"""Method dispatch, exact oracle comparison and timing for the experiments."""
import logging
import statistics
import time
from typing import Callable, List, Optional, Tuple

from matvec.decomposition import compare_to_oracle, decomp_matvec
from matvec.errors import ConfigError
from matvec.fft import fft_hankel_matvec
from matvec.karatsuba import KaratsubaConfig, karatsuba_matvec, parallel_karatsuba_matvec
from matvec.rings import FixedPointRing, IntegerRing, OpCountReport, Ring, counting_scope, make_ring
from matvec.structured import DenseVector, HankelMatrix, schoolbook_matvec
from utils.records import ExperimentConfig, RunRecord

logger = logging.getLogger(__name__)

# kernels that route every scalar operation through the ring
COUNTED_METHODS = ("schoolbook", "karatsuba", "karatsuba-parallel")


def ring_for(config: ExperimentConfig, bits: Optional[int] = None) -> Ring:
    return make_ring(config.ring, bits or config.precision)


def karatsuba_config(config: ExperimentConfig) -> KaratsubaConfig:
    return KaratsubaConfig(
        cutoff=config.cutoff,
        max_depth=config.max_depth,
        parallel_depth=config.parallel_depth,
    )


def kernel(method: str, config: ExperimentConfig) -> Callable[[HankelMatrix, DenseVector, Ring], DenseVector]:
    """The callable behind a harness method name."""
    if method == "schoolbook":
        return lambda matrix, x, ring: schoolbook_matvec(matrix, x, ring)
    if method == "karatsuba":
        return lambda matrix, x, ring: karatsuba_matvec(matrix, x, ring, karatsuba_config(config))
    if method == "karatsuba-parallel":
        return lambda matrix, x, ring: parallel_karatsuba_matvec(matrix, x, ring, karatsuba_config(config))
    if method == "fft":
        return lambda matrix, x, ring: fft_hankel_matvec(matrix, x)
    if method == "decomp":
        return lambda matrix, x, ring: decomp_matvec(matrix, x, config.beta)[0]
    raise ConfigError(f"unknown method {method!r}")


def exact_oracle(matrix: HankelMatrix, x: DenseVector) -> DenseVector:
    """Schoolbook product with no rounding at all: exact integers or exact dyadic fixed point."""
    values = matrix.seq + x.entries
    if all(isinstance(v, int) and not isinstance(v, bool) for v in values):
        return schoolbook_matvec(matrix, x, IntegerRing())
    ring = FixedPointRing(None)
    exact_matrix = HankelMatrix(matrix.n, [ring.coerce(v) for v in matrix.seq])
    return schoolbook_matvec(exact_matrix, [ring.coerce(v) for v in x.entries], ring)


def median_time_ns(call: Callable[[], object], repetitions: int) -> int:
    timings = []
    for _ in range(repetitions):
        start = time.perf_counter_ns()
        call()
        timings.append(time.perf_counter_ns() - start)
    return int(statistics.median(timings))


def run_method(
    method: str,
    matrix: HankelMatrix,
    x: DenseVector,
    ring: Ring,
    config: ExperimentConfig,
) -> Tuple[DenseVector, Optional[OpCountReport]]:
    """One counted (where the kernel is ring generic) evaluation of ``method``."""
    call = kernel(method, config)
    if method in COUNTED_METHODS:
        return counting_scope(ring, lambda counting: call(matrix, x, counting))
    return call(matrix, x, ring), None


def measure(
    method: str,
    matrix: HankelMatrix,
    x: DenseVector,
    ring: Ring,
    config: ExperimentConfig,
    reference: Optional[DenseVector] = None,
    with_oracle: bool = True,
) -> RunRecord:
    """Counts, median wall time and, unless disabled, oracle errors of one method on one instance."""
    result, report = run_method(method, matrix, x, ring, config)
    call = kernel(method, config)
    wall = median_time_ns(lambda: call(matrix, x, ring), config.repetitions)
    logger.debug("%s n=%d: median %d ns over %d runs", method, matrix.n, wall, config.repetitions)

    rel_error = exact_match = None
    if with_oracle:
        reference = reference if reference is not None else exact_oracle(matrix, x)
        rel_error, _ = compare_to_oracle(result.entries, reference.entries)
        if ring.exact:
            exact_match = rel_error == 0.0
    return RunRecord(
        method=method,
        n=matrix.n,
        ring=ring.name,
        bits=config.precision,
        limb_bits=config.beta,
        cutoff=config.cutoff,
        wall_time_ns=wall,
        mults=report.multiplications if report else None,
        adds=report.additions if report else None,
        max_rel_error=rel_error,
        exact_match=exact_match,
    )


def mismatches(records: List[RunRecord]) -> List[RunRecord]:
    """Records of ring-generic kernels that disagree with the oracle in an exact ring."""
    return [r for r in records if r.method in COUNTED_METHODS and r.exact_match is False]
