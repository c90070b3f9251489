"""Multiprecision Hankel products through an enlarged standard-precision system.

Every multiprecision entry is split into ``l`` weighted limbs whose plain sum is
the entry. The limbs of each matrix value appear twice in a row of the enlarged
defining sequence, each vector value is followed by ``l`` zeros, and the
enlarged product is formed with the FFT engine. Output ``y_i`` is the sum of
the window of ``l`` enlarged outputs starting at ``2l(i-1) + 1`` (1-indexed).

Limb weights are centred so that limb products stay inside the double range;
the enlarged system therefore carries two exponents: ``unit_exponent``, the
grid every exact window sum lies on, and ``scale_exponent``, the factor that
restores the multiprecision magnitude.

The window sums are recovered exactly only while every accumulation of
grid-scaled limb products fits a double significand (``exact_regime``). Wider
entries put products of very different magnitude into one transform output and
the low bits of the small ones are lost; that loss is what the accuracy study
measures.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from matvec.errors import DimensionError, ParameterError, ScaleError
from matvec.fft import fft_hankel_matvec
from matvec.rings import (
    MAX_LIMB_BITS,
    FixedPointNumber,
    FixedPointRing,
    Ring,
    decompose_limbs,
    limb_as_float,
    limb_count,
)
from matvec.structured import DenseVector, HankelMatrix, VectorLike, as_vector, hankel_product

logger = logging.getLogger(__name__)

# keep the largest accumulated limb product below 2**1000
_TOP_EXPONENT = 1000

# window sums are exact when every accumulation of grid-scaled limb products
# fits in a double significand with this many bits to spare for transform error
SIGNIFICAND_BITS = 53
FFT_GUARD_BITS = 5


class Stride(str, enum.Enum):
    """Window placement in ``reconstruct``.

    ``DOUBLED`` (windows every ``2l`` outputs) matches the doubled-limb layout.
    ``SINGLE`` (windows every ``l`` outputs) is the literal partial-sum rule and
    is only correct for ``n = 1``; it is kept to demonstrate the difference.
    """

    DOUBLED = "doubled"
    SINGLE = "single"


@dataclass(frozen=True)
class DecomposedSystem:
    n: int
    l: int
    mhat: int
    ahat: Tuple[float, ...]
    xhat: Tuple[float, ...]
    unit_exponent: int = 0
    scale_exponent: int = 0
    accumulation_bits: int = 0

    @property
    def exact_regime(self) -> bool:
        """Whether the FFT of this system can be rounded back to the exact window sums."""
        return self.accumulation_bits <= SIGNIFICAND_BITS - FFT_GUARD_BITS


@dataclass(frozen=True)
class DecompAccuracyRecord:
    n: int
    bits: int
    limb_bits: int
    limbs: int
    max_rel_error: float
    max_abs_error: float
    bits_lost: int
    status: str = "ok"
    exact_regime: bool = False

    def as_row(self) -> dict:
        return {
            "n": self.n,
            "bits": self.bits,
            "limb_bits": self.limb_bits,
            "limbs": self.limbs,
            "max_rel_error": self.max_rel_error,
            "max_abs_error": self.max_abs_error,
            "bits_lost": self.bits_lost,
            "status": self.status,
            "exact_regime": self.exact_regime,
        }


def _exact(values: Sequence) -> List[FixedPointNumber]:
    ring = FixedPointRing(None)
    return [ring.coerce(v) for v in values]


def _common_scale(values: Sequence[FixedPointNumber]) -> Tuple[List[int], int, int]:
    """Integer mantissas on a shared power-of-two exponent, plus that exponent and the widest bit length."""
    nonzero = [v for v in values if v.sign != 0]
    if not nonzero:
        return [0] * len(values), 0, 1
    exponent = min(v.exponent for v in nonzero)
    scaled = [v.signed_mantissa << (v.exponent - exponent) if v.sign else 0 for v in values]
    width = max(abs(s).bit_length() for s in scaled)
    return scaled, exponent, width


def _weighted_limbs(mantissa: int, width: int, beta: int, shift: int) -> List[float]:
    value = FixedPointNumber.from_parts(mantissa, -shift, None)
    if value.sign:
        value = FixedPointNumber(value.sign, value.mantissa, value.exponent, width)
    else:
        value = FixedPointNumber.zero(width)
    decomposition = decompose_limbs(value, beta)
    return [limb_as_float(decomposition, k) for k in range(decomposition.l)]


def build_decomposed_system(matrix: HankelMatrix, x: VectorLike, beta: int) -> DecomposedSystem:
    """Enlarged Hankel system of order ``m = 2nl`` built from weighted limbs."""
    x = as_vector(x)
    n = matrix.n
    if len(x) != n:
        raise DimensionError(f"vector of length {len(x)} for a matrix of order {n}")
    if not 1 <= beta <= MAX_LIMB_BITS:
        raise ParameterError(f"limb size must be in 1..{MAX_LIMB_BITS} bits, got {beta}")

    a_values = _exact(matrix.seq)
    x_values = _exact(x.entries)
    a_scaled, a_exponent, a_used = _common_scale(a_values)
    x_scaled, x_exponent, x_used = _common_scale(x_values)
    a_width = max([a_used] + [v.precision for v in a_values if v.sign])
    x_width = max([x_used] + [v.precision for v in x_values if v.sign])
    l = max(limb_count(a_width, beta), limb_count(x_width, beta))
    mhat = 2 * n * l
    # a grid-scaled limb product needs up to a_used + x_used bits and one FFT output sums up to mhat of them
    accumulation_bits = a_used + x_used + (mhat - 1).bit_length()

    # accumulated products reach 2**(a_width + x_width - 2*shift) times the transform gain
    gain = 2 * mhat.bit_length() + 2
    shift = max(0, -(-(a_width + x_width + gain - _TOP_EXPONENT) // 2))
    logger.debug(
        "decomposing n=%d into l=%d limbs of %d bits (m=%d, shift=%d, %d accumulation bits)",
        n, l, beta, mhat, shift, accumulation_bits,
    )

    try:
        a_limbs = [_weighted_limbs(v, l * beta, beta, shift) for v in a_scaled]
        x_limbs = [_weighted_limbs(v, l * beta, beta, shift) for v in x_scaled]
    except ScaleError:
        logger.warning("limb weights for %d-bit entries leave the double range", max(a_width, x_width))
        raise

    ahat: List[float] = []
    for limbs in a_limbs:
        ahat.extend(limbs)
        ahat.extend(limbs)
    ahat.extend([0.0] * (2 * l - 1))
    xhat: List[float] = []
    for limbs in x_limbs:
        xhat.extend(limbs)
        xhat.extend([0.0] * l)

    return DecomposedSystem(
        n=n,
        l=l,
        mhat=mhat,
        ahat=tuple(ahat),
        xhat=tuple(xhat),
        unit_exponent=-2 * shift,
        scale_exponent=a_exponent + x_exponent + 2 * shift,
        accumulation_bits=accumulation_bits,
    )


def _window_sum(values: Sequence) -> Fraction:
    if all(isinstance(v, float) for v in values):
        return Fraction(math.fsum(values))
    return sum((Fraction(v) if not isinstance(v, FixedPointNumber) else v.to_fraction() for v in values), Fraction(0))


def reconstruct(
    yhat: Sequence,
    n: int,
    l: int,
    stride: Stride = Stride.DOUBLED,
    unit_exponent: Optional[int] = None,
    scale_exponent: int = 0,
) -> List[FixedPointNumber]:
    """Recover ``y`` from the enlarged product by summing windows of ``l`` outputs.

    Float windows are summed with ``math.fsum``; exact inputs are summed
    exactly. When ``unit_exponent`` is given every window sum is rounded to the
    nearest multiple of ``2**unit_exponent`` before scaling by
    ``2**scale_exponent``.
    """
    stride = Stride(stride)
    step = 2 * l if stride is Stride.DOUBLED else l
    needed = step * (n - 1) + l
    if len(yhat) < needed:
        raise DimensionError(f"enlarged product has {len(yhat)} entries, need at least {needed}")
    y = []
    for i in range(n):
        start = step * i
        total = _window_sum(yhat[start: start + l])
        if unit_exponent is not None:
            grid = round(total / Fraction(2) ** unit_exponent)
            y.append(FixedPointNumber.from_parts(grid, unit_exponent + scale_exponent, None))
        else:
            exact = FixedPointNumber.from_fraction(total, None)
            y.append(FixedPointNumber.from_parts(exact.signed_mantissa, exact.exponent + scale_exponent, None))
    return y


def enlarged_dense_product(system: DecomposedSystem, ring: Optional[Ring] = None) -> List:
    """Exact schoolbook product of the enlarged system (no floating error)."""
    ring = ring or FixedPointRing(None)
    ahat = [ring.coerce(v) for v in system.ahat]
    xhat = [ring.coerce(v) for v in system.xhat]
    return hankel_product(ahat, xhat, ring)


def compare_to_oracle(values: Sequence, reference: Sequence) -> Tuple[float, float]:
    """Normwise relative and absolute maximum errors, computed exactly."""
    diffs = [abs(Fraction(_to_fraction(v)) - _to_fraction(r)) for v, r in zip(values, reference)]
    max_abs = max(diffs, default=Fraction(0))
    scale = max((abs(_to_fraction(r)) for r in reference), default=Fraction(0))
    if max_abs == 0:
        return 0.0, 0.0
    if scale == 0:
        return math.inf, _fraction_to_float(max_abs)
    return _fraction_to_float(max_abs / scale), _fraction_to_float(max_abs)


def _to_fraction(value) -> Fraction:
    if isinstance(value, FixedPointNumber):
        return value.to_fraction()
    return Fraction(value)


def _fraction_to_float(value: Fraction) -> float:
    try:
        return float(value)
    except OverflowError:
        return math.inf


def bits_lost(relative_error: float, bits: int) -> int:
    """Effective precision loss ``ceil(log2(err * 2**b))``, clamped at zero."""
    if relative_error <= 0:
        return 0
    if math.isinf(relative_error):
        return bits
    return max(0, math.ceil(math.log2(relative_error) + bits))


def decomp_matvec(
    matrix: HankelMatrix,
    x: VectorLike,
    beta: int,
    oracle: bool = False,
    stride: Stride = Stride.DOUBLED,
) -> Tuple[DenseVector, Optional[DecompAccuracyRecord]]:
    """Multiprecision product via decomposition, FFT and windowed reconstruction."""
    x = as_vector(x)
    system = build_decomposed_system(matrix, x, beta)
    enlarged = HankelMatrix(system.mhat, system.ahat)
    yhat = fft_hankel_matvec(enlarged, system.xhat).entries
    y = reconstruct(
        yhat,
        system.n,
        system.l,
        stride=stride,
        unit_exponent=system.unit_exponent,
        scale_exponent=system.scale_exponent,
    )
    record = None
    if oracle:
        exact_ring = FixedPointRing(None)
        reference = hankel_product(_exact(matrix.seq), _exact(x.entries), exact_ring)
        rel, absolute = compare_to_oracle(y, reference)
        bits = max(v.precision for v in _exact(tuple(matrix.seq) + x.entries))
        record = DecompAccuracyRecord(
            n=system.n,
            bits=bits,
            limb_bits=beta,
            limbs=system.l,
            max_rel_error=rel,
            max_abs_error=absolute,
            bits_lost=bits_lost(rel, bits),
            exact_regime=system.exact_regime,
        )
        logger.debug("decomposition n=%d l=%d: rel error %.3e, %d bits lost", system.n, system.l, rel, record.bits_lost)
    elif not system.exact_regime:
        logger.debug("n=%d needs %d accumulation bits; the result may be inexact", system.n, system.accumulation_bits)
    return DenseVector(y), record


def enlarged_complexity_estimate(n: int, bits: int, beta: int) -> float:
    """``m log2 m`` with ``m = 2n ceil(b / beta)``."""
    if n < 1 or bits < 1 or beta < 1:
        raise ParameterError("order, precision and limb size must be positive")
    m = 2 * n * limb_count(bits, beta)
    return m * math.log2(m)
