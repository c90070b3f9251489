"""Coefficient rings the kernels are generic over.

Every kernel receives a :class:`Ring` and performs all scalar arithmetic
through it, so one implementation serves hardware floats, exact integers and
fixed-point multiprecision values. :class:`CountingRing` wraps any ring and
tallies the operations that pass through it.
"""
from __future__ import annotations

import logging
import math
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Optional, Tuple, TypeVar

from matvec.errors import IndexOutOfRangeError, LimbError, ParameterError, ScaleError

logger = logging.getLogger(__name__)

T = TypeVar("T")

MAX_LIMB_BITS = 32

# smallest positive subnormal is 2**-1074; largest finite double is below 2**1024
_FLOAT_MIN_EXP = -1074
_FLOAT_MAX_EXP = 1024


def _as_fraction(value: Any) -> Fraction:
    if isinstance(value, FixedPointNumber):
        return value.to_fraction()
    return Fraction(value)


@dataclass(frozen=True, eq=False)
class FixedPointNumber:
    """``sign * mantissa * 2**exponent`` with a mantissa of at most ``precision`` bits.

    Equality and hashing follow the represented value, so ``2 * 2**0`` equals
    ``1 * 2**1`` even though the stored fields differ.
    """

    sign: int
    mantissa: int
    exponent: int
    precision: int

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ParameterError(f"sign must be -1, 0 or 1, got {self.sign}")
        if self.mantissa < 0:
            raise ParameterError("mantissa must be non-negative")
        if (self.sign == 0) != (self.mantissa == 0):
            raise ParameterError("sign is zero exactly when the mantissa is zero")
        if self.precision < 1:
            raise ParameterError(f"precision must be positive, got {self.precision}")
        if self.mantissa >> self.precision:
            raise ParameterError(
                f"mantissa needs {self.mantissa.bit_length()} bits, precision is {self.precision}"
            )

    @classmethod
    def zero(cls, precision: int = 1) -> "FixedPointNumber":
        return cls(0, 0, 0, precision)

    @classmethod
    def from_parts(cls, value: int, exponent: int, precision: Optional[int]) -> "FixedPointNumber":
        """Build ``value * 2**exponent``, rounding to nearest-even when ``value`` is too wide.

        A ``precision`` of ``None`` keeps every bit (exact dyadic arithmetic).
        """
        if value == 0:
            return cls.zero(precision or 1)
        sign = -1 if value < 0 else 1
        magnitude = -value if value < 0 else value
        if precision is None:
            return cls(sign, magnitude, exponent, magnitude.bit_length())
        shift = magnitude.bit_length() - precision
        if shift > 0:
            quotient = magnitude >> shift
            remainder = magnitude - (quotient << shift)
            half = 1 << (shift - 1)
            if remainder > half or (remainder == half and quotient & 1):
                quotient += 1
            if quotient >> precision:
                # rounded up to exactly 2**precision
                quotient >>= 1
                shift += 1
            magnitude = quotient
            exponent += shift
        return cls(sign, magnitude, exponent, precision)

    @classmethod
    def from_integer(cls, value: int, precision: Optional[int] = None) -> "FixedPointNumber":
        return cls.from_parts(value, 0, precision)

    @classmethod
    def from_float(cls, value: float, precision: Optional[int] = None) -> "FixedPointNumber":
        if not math.isfinite(value):
            raise ScaleError(f"cannot represent {value} as a fixed-point number")
        numerator, denominator = float(value).as_integer_ratio()
        return cls.from_parts(numerator, 1 - denominator.bit_length(), precision)

    @classmethod
    def from_fraction(cls, value: Fraction, precision: Optional[int]) -> "FixedPointNumber":
        """Round a rational to ``precision`` bits (nearest, ties to even)."""
        value = Fraction(value)
        if value == 0:
            return cls.zero(precision or 1)
        denominator = value.denominator
        if denominator & (denominator - 1) == 0:
            # dyadic rationals convert exactly before any rounding
            return cls.from_parts(value.numerator, 1 - denominator.bit_length(), precision)
        if precision is None:
            raise ParameterError(f"{value} has no exact binary representation; give a precision")
        magnitude = abs(value)
        top = magnitude.numerator.bit_length() - denominator.bit_length()
        if Fraction(2) ** top > magnitude:
            top -= 1
        exponent = top - precision + 1
        scaled = round(magnitude / Fraction(2) ** exponent)
        sign = -1 if value < 0 else 1
        return cls.from_parts(sign * scaled, exponent, precision)

    @property
    def signed_mantissa(self) -> int:
        return self.sign * self.mantissa

    def to_fraction(self) -> Fraction:
        if self.exponent >= 0:
            return Fraction(self.signed_mantissa << self.exponent)
        return Fraction(self.signed_mantissa, 1 << -self.exponent)

    def __float__(self) -> float:
        return float(self.to_fraction())

    def __eq__(self, other):
        if isinstance(other, (FixedPointNumber, int, float, Fraction)):
            return self.to_fraction() == _as_fraction(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.to_fraction())

    def __repr__(self):
        return f"FixedPointNumber({self.signed_mantissa} * 2**{self.exponent}, b={self.precision})"


@dataclass(frozen=True)
class LimbDecomposition:
    """A fixed-point value split into base ``2**beta`` limbs, least significant first.

    The represented value is ``sign * 2**exponent * sum(2**(k*beta) * limbs[k])``.
    """

    beta: int
    limbs: Tuple[int, ...]
    sign: int
    exponent: int
    precision: int

    @property
    def l(self) -> int:
        return len(self.limbs)


@dataclass(frozen=True)
class OpCountReport:
    """Exact multiplication and addition tallies. Subtractions count as additions."""

    multiplications: int = 0
    additions: int = 0

    def __add__(self, other: "OpCountReport") -> "OpCountReport":
        return OpCountReport(
            self.multiplications + other.multiplications,
            self.additions + other.additions,
        )

    def as_dict(self) -> dict:
        return {"mults": self.multiplications, "adds": self.additions}


class Ring(ABC):
    """Scalar contract shared by every kernel."""

    name: str = "abstract"
    exact: bool = False

    @abstractmethod
    def add(self, u, v): ...

    @abstractmethod
    def sub(self, u, v): ...

    @abstractmethod
    def mul(self, u, v): ...

    @abstractmethod
    def zero(self): ...

    @abstractmethod
    def coerce(self, value):
        """Convert an int, float, Fraction or FixedPointNumber into a ring element."""

    def neg(self, u):
        return self.sub(self.zero(), u)

    def from_integer(self, k: int):
        return self.coerce(int(k))

    def to_fraction(self, u) -> Fraction:
        return _as_fraction(u)

    def close(self, u, v, rel_tol: float = 1e-9) -> bool:
        fu, fv = self.to_fraction(u), self.to_fraction(v)
        if fu == fv:
            return True
        return abs(fu - fv) <= Fraction(rel_tol) * max(abs(fu), abs(fv))

    def __repr__(self):
        return f"{type(self).__name__}()"


class FloatRing(Ring):
    name = "float64"
    exact = False

    def add(self, u, v):
        return u + v

    def sub(self, u, v):
        return u - v

    def mul(self, u, v):
        return u * v

    def neg(self, u):
        return -u

    def zero(self):
        return 0.0

    def coerce(self, value):
        return float(value)


class IntegerRing(Ring):
    name = "exact-int"
    exact = True

    def add(self, u, v):
        return u + v

    def sub(self, u, v):
        return u - v

    def mul(self, u, v):
        return u * v

    def neg(self, u):
        return -u

    def zero(self):
        return 0

    def coerce(self, value):
        fraction = _as_fraction(value)
        if fraction.denominator != 1:
            raise ParameterError(f"{value} is not an integer")
        return int(fraction)


class FixedPointRing(Ring):
    """Fixed-point multiprecision arithmetic rounded to ``precision`` bits.

    With ``precision=None`` every result is kept exactly; that mode serves as
    the oracle ring for fixed-point inputs.
    """

    name = "fixed-point"

    def __init__(self, precision: Optional[int] = None):
        if precision is not None and precision < 1:
            raise ParameterError(f"precision must be positive, got {precision}")
        self.precision = precision
        self.exact = precision is None

    def add(self, u, v):
        if u.sign == 0:
            return self._round(v)
        if v.sign == 0:
            return self._round(u)
        exponent = min(u.exponent, v.exponent)
        total = (u.signed_mantissa << (u.exponent - exponent)) + (
            v.signed_mantissa << (v.exponent - exponent)
        )
        return FixedPointNumber.from_parts(total, exponent, self.precision)

    def sub(self, u, v):
        return self.add(u, self.neg(v))

    def mul(self, u, v):
        return FixedPointNumber.from_parts(
            u.signed_mantissa * v.signed_mantissa, u.exponent + v.exponent, self.precision
        )

    def neg(self, u):
        if u.sign == 0:
            return u
        return FixedPointNumber(-u.sign, u.mantissa, u.exponent, u.precision)

    def zero(self):
        return FixedPointNumber.zero(self.precision or 1)

    def coerce(self, value):
        if isinstance(value, FixedPointNumber):
            return self._round(value)
        if isinstance(value, float):
            return FixedPointNumber.from_float(value, self.precision)
        if isinstance(value, int):
            return FixedPointNumber.from_parts(value, 0, self.precision)
        return FixedPointNumber.from_fraction(Fraction(value), self.precision)

    def _round(self, u):
        if self.precision is None or u.precision == self.precision:
            return u
        return FixedPointNumber.from_parts(u.signed_mantissa, u.exponent, self.precision)

    def __repr__(self):
        return f"FixedPointRing(precision={self.precision})"


class CountingRing(Ring):
    """Delegates to ``inner`` and counts every multiplication and addition.

    Counters are guarded by a lock so concurrent recursion branches add up to
    the sequential tally.
    """

    def __init__(self, inner: Ring):
        self.inner = inner
        self.name = inner.name
        self.exact = inner.exact
        self._lock = threading.Lock()
        self._multiplications = 0
        self._additions = 0

    def _tick_add(self):
        with self._lock:
            self._additions += 1

    def add(self, u, v):
        self._tick_add()
        return self.inner.add(u, v)

    def sub(self, u, v):
        self._tick_add()
        return self.inner.sub(u, v)

    def neg(self, u):
        self._tick_add()
        return self.inner.neg(u)

    def mul(self, u, v):
        with self._lock:
            self._multiplications += 1
        return self.inner.mul(u, v)

    def zero(self):
        return self.inner.zero()

    def coerce(self, value):
        return self.inner.coerce(value)

    def to_fraction(self, u) -> Fraction:
        return self.inner.to_fraction(u)

    @property
    def report(self) -> OpCountReport:
        with self._lock:
            return OpCountReport(self._multiplications, self._additions)

    def __repr__(self):
        return f"CountingRing({self.inner!r})"


def counting_scope(inner: Ring, computation: Callable[[Ring], T]) -> Tuple[T, OpCountReport]:
    """Run ``computation`` against a counting wrapper of ``inner``.

    Returns the computation's result together with the tallies. Results are
    identical to running the computation on ``inner`` directly.
    """
    ring = CountingRing(inner)
    result = computation(ring)
    report = ring.report
    logger.debug("counted %d mults, %d adds on %s", report.multiplications, report.additions, inner.name)
    return result, report


def limb_count(precision: int, beta: int) -> int:
    return -(-precision // beta)


def decompose_limbs(value: FixedPointNumber, beta: int) -> LimbDecomposition:
    """Split the mantissa of ``value`` into ``ceil(b / beta)`` base ``2**beta`` digits."""
    if not 1 <= beta <= MAX_LIMB_BITS:
        raise ParameterError(f"limb size must be in 1..{MAX_LIMB_BITS} bits, got {beta}")
    mask = (1 << beta) - 1
    count = limb_count(value.precision, beta)
    limbs = tuple((value.mantissa >> (k * beta)) & mask for k in range(count))
    return LimbDecomposition(beta, limbs, value.sign, value.exponent, value.precision)


def recompose_limbs(decomposition: LimbDecomposition) -> FixedPointNumber:
    beta = decomposition.beta
    mantissa = 0
    for k, limb in enumerate(decomposition.limbs):
        if not 0 <= limb < (1 << beta):
            raise LimbError(f"limb {k} = {limb} does not fit in {beta} bits")
        mantissa |= limb << (k * beta)
    if (mantissa == 0) != (decomposition.sign == 0):
        raise LimbError("sign does not match the limb values")
    if mantissa >> decomposition.precision:
        raise LimbError(f"limbs exceed the {decomposition.precision}-bit precision")
    return FixedPointNumber(decomposition.sign, mantissa, decomposition.exponent, decomposition.precision)


def limb_as_float(decomposition: LimbDecomposition, k: int) -> float:
    """The weighted limb ``sign * m_k * 2**(exponent + k*beta)`` as an exact double."""
    if not 0 <= k < decomposition.l:
        raise IndexOutOfRangeError(f"limb index {k} outside 0..{decomposition.l - 1}")
    limb = decomposition.limbs[k]
    if limb == 0:
        return 0.0
    scale = decomposition.exponent + k * decomposition.beta
    lowest = (limb & -limb).bit_length() - 1
    if scale + limb.bit_length() > _FLOAT_MAX_EXP:
        raise ScaleError(f"limb {k} overflows standard precision (2**{scale + limb.bit_length()})")
    if scale + lowest < _FLOAT_MIN_EXP:
        raise ScaleError(f"limb {k} underflows standard precision (2**{scale + lowest})")
    return decomposition.sign * math.ldexp(float(limb), scale)


RINGS = {
    FloatRing.name: FloatRing,
    IntegerRing.name: IntegerRing,
    FixedPointRing.name: FixedPointRing,
}


def make_ring(name: str, precision: Optional[int] = None) -> Ring:
    """Instantiate a ring by its harness name."""
    try:
        factory = RINGS[name]
    except KeyError:
        raise ParameterError(f"unknown ring {name!r}; expected one of {sorted(RINGS)}") from None
    if factory is FixedPointRing:
        return FixedPointRing(precision)
    return factory()


def infer_ring(values) -> Ring:
    """Pick the natural ring for a sequence of scalars.

    Integers map to the exact integer ring, fixed-point values to the exact
    dyadic ring and everything else to hardware floats.
    """
    for value in values:
        if isinstance(value, FixedPointNumber):
            return FixedPointRing(None)
        if isinstance(value, bool) or not isinstance(value, int):
            return FloatRing()
    return IntegerRing()
