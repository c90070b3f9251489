"""Seeded Hankel test instances."""
import logging
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from matvec.errors import ConfigError
from matvec.rings import FixedPointNumber, FixedPointRing, FloatRing, IntegerRing, Ring
from matvec.structured import DenseVector, HankelMatrix

logger = logging.getLogger(__name__)

GENERATORS = ("uniform-int", "uniform-real", "hilbert", "ones")

INT_BOUND = 2 ** 20


def _random_mantissas(rng: np.random.Generator, count: int, bits: int) -> list:
    """``count`` signed integers with ``bits`` random magnitude bits each."""
    words = -(-bits // 32)
    draws = rng.integers(0, 2 ** 32, size=(count, words), dtype=np.uint64)
    signs = rng.integers(0, 2, size=count)
    values = []
    for row, sign in zip(draws, signs):
        magnitude = 0
        for word in row:
            magnitude = (magnitude << 32) | int(word)
        magnitude >>= words * 32 - bits
        values.append(-magnitude if sign else magnitude)
    return values


def _draw(kind: str, count: int, rng: np.random.Generator, ring: Ring, bits: Optional[int]) -> list:
    if kind == "ones":
        return [ring.from_integer(1) for _ in range(count)]

    if kind == "uniform-int":
        values = rng.integers(-INT_BOUND, INT_BOUND, size=count, endpoint=True)
        return [ring.from_integer(v) for v in values]

    if kind == "uniform-real":
        if isinstance(ring, IntegerRing):
            raise ConfigError("uniform-real entries need the float64 or fixed-point ring")
        if isinstance(ring, FixedPointRing):
            precision = ring.precision or bits
            if precision is None:
                raise ConfigError("uniform-real fixed-point entries need a precision")
            # full-width mantissas in (-1, 1)
            return [
                ring.coerce(FixedPointNumber.from_parts(m, -precision, precision))
                for m in _random_mantissas(rng, count, precision)
            ]
        return [ring.coerce(float(v)) for v in rng.uniform(-1.0, 1.0, size=count)]

    raise ConfigError(f"unknown generator {kind!r}; expected one of {', '.join(GENERATORS)}")


def generate_hankel(
    kind: str,
    n: int,
    seed: int,
    ring: Optional[Ring] = None,
    bits: Optional[int] = None,
) -> Tuple[HankelMatrix, DenseVector]:
    """A deterministic ``(H, x)`` pair of order ``n``.

    ``hilbert`` sets ``a_k = 1/k`` and draws ``x`` uniformly; the other kinds
    use the same distribution for ``H`` and ``x``.
    """
    if n < 1:
        raise ConfigError(f"order must be positive, got {n}")
    ring = ring or FloatRing()
    rng = np.random.default_rng(seed)

    if kind == "hilbert":
        if isinstance(ring, IntegerRing):
            raise ConfigError("hilbert entries are not integers; use float64 or fixed-point")
        if isinstance(ring, FixedPointRing):
            precision = ring.precision or bits
            if precision is None:
                raise ConfigError("hilbert fixed-point entries need a precision")
            seq = [ring.coerce(FixedPointNumber.from_fraction(Fraction(1, k), precision)) for k in range(1, 2 * n)]
        else:
            seq = [ring.coerce(1.0 / k) for k in range(1, 2 * n)]
        x = _draw("uniform-real", n, rng, ring, bits)
    else:
        seq = _draw(kind, 2 * n - 1, rng, ring, bits)
        x = _draw(kind, n, rng, ring, bits)

    logger.debug("generated %s instance n=%d seed=%d in %s", kind, n, seed, ring.name)
    return HankelMatrix(n, seq), DenseVector(x)
