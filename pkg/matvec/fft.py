"""Standard-precision FFT, convolution and the FFT-based structured products."""
from __future__ import annotations

import enum
import logging
import math
from typing import Sequence, Union

import numpy as np

from matvec.errors import DimensionError, ParameterError
from matvec.structured import CirculantMatrix, DenseVector, HankelMatrix, VectorLike, as_vector

logger = logging.getLogger(__name__)


class Direction(str, enum.Enum):
    FORWARD = "forward"
    INVERSE = "inverse"


def is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def next_power_of_two(n: int) -> int:
    return 1 if n <= 1 else 1 << (n - 1).bit_length()


def _bit_reversal(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    index = np.arange(n)
    reversed_index = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        reversed_index |= ((index >> b) & 1) << (bits - 1 - b)
    return reversed_index


def fft(v: Sequence, direction: Union[Direction, str] = Direction.FORWARD) -> np.ndarray:
    """Iterative radix-2 decimation-in-time transform.

    Forward computes ``X_k = sum_j v_j exp(-2 pi i jk / N)``; the inverse uses
    the opposite sign and divides by ``N``.
    """
    direction = Direction(direction)
    data = np.asarray(v, dtype=np.complex128)
    n = data.shape[0]
    if not is_power_of_two(n):
        raise ParameterError(f"transform length must be a power of two, got {n}")
    sign = -1.0 if direction is Direction.FORWARD else 1.0
    out = data[_bit_reversal(n)]
    size = 2
    while size <= n:
        half = size // 2
        twiddle = np.exp(sign * 2j * np.pi * np.arange(half) / size)
        blocks = out.reshape(-1, size)
        even = blocks[:, :half].copy()
        odd = blocks[:, half:] * twiddle
        blocks[:, :half] = even + odd
        blocks[:, half:] = even - odd
        size *= 2
    if direction is Direction.INVERSE:
        out /= n
    return out


def linear_convolution(u: Sequence[float], v: Sequence[float]) -> np.ndarray:
    """``w_k = sum_{i+j=k} u_i v_j`` through a power-of-two padded FFT."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.size == 0 or v.size == 0:
        return np.zeros(0)
    length = u.size + v.size - 1
    size = next_power_of_two(length)
    padded_u = np.zeros(size)
    padded_u[: u.size] = u
    padded_v = np.zeros(size)
    padded_v[: v.size] = v
    product = fft(padded_u) * fft(padded_v)
    return fft(product, Direction.INVERSE).real[:length]


def circulant_matvec_fft(matrix: CirculantMatrix, x: VectorLike) -> DenseVector:
    x = as_vector(x)
    n = matrix.n
    if len(x) != n:
        raise DimensionError(f"vector of length {len(x)} for a circulant of order {n}")
    col = np.array([float(c) for c in matrix.col])
    values = np.array([float(v) for v in x])
    if is_power_of_two(n):
        y = fft(fft(col) * fft(values), Direction.INVERSE).real
    else:
        # wraparound: entry i of the cyclic product sits at n + i of col * (x, x)
        y = linear_convolution(col, np.concatenate([values, values]))[n: 2 * n]
    return DenseVector(y.tolist())


def fft_hankel_matvec(matrix: HankelMatrix, x: VectorLike) -> DenseVector:
    """Hankel product as the slice ``[n-1, 2n-1)`` of ``a * reverse(x)``."""
    x = as_vector(x)
    n = matrix.n
    if len(x) != n:
        raise DimensionError(f"vector of length {len(x)} for a matrix of order {n}")
    a = [float(v) for v in matrix.seq]
    reversed_x = [float(v) for v in reversed(x.entries)]
    w = linear_convolution(a, reversed_x)
    return DenseVector(w[n - 1: 2 * n - 1].tolist())


def fft_operation_estimate(n: int) -> float:
    """The ``30 n log n`` figure quoted for FFT-based structured products; informational only."""
    return 30.0 * n * math.log2(n) if n > 1 else 0.0
