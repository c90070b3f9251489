"""Hankel, Toeplitz and circulant matrices and their exact products.

Defining sequences are stored 0-indexed: ``seq[k]`` holds ``a_{k+1}``, so the
Hankel entry in (1-indexed) row ``i`` and column ``j`` is ``seq[i + j - 2]``.
The schoolbook product here is the correctness oracle for every fast kernel.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

from matvec.errors import DimensionError, IndexOutOfRangeError
from matvec.rings import Ring, infer_ring

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DenseVector:
    entries: Tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, index):
        return self.entries[index]


VectorLike = Union[DenseVector, Sequence]


def as_vector(x: VectorLike) -> DenseVector:
    return x if isinstance(x, DenseVector) else DenseVector(tuple(x))


@dataclass(frozen=True)
class HankelMatrix:
    """Order-``n`` Hankel matrix held as its ``2n - 1`` defining values."""

    n: int
    seq: Tuple

    def __post_init__(self):
        object.__setattr__(self, "seq", tuple(self.seq))
        if self.n < 1 or len(self.seq) != 2 * self.n - 1:
            raise DimensionError(f"order {self.n} needs {2 * self.n - 1} values, got {len(self.seq)}")

    def to_dense(self) -> List[List]:
        return [[self.seq[i + j] for j in range(self.n)] for i in range(self.n)]


@dataclass(frozen=True)
class ToeplitzMatrix:
    """Order-``n`` Toeplitz matrix; row 1 is ``(a_n, ..., a_{2n-1})``, the last row ``(a_1, ..., a_n)``."""

    n: int
    seq: Tuple

    def __post_init__(self):
        object.__setattr__(self, "seq", tuple(self.seq))
        if self.n < 1 or len(self.seq) != 2 * self.n - 1:
            raise DimensionError(f"order {self.n} needs {2 * self.n - 1} values, got {len(self.seq)}")

    def to_dense(self) -> List[List]:
        n = self.n
        return [[self.seq[n - 1 - i + j] for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class CirculantMatrix:
    """Circulant matrix given by its first column; each column is the down-shift of the previous."""

    n: int
    col: Tuple

    def __post_init__(self):
        object.__setattr__(self, "col", tuple(self.col))
        if self.n < 1 or len(self.col) != self.n:
            raise DimensionError(f"circulant order {self.n} needs {self.n} values, got {len(self.col)}")

    def to_dense(self) -> List[List]:
        n = self.n
        return [[self.col[(i - j) % n] for j in range(n)] for i in range(n)]


def hankel_from_sequence(seq: Sequence) -> HankelMatrix:
    values = tuple(seq)
    if not values or len(values) % 2 == 0:
        raise DimensionError(f"a Hankel defining sequence has odd length, got {len(values)}")
    return HankelMatrix((len(values) + 1) // 2, values)


def element(matrix: HankelMatrix, i: int, j: int):
    """Entry ``(i, j)``, 1-indexed as in the usual matrix notation."""
    if not (1 <= i <= matrix.n and 1 <= j <= matrix.n):
        raise IndexOutOfRangeError(f"({i}, {j}) outside a matrix of order {matrix.n}")
    return matrix.seq[i + j - 2]


def hankel_product(a: Sequence, x: Sequence, ring: Ring, rows: Optional[int] = None) -> List:
    """First ``rows`` entries of the Hankel product, straight from the definition.

    ``a`` may be shorter than ``rows + len(x) - 1``; missing entries read as
    zero and cost no multiplication. Each row is accumulated left to right.
    """
    n = len(x)
    if rows is None:
        rows = n
    y = []
    for i in range(rows):
        acc = None
        for j in range(min(n, len(a) - i)):
            term = ring.mul(a[i + j], x[j])
            acc = term if acc is None else ring.add(acc, term)
        y.append(ring.zero() if acc is None else acc)
    return y


def schoolbook_matvec(matrix: HankelMatrix, x: VectorLike, ring: Optional[Ring] = None) -> DenseVector:
    x = as_vector(x)
    if len(x) != matrix.n:
        raise DimensionError(f"vector of length {len(x)} for a matrix of order {matrix.n}")
    ring = ring or infer_ring(matrix.seq + x.entries)
    return DenseVector(hankel_product(matrix.seq, x.entries, ring))


def reverse(x: VectorLike) -> DenseVector:
    return DenseVector(tuple(reversed(as_vector(x).entries)))


def pad(x: VectorLike, length: int, ring: Ring) -> DenseVector:
    entries = as_vector(x).entries
    if length < len(entries):
        raise DimensionError(f"cannot pad a vector of length {len(entries)} to {length}")
    return DenseVector(entries + tuple(ring.zero() for _ in range(length - len(entries))))


def toeplitz_to_hankel(matrix: ToeplitzMatrix) -> HankelMatrix:
    """Reverse the row order; the defining sequence is read unchanged in the Hankel convention."""
    return HankelMatrix(matrix.n, matrix.seq)


HankelKernel = Callable[[HankelMatrix, DenseVector], DenseVector]


def toeplitz_matvec(
    matrix: ToeplitzMatrix,
    x: VectorLike,
    ring: Optional[Ring] = None,
    kernel: Optional[HankelKernel] = None,
) -> DenseVector:
    """Toeplitz product through any Hankel kernel; the result is reversed back to Toeplitz row order."""
    x = as_vector(x)
    if len(x) != matrix.n:
        raise DimensionError(f"vector of length {len(x)} for a matrix of order {matrix.n}")
    hankel = toeplitz_to_hankel(matrix)
    if kernel is None:
        product = schoolbook_matvec(hankel, x, ring)
    else:
        product = kernel(hankel, x)
    return reverse(product)


def hankel_embed_circulant(matrix: HankelMatrix, ring: Optional[Ring] = None) -> CirculantMatrix:
    """Circulant ``C`` of order ``2n`` whose product with ``pad(reverse(x))`` starts with ``H x``.

    The first column is ``(a_n, ..., a_{2n-1}, 0, a_1, ..., a_{n-1})``.
    """
    ring = ring or infer_ring(matrix.seq)
    n = matrix.n
    col = matrix.seq[n - 1:] + (ring.zero(),) + matrix.seq[: n - 1]
    return CirculantMatrix(2 * n, col)


def circulant_matvec_dense(matrix: CirculantMatrix, x: VectorLike, ring: Optional[Ring] = None) -> DenseVector:
    x = as_vector(x)
    n = matrix.n
    if len(x) != n:
        raise DimensionError(f"vector of length {len(x)} for a circulant of order {n}")
    ring = ring or infer_ring(matrix.col + x.entries)
    y = []
    for i in range(n):
        acc = ring.mul(matrix.col[i % n], x[0])
        for j in range(1, n):
            acc = ring.add(acc, ring.mul(matrix.col[(i - j) % n], x[j]))
        y.append(acc)
    return DenseVector(y)


def circulant_to_toeplitz(matrix: CirculantMatrix) -> ToeplitzMatrix:
    """The same matrix as a Toeplitz one: ``seq[k] = col[(n - 1 - k) mod n]``."""
    n = matrix.n
    return ToeplitzMatrix(n, tuple(matrix.col[(n - 1 - k) % n] for k in range(2 * n - 1)))


def circulant_matvec(
    matrix: CirculantMatrix,
    x: VectorLike,
    ring: Optional[Ring] = None,
    kernel: Optional[HankelKernel] = None,
) -> DenseVector:
    """Circulant product through any Hankel kernel, by way of its Toeplitz form."""
    return toeplitz_matvec(circulant_to_toeplitz(matrix), x, ring, kernel)
