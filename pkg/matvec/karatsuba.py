"""Recursive three-multiplication Hankel product.

With ``m = floor((n+1)/2)`` and ``m1 = ceil((n+1)/2)`` the order-``n`` product
splits into three half-size Hankel products::

    p = C h    c_i = a_{2i-1} + a_{2i}    h_i = x_{2i-1}
    q = D f    d_i = a_{2i}               f_i = x_{2i-1} - x_{2i}
    r = E g    e_i = a_{2i-1}             g_i = x_{2i-2} - x_{2i-1}

and ``y_{2i-1} = p_i - q_i``, ``y_{2i} = p_i + r_i``. Indices past the end of
``a`` or ``x`` (and ``x_0``) read as zero.

The recursion is row limited: a call only produces the rows its parent
merges, so ``E g`` at a node asked for ``R`` rows computes ``floor(R/2)`` of
them. This keeps the ``n = 2`` split (where ``m1 = n``) shrinking and gives
``2 * 3**k - 2**k`` multiplications for ``n = 2**k`` with the default cutoff.
"""
from __future__ import annotations

import dataclasses
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from matvec.errors import DimensionError, ParameterError
from matvec.rings import IntegerRing, OpCountReport, Ring, counting_scope, infer_ring
from matvec.structured import DenseVector, HankelMatrix, VectorLike, as_vector, hankel_product

logger = logging.getLogger(__name__)

LOG2_3 = math.log2(3)


@dataclass(frozen=True)
class KaratsubaConfig:
    """Recursion controls.

    ``cutoff``: orders at or below it use the schoolbook product.
    ``max_depth``: split at most this many levels (1 is the single-level scheme).
    ``parallel``: run the three subproducts of a node concurrently for the top
    ``parallel_depth`` levels.
    """

    cutoff: int = 2
    max_depth: Optional[int] = None
    parallel: bool = False
    parallel_depth: int = 2

    def __post_init__(self):
        if self.cutoff < 1:
            raise ParameterError(f"cutoff must be at least 1, got {self.cutoff}")
        if self.max_depth is not None and self.max_depth < 1:
            raise ParameterError(f"max_depth must be at least 1, got {self.max_depth}")
        if self.parallel_depth < 0:
            raise ParameterError(f"parallel_depth must be non-negative, got {self.parallel_depth}")


@dataclass(frozen=True)
class SplitSystem:
    m: int
    m1: int
    c: Tuple
    d: Tuple
    e: Tuple
    f: Tuple
    h: Tuple
    g: Tuple


@dataclass(frozen=True)
class OpCountBounds:
    """Assertable envelopes for one order.

    ``published_additions`` is the published addition envelope with its linear
    constant fixed at 8; it is reported, not asserted.
    """

    multiplications: int
    additions: float
    published_additions: float


def _split(a: Sequence, x: Sequence, ring: Ring, rows: Optional[int]) -> SplitSystem:
    n = len(x)
    m = (n + 1) // 2
    m1 = n // 2 + 1
    if rows is None:
        p_rows, r_rows = m, m1
    else:
        p_rows, r_rows = (rows + 1) // 2, rows // 2
    length = len(a)

    c, d = [], []
    for i in range(p_rows + m - 1):
        odd = a[2 * i] if 2 * i < length else ring.zero()
        if 2 * i + 1 < length:
            c.append(ring.add(odd, a[2 * i + 1]))
            d.append(a[2 * i + 1])
        else:
            c.append(odd)
            d.append(ring.zero())

    f, h = [], []
    for i in range(m):
        h.append(x[2 * i])
        f.append(ring.sub(x[2 * i], x[2 * i + 1]) if 2 * i + 1 < n else x[2 * i])

    e, g = [], []
    if r_rows > 0:
        e = [a[2 * i] if 2 * i < length else ring.zero() for i in range(r_rows + m1 - 1)]
        g.append(ring.neg(x[0]))
        for i in range(1, m1):
            g.append(ring.sub(x[2 * i - 1], x[2 * i]) if 2 * i < n else x[2 * i - 1])

    return SplitSystem(m, m1, tuple(c), tuple(d), tuple(e), tuple(f), tuple(h), tuple(g))


def split_system(a: Sequence, x: Sequence, ring: Optional[Ring] = None) -> SplitSystem:
    """Auxiliary sequences of one split, with ``c, d`` of length ``2m - 1`` and ``e`` of length ``2m1 - 1``."""
    a, x = tuple(a), tuple(x)
    n = len(x)
    if n < 2:
        raise DimensionError(f"splitting needs order at least 2, got {n}")
    if len(a) != 2 * n - 1:
        raise DimensionError(f"order {n} needs {2 * n - 1} values, got {len(a)}")
    ring = ring or infer_ring(a + x)
    return _split(a, x, ring, None)


def merge(
    p: Sequence, q: Sequence, r: Sequence, n: int, ring: Optional[Ring] = None, rows: Optional[int] = None
) -> List:
    """Interleave ``p - q`` (odd rows) and ``p + r`` (even rows) into the first ``rows`` outputs."""
    rows = n if rows is None else rows
    ring = ring or infer_ring(tuple(p) + tuple(q) + tuple(r))
    odd, even = (rows + 1) // 2, rows // 2
    if len(p) < odd or len(q) < odd or len(r) < even:
        raise DimensionError(
            f"merging {rows} rows needs |p|, |q| >= {odd} and |r| >= {even}, got {len(p)}, {len(q)}, {len(r)}"
        )
    y = []
    for i in range(odd):
        y.append(ring.sub(p[i], q[i]))
        if i < even:
            y.append(ring.add(p[i], r[i]))
    return y


def _multiply(a: Sequence, x: Sequence, ring: Ring, rows: int, config: KaratsubaConfig, depth: int) -> List:
    n = len(x)
    if rows == 0:
        return []
    if n <= config.cutoff or (config.max_depth is not None and depth >= config.max_depth):
        return hankel_product(a, x, ring, rows)

    split = _split(a, x, ring, rows)
    p_rows, r_rows = (rows + 1) // 2, rows // 2
    logger.debug("depth %d: order %d, %d rows -> (%d, %d, %d)", depth, n, rows, split.m, split.m, split.m1)

    if config.parallel and depth < config.parallel_depth:
        with ThreadPoolExecutor(max_workers=2) as pool:
            p_future = pool.submit(_multiply, split.c, split.h, ring, p_rows, config, depth + 1)
            q_future = pool.submit(_multiply, split.d, split.f, ring, p_rows, config, depth + 1)
            r = _multiply(split.e, split.g, ring, r_rows, config, depth + 1)
            p, q = p_future.result(), q_future.result()
    else:
        p = _multiply(split.c, split.h, ring, p_rows, config, depth + 1)
        q = _multiply(split.d, split.f, ring, p_rows, config, depth + 1)
        r = _multiply(split.e, split.g, ring, r_rows, config, depth + 1)
    return merge(p, q, r, n, ring, rows)


def karatsuba_matvec(
    a,
    x: VectorLike,
    ring: Optional[Ring] = None,
    config: Optional[KaratsubaConfig] = None,
) -> DenseVector:
    """Hankel product ``H x`` for ``H`` given as a ``HankelMatrix`` or its defining sequence."""
    seq = a.seq if isinstance(a, HankelMatrix) else tuple(a)
    x = as_vector(x)
    n = len(x)
    if n < 1:
        raise DimensionError("the vector must be non-empty")
    if len(seq) != 2 * n - 1:
        raise DimensionError(f"order {n} needs {2 * n - 1} values, got {len(seq)}")
    ring = ring or infer_ring(seq + x.entries)
    config = config or KaratsubaConfig()
    return DenseVector(_multiply(seq, x.entries, ring, n, config, 0))


def parallel_karatsuba_matvec(
    a,
    x: VectorLike,
    ring: Optional[Ring] = None,
    config: Optional[KaratsubaConfig] = None,
) -> DenseVector:
    config = dataclasses.replace(config or KaratsubaConfig(), parallel=True)
    return karatsuba_matvec(a, x, ring, config)


def op_count_bounds(n: int) -> OpCountBounds:
    if n < 1:
        raise ParameterError(f"order must be positive, got {n}")
    levels = 3 ** (n - 1).bit_length()
    published = 6 * ((n + 2) // 2) * n ** (LOG2_3 - 1) + levels + 8 * n
    return OpCountBounds(multiplications=3 * levels, additions=7.5 * levels, published_additions=published)


def count_operations(n: int, config: Optional[KaratsubaConfig] = None) -> OpCountReport:
    """Counted operations of one product on an all-ones integer instance of order ``n``."""
    if n < 1:
        raise ParameterError(f"order must be positive, got {n}")
    a, x = [1] * (2 * n - 1), [1] * n
    _, report = counting_scope(IntegerRing(), lambda ring: karatsuba_matvec(a, x, ring, config))
    return report
