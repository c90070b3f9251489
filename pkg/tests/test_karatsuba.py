import itertools

import numpy as np
import pytest

from matvec.errors import DimensionError, ParameterError
from matvec.karatsuba import (
    KaratsubaConfig,
    count_operations,
    karatsuba_matvec,
    merge,
    op_count_bounds,
    parallel_karatsuba_matvec,
    split_system,
)
from matvec.rings import FixedPointNumber, FixedPointRing, FloatRing, IntegerRing, OpCountReport, counting_scope
from matvec.structured import HankelMatrix, schoolbook_matvec
from tests.conftest import random_int_instance

RING = IntegerRing()

ORDERS = list(range(1, 65)) + [100, 127, 128, 255, 256, 257]


def test_split_odd_order():
    split = split_system([1, 2, 3, 4, 5], [1, 2, 3])
    assert (split.m, split.m1) == (2, 2)
    assert split.c == (3, 7, 5)
    assert split.d == (2, 4, 0)
    assert split.e == (1, 3, 5)
    assert split.h == (1, 3)
    assert split.f == (-1, 3)
    assert split.g == (-1, -1)


def test_split_even_order():
    split = split_system([1, 2, 3, 4, 5, 6, 7], [1, 2, 3, 4])
    assert (split.m, split.m1) == (2, 3)
    assert split.c == (3, 7, 11)
    assert split.d == (2, 4, 6)
    assert split.e == (1, 3, 5, 7, 0)
    assert split.h == (1, 3)
    assert split.f == (-1, -1)
    assert split.g == (-1, -1, 4)


def test_split_subproducts_rebuild_the_product():
    a, x = [1, 2, 3, 4, 5], [1, 2, 3]
    split = split_system(a, x)
    p = schoolbook_matvec(HankelMatrix(2, split.c), split.h)
    q = schoolbook_matvec(HankelMatrix(2, split.d), split.f)
    r = schoolbook_matvec(HankelMatrix(2, split.e), split.g)
    assert merge(p, q, r, 3) == [14, 20, 26]


@pytest.mark.parametrize("a,x", [([1], [1]), ([1, 2], [1, 2]), ([1, 2, 3, 4], [1, 2])])
def test_split_rejects_bad_shapes(a, x):
    with pytest.raises(DimensionError):
        split_system(a, x)


def test_merge_interleaves():
    assert merge([10, 20], [1, 2], [5], 3) == [9, 15, 18]
    assert merge([10, 20], [1, 2], [5, 6], 4) == [9, 15, 18, 26]
    assert merge([10, 20], [1, 2], [5, 6], 4, rows=3) == [9, 15, 18]


def test_merge_rejects_short_inputs():
    with pytest.raises(DimensionError):
        merge([1], [1], [], 3)


def test_small_example():
    assert karatsuba_matvec([1, 2, 3], [1, 1]).entries == (3, 5)
    assert karatsuba_matvec(HankelMatrix(2, [1, 2, 3]), [1, 1], config=KaratsubaConfig(cutoff=1)).entries == (3, 5)


def test_rejects_bad_shapes():
    with pytest.raises(DimensionError):
        karatsuba_matvec([1, 2, 3], [1, 1, 1])
    with pytest.raises(DimensionError):
        karatsuba_matvec([], [])


@pytest.mark.parametrize(
    "n,cutoff,max_depth",
    list(itertools.product(ORDERS, [1, 2, 4, 8], [1, 2, None])),
)
def test_matches_schoolbook(n, cutoff, max_depth):
    rng = np.random.default_rng(1000 * n + 10 * cutoff + (max_depth or 0))
    config = KaratsubaConfig(cutoff=cutoff, max_depth=max_depth)
    instances = 20 if n <= 16 else 4 if n <= 64 else 2
    for _ in range(instances):
        h, x = random_int_instance(rng, n)
        assert karatsuba_matvec(h, x, RING, config) == schoolbook_matvec(h, x, RING)


@pytest.mark.parametrize("n", [64, 256, 1024])
def test_parallel_matches_sequential(rng, n):
    h, x = random_int_instance(rng, n)
    sequential, seq_report = counting_scope(RING, lambda ring: karatsuba_matvec(h, x, ring))
    parallel, par_report = counting_scope(RING, lambda ring: parallel_karatsuba_matvec(h, x, ring))
    assert parallel == sequential
    assert par_report == seq_report
    assert parallel == schoolbook_matvec(h, x, RING)


@pytest.mark.parametrize("k", range(1, 11))
def test_multiplications_at_powers_of_two(k):
    assert count_operations(2 ** k).multiplications == 2 * 3 ** k - 2 ** k


@pytest.mark.parametrize("k", range(1, 9))
def test_additions_at_powers_of_two(k):
    assert 2 * count_operations(2 ** k).additions == 15 * 3 ** k - 22 * 2 ** k + 3


def test_small_counts():
    assert count_operations(2) == OpCountReport(4, 2)
    assert count_operations(3) == OpCountReport(10, 13)
    assert count_operations(4).multiplications == 14


@pytest.mark.parametrize("k", range(3, 11))
def test_multiplication_ratio_tends_to_three(k):
    ratio = count_operations(2 ** k).multiplications / count_operations(2 ** (k - 1)).multiplications
    assert 3 < ratio < 3.5


@pytest.mark.parametrize("n", list(range(1, 41)) + [64, 100, 128, 200, 256])
def test_counts_within_envelope(n):
    report = count_operations(n)
    bounds = op_count_bounds(n)
    assert report.multiplications <= bounds.multiplications
    assert report.additions <= bounds.additions


@pytest.mark.parametrize("n", range(4, 257))
def test_single_level_saves_multiplications(n):
    report = count_operations(n, KaratsubaConfig(max_depth=1))
    expected = 2 * ((n + 1) // 2) ** 2 + (n // 2) * (n // 2 + 1)
    assert report.multiplications == expected
    assert report.multiplications < n * n
    assert report.multiplications <= 3 * ((n + 2) // 2) ** 2


def test_bounds_values():
    assert op_count_bounds(1).multiplications == 3
    assert op_count_bounds(2).multiplications == 9
    assert op_count_bounds(256).multiplications == 19683
    assert count_operations(256).multiplications <= 19683
    with pytest.raises(ParameterError):
        op_count_bounds(0)


def test_counts_do_not_depend_on_data(rng):
    h, x = random_int_instance(rng, 37)
    _, report = counting_scope(RING, lambda ring: karatsuba_matvec(h, x, ring))
    assert report == count_operations(37)


def test_parallel_counts_match():
    config = KaratsubaConfig(parallel=True, parallel_depth=3)
    assert count_operations(128, config) == count_operations(128)


@pytest.mark.parametrize(
    "kwargs",
    [{"cutoff": 0}, {"max_depth": 0}, {"parallel_depth": -1}],
)
def test_config_validation(kwargs):
    with pytest.raises(ParameterError):
        KaratsubaConfig(**kwargs)


def test_float_ring(rng):
    n = 50
    a = rng.uniform(-1.0, 1.0, size=2 * n - 1)
    x = rng.uniform(-1.0, 1.0, size=n)
    expected = a[np.add.outer(np.arange(n), np.arange(n))] @ x
    y = np.array(karatsuba_matvec(a.tolist(), x.tolist(), FloatRing()).entries)
    assert np.max(np.abs(y - expected)) <= 1e-9 * np.max(np.abs(expected))


def test_exact_fixed_point_ring(rng):
    n = 21
    seq = [FixedPointNumber.from_parts(int(v), int(e), None)
           for v, e in zip(rng.integers(-2 ** 40, 2 ** 40, size=2 * n - 1), rng.integers(-30, 30, size=2 * n - 1))]
    x = [FixedPointNumber.from_parts(int(v), -8, None) for v in rng.integers(-2 ** 40, 2 ** 40, size=n)]
    ring = FixedPointRing(None)
    h = HankelMatrix(n, seq)
    assert list(karatsuba_matvec(h, x, ring)) == list(schoolbook_matvec(h, x, ring))
