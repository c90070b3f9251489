import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from matvec.errors import DimensionError, IndexOutOfRangeError
from matvec.fft import fft_hankel_matvec
from matvec.decomposition import decomp_matvec
from matvec.karatsuba import karatsuba_matvec
from matvec.rings import IntegerRing
from matvec.structured import (
    CirculantMatrix,
    HankelMatrix,
    ToeplitzMatrix,
    circulant_matvec,
    circulant_matvec_dense,
    circulant_to_toeplitz,
    element,
    hankel_embed_circulant,
    hankel_from_sequence,
    pad,
    reverse,
    schoolbook_matvec,
    toeplitz_matvec,
    toeplitz_to_hankel,
)
from tests.conftest import dense_product, random_int_instance

RING = IntegerRing()


def test_from_sequence_builds_order():
    h = hankel_from_sequence([1, 2, 3])
    assert h.n == 2
    assert h.to_dense() == [[1, 2], [2, 3]]


@pytest.mark.parametrize("seq", [[], [1, 2], [1, 2, 3, 4]])
def test_from_sequence_rejects_even_or_empty(seq):
    with pytest.raises(DimensionError):
        hankel_from_sequence(seq)


def test_matrix_rejects_wrong_length():
    with pytest.raises(DimensionError):
        HankelMatrix(3, [1, 2, 3, 4])
    with pytest.raises(ValueError):
        ToeplitzMatrix(2, [1, 2])


def test_element_is_one_indexed():
    h = hankel_from_sequence([1, 2, 3, 4, 5])
    assert element(h, 1, 1) == 1
    assert element(h, 2, 3) == 4
    assert element(h, 3, 3) == 5


@pytest.mark.parametrize("i,j", [(0, 1), (1, 0), (4, 1), (1, 4)])
def test_element_out_of_range(i, j):
    h = hankel_from_sequence([1, 2, 3, 4, 5])
    with pytest.raises(IndexOutOfRangeError):
        element(h, i, j)
    with pytest.raises(IndexError):
        element(h, i, j)


@given(st.lists(st.integers(-100, 100), min_size=1, max_size=31).filter(lambda s: len(s) % 2 == 1))
@settings(max_examples=50)
def test_anti_diagonals_are_constant(seq):
    h = hankel_from_sequence(seq)
    for i in range(1, h.n + 1):
        for j in range(1, h.n + 1):
            assert element(h, i, j) == seq[i + j - 2]


def test_schoolbook_small_examples():
    assert schoolbook_matvec(HankelMatrix(2, [1, 2, 3]), [1, 1]).entries == (3, 5)
    assert schoolbook_matvec(HankelMatrix(3, [1] * 5), [1, 1, 1]).entries == (3, 3, 3)
    assert schoolbook_matvec(HankelMatrix(1, [7]), [6]).entries == (42,)


def test_schoolbook_rejects_length_mismatch():
    with pytest.raises(DimensionError):
        schoolbook_matvec(HankelMatrix(2, [1, 2, 3]), [1, 2, 3])


@pytest.mark.parametrize("n", [1, 2, 3, 7, 16])
def test_schoolbook_matches_dense(rng, n):
    h, x = random_int_instance(rng, n)
    assert list(schoolbook_matvec(h, x, RING)) == dense_product(h.to_dense(), x)


def test_schoolbook_is_linear(rng):
    h, x = random_int_instance(rng, 9)
    _, z = random_int_instance(rng, 9)
    total = [a + b for a, b in zip(x, z)]
    left = schoolbook_matvec(h, total, RING)
    right = [a + b for a, b in zip(schoolbook_matvec(h, x, RING), schoolbook_matvec(h, z, RING))]
    assert list(left) == right


def test_reverse_and_pad():
    assert reverse([1, 2, 3]).entries == (3, 2, 1)
    assert pad([1, 2], 4, RING).entries == (1, 2, 0, 0)
    with pytest.raises(DimensionError):
        pad([1, 2, 3], 2, RING)


@pytest.mark.parametrize("seed", range(50))
def test_toeplitz_identities(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 17))
    h, x = random_int_instance(rng, n)
    t = ToeplitzMatrix(n, h.seq)
    hankel = toeplitz_to_hankel(t)
    assert hankel.seq == t.seq
    t_dense, h_dense = t.to_dense(), hankel.to_dense()
    for i in range(n):
        assert h_dense[i] == t_dense[n - 1 - i]
    assert list(toeplitz_matvec(t, x, RING)) == dense_product(t_dense, x)


def test_toeplitz_first_and_last_rows():
    t = ToeplitzMatrix(3, [1, 2, 3, 4, 5])
    assert t.to_dense()[0] == [3, 4, 5]
    assert t.to_dense()[-1] == [1, 2, 3]


def test_toeplitz_through_fast_kernels(rng):
    h, x = random_int_instance(rng, 13)
    t = ToeplitzMatrix(13, h.seq)
    expected = dense_product(t.to_dense(), x)
    assert list(toeplitz_matvec(t, x, kernel=lambda m, v: karatsuba_matvec(m, v, RING))) == expected
    fast = toeplitz_matvec(t, x, kernel=fft_hankel_matvec)
    scale = max(abs(v) for v in expected)
    assert max(abs(a - b) for a, b in zip(fast, expected)) <= 1e-9 * scale


@pytest.mark.parametrize("seed", range(50))
def test_circulant_embedding(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 17))
    h, x = random_int_instance(rng, n)
    c = hankel_embed_circulant(h, RING)
    assert c.n == 2 * n
    y = circulant_matvec_dense(c, pad(reverse(x), 2 * n, RING), RING)
    assert list(y[:n]) == list(schoolbook_matvec(h, x, RING))


def test_circulant_embedding_layout():
    c = hankel_embed_circulant(HankelMatrix(3, [1, 2, 3, 4, 5]), RING)
    assert c.col == (3, 4, 5, 0, 1, 2)


def test_circulant_dense_product(rng):
    col = [int(v) for v in rng.integers(-50, 50, size=6)]
    x = [int(v) for v in rng.integers(-50, 50, size=6)]
    c = CirculantMatrix(6, col)
    assert c.to_dense()[1] == [col[1], col[0], col[5], col[4], col[3], col[2]]
    assert list(circulant_matvec_dense(c, x, RING)) == dense_product(c.to_dense(), x)


def decomp_kernel(matrix, x):
    y, _ = decomp_matvec(matrix, x, 16)
    return y


@pytest.mark.parametrize("n", [1, 2, 3, 6, 11])
def test_circulant_as_toeplitz(rng, n):
    c = CirculantMatrix(n, [int(v) for v in rng.integers(-50, 50, size=n)])
    assert circulant_to_toeplitz(c).to_dense() == c.to_dense()


@pytest.mark.parametrize("seed", range(50))
def test_circulant_through_hankel_kernels(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 17))
    c = CirculantMatrix(n, [int(v) for v in rng.integers(-2 ** 20, 2 ** 20, size=n, endpoint=True)])
    x = [int(v) for v in rng.integers(-2 ** 20, 2 ** 20, size=n, endpoint=True)]
    expected = circulant_matvec_dense(c, x, RING)
    assert circulant_matvec(c, x, RING) == expected
    assert circulant_matvec(c, x, kernel=lambda m, v: karatsuba_matvec(m, v, RING)) == expected


def test_toeplitz_through_decomposition(rng):
    h, x = random_int_instance(rng, 13)
    t = ToeplitzMatrix(13, h.seq)
    assert list(toeplitz_matvec(t, x, kernel=decomp_kernel)) == dense_product(t.to_dense(), x)


@pytest.mark.parametrize("n", [1, 4, 9, 16])
def test_circulant_through_decomposition(rng, n):
    c = CirculantMatrix(n, [int(v) for v in rng.integers(-2 ** 20, 2 ** 20, size=n, endpoint=True)])
    x = [int(v) for v in rng.integers(-2 ** 20, 2 ** 20, size=n, endpoint=True)]
    assert list(circulant_matvec(c, x, kernel=decomp_kernel)) == list(circulant_matvec_dense(c, x, RING))
