import numpy as np
import pytest
from numpy.testing import assert_allclose

from matvec.errors import DimensionError, ParameterError
from matvec.fft import (
    Direction,
    circulant_matvec_fft,
    fft,
    fft_hankel_matvec,
    fft_operation_estimate,
    linear_convolution,
    next_power_of_two,
)
from matvec.rings import FloatRing
from matvec.structured import CirculantMatrix, HankelMatrix, hankel_embed_circulant, pad, reverse


@pytest.mark.parametrize("n", [1, 2, 8, 64, 256])
def test_fft_matches_numpy(rng, n):
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    assert_allclose(fft(v), np.fft.fft(v), rtol=1e-10, atol=1e-10)
    assert_allclose(fft(v, Direction.INVERSE), np.fft.ifft(v), rtol=1e-10, atol=1e-10)


def test_inverse_undoes_forward(rng):
    v = rng.standard_normal(32)
    assert_allclose(fft(fft(v), "inverse").real, v, atol=1e-12)


@pytest.mark.parametrize("n", [0, 3, 6, 100])
def test_fft_rejects_other_lengths(n):
    with pytest.raises(ParameterError):
        fft(np.zeros(n))


def test_next_power_of_two():
    assert [next_power_of_two(k) for k in (1, 2, 3, 5, 8, 9)] == [1, 2, 4, 8, 8, 16]


@pytest.mark.parametrize("lengths", [(1, 1), (3, 5), (8, 8), (17, 4)])
def test_linear_convolution_matches_numpy(rng, lengths):
    u = rng.standard_normal(lengths[0])
    v = rng.standard_normal(lengths[1])
    assert_allclose(linear_convolution(u, v), np.convolve(u, v), atol=1e-12)


def test_linear_convolution_of_empty_input():
    assert linear_convolution([], [1.0, 2.0]).size == 0


@pytest.mark.parametrize("n", [1, 4, 5, 7, 8, 12])
def test_circulant_fft_matches_dense(rng, n):
    col = rng.standard_normal(n)
    x = rng.standard_normal(n)
    c = CirculantMatrix(n, col.tolist())
    expected = np.array(c.to_dense()) @ x
    assert_allclose(circulant_matvec_fft(c, x.tolist()).entries, expected, atol=1e-12)


def test_circulant_fft_rejects_mismatch():
    with pytest.raises(DimensionError):
        circulant_matvec_fft(CirculantMatrix(3, [1.0, 2.0, 3.0]), [1.0, 2.0])


def test_fft_hankel_small_example():
    y = fft_hankel_matvec(HankelMatrix(2, [1.0, 2.0, 3.0]), [1.0, 1.0])
    assert_allclose(y.entries, [3.0, 5.0])


@pytest.mark.parametrize("n", range(1, 129))
def test_fft_hankel_matches_dense_product(n):
    rng = np.random.default_rng(n)
    index = np.add.outer(np.arange(n), np.arange(n))
    for _ in range(20):
        a = rng.uniform(-1.0, 1.0, size=2 * n - 1)
        x = rng.uniform(-1.0, 1.0, size=n)
        expected = a[index] @ x
        y = np.array(fft_hankel_matvec(HankelMatrix(n, a.tolist()), x.tolist()).entries)
        assert np.max(np.abs(y - expected)) <= 1e-9 * np.max(np.abs(expected))


def test_fft_hankel_rejects_mismatch():
    with pytest.raises(DimensionError):
        fft_hankel_matvec(HankelMatrix(2, [1.0, 2.0, 3.0]), [1.0])


def test_operation_estimate():
    assert fft_operation_estimate(8) == 720.0
    assert fft_operation_estimate(1) == 0.0


@pytest.mark.parametrize("n", [1, 2, 4, 16, 128, 1024])
def test_parseval(rng, n):
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    energy = np.sum(np.abs(fft(v)) ** 2)
    assert energy == pytest.approx(n * np.sum(np.abs(v) ** 2), rel=1e-10)


@pytest.mark.parametrize("lengths", [(1, 1), (2, 7), (9, 9), (16, 5), (33, 20)])
def test_convolution_is_commutative_and_bilinear(rng, lengths):
    u, w = rng.standard_normal((2, lengths[0]))
    v = rng.standard_normal(lengths[1])
    alpha, beta = rng.standard_normal(2)
    assert_allclose(linear_convolution(u, v), linear_convolution(v, u), rtol=0, atol=1e-12)
    combined = linear_convolution(alpha * u + beta * w, v)
    expected = alpha * linear_convolution(u, v) + beta * linear_convolution(w, v)
    assert_allclose(combined, expected, rtol=0, atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 13, 16, 31, 64, 100])
def test_hankel_product_through_embedded_circulant(rng, n):
    ring = FloatRing()
    h = HankelMatrix(n, rng.uniform(-1.0, 1.0, size=2 * n - 1).tolist())
    x = rng.uniform(-1.0, 1.0, size=n).tolist()
    embedded = circulant_matvec_fft(hankel_embed_circulant(h, ring), pad(reverse(x), 2 * n, ring))
    direct = np.array(fft_hankel_matvec(h, x).entries)
    via_circulant = np.array(embedded.entries[:n])
    assert np.max(np.abs(direct - via_circulant)) <= 1e-9 * max(1.0, np.max(np.abs(direct)))
