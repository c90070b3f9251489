import numpy as np
import pytest

from matvec.structured import DenseVector, HankelMatrix


def random_int_instance(rng: np.random.Generator, n: int, bound: int = 2 ** 20):
    seq = [int(v) for v in rng.integers(-bound, bound, size=2 * n - 1, endpoint=True)]
    x = [int(v) for v in rng.integers(-bound, bound, size=n, endpoint=True)]
    return HankelMatrix(n, seq), DenseVector(x)


def dense_product(rows, x):
    return [sum(a * b for a, b in zip(row, x)) for row in rows]


@pytest.fixture
def rng():
    return np.random.default_rng(20240101)
