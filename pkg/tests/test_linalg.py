import numpy as np
import pytest

from czl.field import field
from czl.linalg import kernel, rank, rref


def _random_low_rank(p, m, n, r, seed):
    rng = np.random.default_rng(seed)
    return (rng.integers(0, p, (m, r)) @ rng.integers(0, p, (r, n))) % p


@pytest.mark.parametrize("p", (2, 3, 5))
@pytest.mark.parametrize("shape", [(10, 8, 5), (300, 40, 25), (40, 40, 40)])
def test_kernel_has_right_dimension_and_vanishes(p, shape):
    F = field(p)
    m, n, r = shape
    A = _random_low_rank(p, m, n, r, seed=m + n + p)
    basis, free = kernel(F, A)
    k = rank(F, A)
    assert len(basis) == n - k
    if len(basis):
        assert not ((A @ basis.T) % p).any()
        # normalization: vector f leads at its free column with a 1
        for vec, f in zip(basis, free):
            assert vec[f] == 1 and not vec[f + 1:].any()


def test_compressed_path_matches_full_elimination():
    p = 3
    F = field(p)
    A = _random_low_rank(p, 2000, 60, 45, seed=1)
    basis, free = kernel(F, A)
    R, pivots = rref(F, A)
    assert sorted(set(range(60)) - set(pivots)) == free
    assert not ((A @ basis.T) % p).any()


def test_rref_over_extension_field():
    F = field(4)
    A = np.array([[1, 2, 3], [2, 3, 1], [3, 1, 2]])
    R, pivots = rref(F, A)
    # rows 2 and 3 are rows 1 scaled by the generator and its square
    assert pivots == [0]
    assert len(kernel(F, A)[0]) == 2
