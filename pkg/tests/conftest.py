import numpy as np
import pytest

from similearn.kernels import Dataset


def two_blobs(n_per=20, sep=10.0, sigma=1.0, seed=0):
    """Two Gaussian blobs in the plane, `sep` sigmas apart."""
    rng = np.random.default_rng(seed)
    X = np.vstack(
        [
            rng.normal(0.0, sigma, size=(n_per, 2)),
            rng.normal([sep * sigma, 0.0], sigma, size=(n_per, 2)),
        ]
    )
    y = np.repeat([0, 1], n_per)
    return Dataset(features=X, labels=y, c=2)


def random_psd_kernel(n, rng, normalize=True):
    A = rng.standard_normal((n, n))
    K = A @ A.T
    if normalize:
        K /= np.diag(K).max()
    return K


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
