import numpy as np
import pytest

from nonlinear_qubit.channels import AncillaVectors, GramParams


def random_isometry_channels(rng, n, dim=2):
    """Random channels from the first two columns of Haar-ish unitaries on qubit (x) ancilla.

    Column 0 is |0>|B> + |1>|A>, column 1 is |0>|A~> + |1>|B~>, so the
    ansatz constraints hold by orthonormality.
    """
    m = rng.normal(size=(n, 2 * dim, 2)) + 1j * rng.normal(size=(n, 2 * dim, 2))
    q, _ = np.linalg.qr(m)
    col0, col1 = q[..., 0], q[..., 1]
    return [
        AncillaVectors(A=c0[dim:], Atilde=c1[:dim], B=c0[:dim], Btilde=c1[dim:])
        for c0, c1 in zip(col0, col1)
    ]


def random_feasible_gram(rng):
    x, y = rng.uniform(0, 1, size=2)
    r = np.sqrt(x * y) * np.sqrt(rng.uniform(0, 1))
    return GramParams(x, y, r * np.exp(1j * rng.uniform(0, 2 * np.pi)))


@pytest.fixture
def rng():
    return np.random.default_rng(20011)
