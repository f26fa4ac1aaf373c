import numpy as np
import pytest

from nptcert import linalg


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # Trigger JIT compilation of the sweep kernel before any timed test runs.
    linalg.hermitian_eig(np.eye(3, dtype=complex))


def random_hermitian(rng, n: int) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (g + g.conj().T) / 2.0
