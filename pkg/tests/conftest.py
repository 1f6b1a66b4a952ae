import numpy as np
import pytest

import blockgs as bg


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def random_orthonormal(m: int, k: int, seed: int) -> np.ndarray:
    """Orthonormal m-by-k panel from the QR of a seeded Gaussian matrix."""
    g = np.random.default_rng(seed).standard_normal((m, k))
    q, _ = np.linalg.qr(g)
    return np.asfortranarray(q)


def degraded_cascade_matrix(
    m: int = 192,
    p: int = 16,
    n_bad: int = 4,
    eta: float = 6e-16,
    seed: int = 0,
) -> tuple[np.ndarray, bg.BlockPartition, int]:
    """Square matrix whose trailing blocks defeat the two-pass repair.

    The first blocks are well conditioned.  Each trailing block lies in the
    span of the leading columns up to an eta-sized fresh component, putting
    the diagonal blocks of R at conditioning near 1/eps; the repair loss then
    compounds across the trailing blocks.  Returns the matrix, the uniform
    partition, and the index of the first degraded block.
    """
    n = m
    rng = np.random.default_rng(seed)
    z, _ = np.linalg.qr(rng.standard_normal((m, m)))
    t_good = n - n_bad * p
    zu = z[:, :t_good]
    a = np.zeros((m, n), order="F")
    g = rng.standard_normal((t_good, t_good)) + 5.0 * np.eye(t_good)
    a[:, :t_good] = zu @ g
    for j in range(n_bad):
        lo = t_good + j * p
        zf = z[:, lo : lo + p]
        c = rng.standard_normal((t_good, p))
        h = rng.standard_normal((p, p))
        a[:, lo : lo + p] = zu @ c + eta * (zf @ h)
    part = bg.BlockPartition.uniform(n, p)
    first_bad = t_good // p + 1
    return np.asfortranarray(a), part, first_bad
