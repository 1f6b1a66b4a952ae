"""Hot numeric kernels, each with a numba-compiled and a pure-numpy twin.

Every kernel fixes its floating-point operation order: accumulations run over
ascending indices and start from the first term rather than from zero.  The
two backends therefore produce bitwise-identical output, and repeated calls
are reproducible run to run.

The active backend is chosen once at import time: numba when it is
importable, unless the environment variable ``BLOCKGS_PURE_NUMPY`` is set to
``1``/``true``/``yes``/``on``, in which case the pure-numpy twins are used.
"""

from __future__ import annotations

import math
import os

import numpy as np

PURE_NUMPY_ENV = "BLOCKGS_PURE_NUMPY"

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    _HAVE_NUMBA = False


def _flag_enabled(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() in {"1", "true", "yes", "on"}


NUMBA_ACTIVE = _HAVE_NUMBA and not _flag_enabled(PURE_NUMPY_ENV)


def backend() -> str:
    """Name of the active kernel backend: ``"numba"`` or ``"numpy"``."""
    return "numba" if NUMBA_ACTIVE else "numpy"


# ---------------------------------------------------------------------------
# matrix product
# ---------------------------------------------------------------------------


def _matmul_fill(a, b, out):
    # out[i, j] = sum_k a[i, k] * b[k, j], k ascending, seeded with the k=0
    # term so that a width-1 product is a bare multiplication.
    m, kk = a.shape
    n = b.shape[1]
    for j in range(n):
        b0j = b[0, j]
        for i in range(m):
            out[i, j] = a[i, 0] * b0j
        for k in range(1, kk):
            bkj = b[k, j]
            for i in range(m):
                out[i, j] += a[i, k] * bkj


def _matmul_fill_numpy(a, b, out):
    # Same per-entry operation sequence as _matmul_fill, vectorized over rows.
    kk = a.shape[1]
    n = b.shape[1]
    for j in range(n):
        acc = a[:, 0] * b[0, j]
        for k in range(1, kk):
            acc += a[:, k] * b[k, j]
        out[:, j] = acc


# ---------------------------------------------------------------------------
# dot product and column norm
# ---------------------------------------------------------------------------


def _dot_py(x, y):
    acc = x[0] * y[0]
    for i in range(1, x.shape[0]):
        acc += x[i] * y[i]
    return acc


def _sumsq_py(x):
    acc = x[0] * x[0]
    for i in range(1, x.shape[0]):
        acc += x[i] * x[i]
    return acc


# ---------------------------------------------------------------------------
# Householder panel factorization
# ---------------------------------------------------------------------------


def _householder_fill(r, q, v, beta):
    # r: working copy of the panel, overwritten with the triangular factor.
    # q: identity panel on entry, explicit orthonormal factor on exit.
    # v, beta: scratch for the reflectors (unnormalized) and their 2/v^T v
    # scale factors; this formulation stays exact on integer-valued panels.
    m, p = r.shape
    for j in range(p):
        acc = r[j, j] * r[j, j]
        for i in range(j + 1, m):
            acc += r[i, j] * r[i, j]
        normx = np.sqrt(acc)
        if normx == 0.0:
            for i in range(j, m):
                v[i, j] = 0.0
            beta[j] = 0.0
            continue
        s = 1.0 if r[j, j] >= 0.0 else -1.0
        v[j, j] = r[j, j] + s * normx
        for i in range(j + 1, m):
            v[i, j] = r[i, j]
        acc2 = v[j, j] * v[j, j]
        for i in range(j + 1, m):
            acc2 += v[i, j] * v[i, j]
        beta[j] = 2.0 / acc2
        for col in range(j, p):
            w = v[j, j] * r[j, col]
            for i in range(j + 1, m):
                w += v[i, j] * r[i, col]
            tau = beta[j] * w
            for i in range(j, m):
                r[i, col] -= v[i, j] * tau
    for j in range(p - 1, -1, -1):
        for col in range(p):
            w = v[j, j] * q[j, col]
            for i in range(j + 1, m):
                w += v[i, j] * q[i, col]
            tau = beta[j] * w
            for i in range(j, m):
                q[i, col] -= v[i, j] * tau


def _householder_fill_numpy(r, q, v, beta):
    # Twin of _householder_fill: reflector dot products accumulate row by row
    # (ascending), vectorized across the trailing columns.
    m, p = r.shape
    for j in range(p):
        acc = r[j, j] * r[j, j]
        for i in range(j + 1, m):
            acc += r[i, j] * r[i, j]
        normx = np.sqrt(acc)
        if normx == 0.0:
            v[j:, j] = 0.0
            beta[j] = 0.0
            continue
        s = 1.0 if r[j, j] >= 0.0 else -1.0
        v[j + 1 :, j] = r[j + 1 :, j]
        v[j, j] = r[j, j] + s * normx
        acc2 = v[j, j] * v[j, j]
        for i in range(j + 1, m):
            acc2 += v[i, j] * v[i, j]
        beta[j] = 2.0 / acc2
        w = v[j, j] * r[j, j:]
        for i in range(j + 1, m):
            w += v[i, j] * r[i, j:]
        r[j:, j:] -= np.multiply.outer(v[j:, j], beta[j] * w)
    for j in range(p - 1, -1, -1):
        w = v[j, j] * q[j, :]
        for i in range(j + 1, m):
            w += v[i, j] * q[i, :]
        q[j:, :] -= np.multiply.outer(v[j:, j], beta[j] * w)


# ---------------------------------------------------------------------------
# backend selection
# ---------------------------------------------------------------------------

if _HAVE_NUMBA:
    _matmul_fill_numba = njit(cache=True, nogil=True)(_matmul_fill)
    _dot_numba = njit(cache=True, nogil=True)(_dot_py)
    _sumsq_numba = njit(cache=True, nogil=True)(_sumsq_py)
    _householder_fill_numba = njit(cache=True, nogil=True)(_householder_fill)
else:  # pragma: no cover
    _matmul_fill_numba = None
    _dot_numba = None
    _sumsq_numba = None
    _householder_fill_numba = None

_matmul_active = _matmul_fill_numba if NUMBA_ACTIVE else _matmul_fill_numpy
_dot_active = _dot_numba if NUMBA_ACTIVE else _dot_py
_sumsq_active = _sumsq_numba if NUMBA_ACTIVE else _sumsq_py
_householder_active = _householder_fill_numba if NUMBA_ACTIVE else _householder_fill_numpy


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Deterministic product a @ b with ascending-index accumulation.

    Inputs must be 2-D float64 arrays with a.shape[1] == b.shape[0] >= 1.
    Shape validation lives in :mod:`blockgs.core`; this is the raw kernel.
    """
    out = np.empty((a.shape[0], b.shape[1]), dtype=np.float64, order="F")
    _matmul_active(a, b, out)
    return out


def dot(x: np.ndarray, y: np.ndarray) -> float:
    """Ascending-index dot product of two 1-D float64 arrays."""
    return float(_dot_active(x, y))


def vec_norm(x: np.ndarray) -> float:
    """Euclidean norm of a 1-D float64 array, ascending-index sum of squares."""
    if x.shape[0] == 0:
        return 0.0
    return math.sqrt(_sumsq_active(x))


def householder_qr(b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Thin Householder QR of an m-by-p panel (m >= p).

    Returns (q, r) with q the explicit m-by-p orthonormal factor obtained by
    applying the accumulated reflectors to the first p columns of the
    identity, and r the p-by-p triangular factor with exact zeros below the
    diagonal.  No sign normalization is applied here.
    """
    m, p = b.shape
    rwork = np.array(b, dtype=np.float64, order="F", copy=True)
    q = np.asfortranarray(np.eye(m, p))
    v = np.zeros((m, p), dtype=np.float64, order="F")
    beta = np.zeros(p, dtype=np.float64)
    _householder_active(rwork, q, v, beta)
    r = np.asfortranarray(np.triu(rwork[:p, :p]))
    return q, r


def both_backends_available() -> bool:
    """True when the numba twins exist alongside the numpy ones."""
    return _HAVE_NUMBA
