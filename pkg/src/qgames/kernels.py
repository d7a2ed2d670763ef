"""Hot loops, each with a numba version and a pure-numpy version.

The public names (``tally_runs``, ``embedding_batch``) are bound to the numba
version unless ``QGAMES_NO_JIT`` is set or numba is unavailable.  The two
versions perform the same floating-point operations in the same order, so
their outputs are bit-identical; tests assert this.
"""
import numpy as np

from ._accel import BACKEND, HAVE_NUMBA, njit


def _tally_loop(u, x, y, cdf, counts):
    """Accumulate one chunk of referee runs into ``counts`` (4 x 4, int64).

    ``u`` has one row of three uniforms per run: Alice's coin choice, Bob's
    coin choice, and the joint outcome (inverse CDF over the chosen quadrant).
    """
    for i in range(u.shape[0]):
        q = 0
        if u[i, 0] >= x:
            q += 2
        if u[i, 1] >= y:
            q += 1
        k = 0
        while k < 3 and u[i, 2] >= cdf[q, k]:
            k += 1
        counts[q, k] += 1


def tally_runs_numpy(u, x, y, cdf, counts):
    q = 2 * (u[:, 0] >= x).astype(np.int64) + (u[:, 1] >= y).astype(np.int64)
    k = (u[:, 2:3] >= cdf[q, :3]).sum(axis=1)
    counts += np.bincount(4 * q + k, minlength=16).reshape(4, 4)


def _embedding_loop(params, out, valid, tol):
    """Fill ``out`` (N x 16) with classical-embedding tables; ``valid`` flags usable rows."""
    for i in range(params.shape[0]):
        a = params[i, 0]
        b = params[i, 1]
        c = params[i, 2]
        d = params[i, 3]
        e = params[i, 4]
        eta = a + b + e - c - d
        out[i, 0] = 1 - a - 2 * b
        out[i, 1] = b
        out[i, 2] = b
        out[i, 3] = a
        out[i, 4] = e
        out[i, 5] = 1 - a - b - e
        out[i, 6] = d + c - e
        out[i, 7] = eta
        out[i, 8] = e
        out[i, 9] = c + d - e
        out[i, 10] = 1 - a - b - e
        out[i, 11] = eta
        out[i, 12] = c
        out[i, 13] = d
        out[i, 14] = d
        out[i, 15] = 1 - c - 2 * d
        ok = a >= 0 and b >= 0 and c >= 0 and d >= 0 and e >= 0
        for k in range(16):
            if out[i, k] < -tol or out[i, k] > 1 + tol:
                ok = False
        valid[i] = ok


def embedding_batch_numpy(params, out, valid, tol):
    a, b, c, d, e = (params[:, k] for k in range(5))
    eta = a + b + e - c - d
    cols = (
        1 - a - 2 * b, b, b, a,
        e, 1 - a - b - e, d + c - e, eta,
        e, c + d - e, 1 - a - b - e, eta,
        c, d, d, 1 - c - 2 * d,
    )
    for k, col in enumerate(cols):
        out[:, k] = col
    valid[:] = np.all(params >= 0, axis=1) & np.all((out >= -tol) & (out <= 1 + tol), axis=1)


if HAVE_NUMBA:
    tally_runs_numba = njit(nogil=True, cache=True)(_tally_loop)
    embedding_batch_numba = njit(nogil=True, cache=True)(_embedding_loop)
    tally_runs = tally_runs_numba
    embedding_batch_impl = embedding_batch_numba
else:
    tally_runs_numba = None
    embedding_batch_numba = None
    tally_runs = tally_runs_numpy
    embedding_batch_impl = embedding_batch_numpy


def embedding_batch(params, tol=1e-12, impl=None):
    """Tables and validity mask for an (N, 5) array of (a, b, c, d, e)."""
    params = np.ascontiguousarray(params, dtype=np.float64)
    out = np.empty((params.shape[0], 16))
    valid = np.empty(params.shape[0], dtype=np.bool_)
    (impl or embedding_batch_impl)(params, out, valid, tol)
    return out, valid


__all__ = [
    "BACKEND",
    "embedding_batch",
    "embedding_batch_numpy",
    "embedding_batch_numba",
    "tally_runs",
    "tally_runs_numpy",
    "tally_runs_numba",
]
