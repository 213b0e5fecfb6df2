"""Row-reduction and matrix-product kernels.

Two implementations live side by side: numba-compiled loops and a pure-numpy
path.  ``KOSZUL_LAB_BACKEND=numpy`` (or a missing numba) selects the numpy
path.  Both operate either on residues mod p (prime fields) or on the Zech
logarithm representation of an extension field, where ``-1`` encodes zero.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

BACKEND = os.environ.get("KOSZUL_LAB_BACKEND", "numba").lower()
USE_NUMBA = numba is not None and BACKEND != "numpy"


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# numpy implementations


def rref_prime_np(A: np.ndarray, p: int, full: bool = True) -> tuple[int, np.ndarray]:
    nr, nc = A.shape
    pivots = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        pr = r + nz[0]
        if pr != r:
            A[[r, pr]] = A[[pr, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r, c:] = A[r, c:] * inv % p
        col = A[:, c].copy()
        if not full:
            col[:r] = 0
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            A[rows, c:] = (A[rows, c:] + np.outer(p - col[rows], A[r, c:])) % p
        pivots.append(c)
        r += 1
    return r, np.array(pivots, dtype=np.int64)


def _log_add(a, b, q1, zech):
    d = (b - a) % q1
    z = zech[d]
    res = np.where(z < 0, -1, (a + z) % q1)
    return np.where(a < 0, b, np.where(b < 0, a, res))


def _log_mul(a, b, q1):
    return np.where((a < 0) | (b < 0), -1, (a + b) % q1)


def rref_log_np(L: np.ndarray, q1: int, half: int, zech: np.ndarray, full: bool = True) -> tuple[int, np.ndarray]:
    nr, nc = L.shape
    pivots = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        nz = np.flatnonzero(L[r:, c] >= 0)
        if nz.size == 0:
            continue
        pr = r + nz[0]
        if pr != r:
            L[[r, pr]] = L[[pr, r]]
        shift = (q1 - L[r, c]) % q1
        seg = L[r, c:]
        L[r, c:] = np.where(seg < 0, -1, (seg + shift) % q1)
        col = L[:, c].copy()
        if not full:
            col[:r] = -1
        col[r] = -1
        rows = np.flatnonzero(col >= 0)
        if rows.size:
            negf = (col[rows] + half) % q1
            prod = _log_mul(negf[:, None], L[r, c:][None, :], q1)
            L[rows, c:] = _log_add(L[rows, c:], prod, q1, zech)
        pivots.append(c)
        r += 1
    return r, np.array(pivots, dtype=np.int64)


def matmul_log_np(A: np.ndarray, B: np.ndarray, q1: int, zech: np.ndarray) -> np.ndarray:
    out = np.full((A.shape[0], B.shape[1]), -1, dtype=np.int64)
    for k in range(A.shape[1]):
        a = A[:, k]
        if np.all(a < 0):
            continue
        prod = _log_mul(a[:, None], B[k][None, :], q1)
        out = _log_add(out, prod, q1, zech)
    return out


# ---------------------------------------------------------------------------
# numba implementations

if numba is not None:

    @numba.njit(cache=True, nogil=True)
    def _rref_prime_nb(A, p, full):
        nr, nc = A.shape
        piv = np.empty(min(nr, nc), dtype=np.int64)
        r = 0
        for c in range(nc):
            if r == nr:
                break
            pr = -1
            for i in range(r, nr):
                if A[i, c] != 0:
                    pr = i
                    break
            if pr < 0:
                continue
            if pr != r:
                for j in range(nc):
                    t = A[r, j]
                    A[r, j] = A[pr, j]
                    A[pr, j] = t
            # inverse by Fermat
            base = A[r, c]
            e = p - 2
            inv = 1
            while e > 0:
                if e & 1:
                    inv = inv * base % p
                base = base * base % p
                e >>= 1
            for j in range(c, nc):
                A[r, j] = A[r, j] * inv % p
            for i in range(0 if full else r + 1, nr):
                if i == r:
                    continue
                f = A[i, c]
                if f == 0:
                    continue
                nf = p - f
                for j in range(c, nc):
                    if A[r, j] != 0:
                        A[i, j] = (A[i, j] + nf * A[r, j]) % p
            piv[r] = c
            r += 1
        return r, piv[:r].copy()

    @numba.njit(cache=True, nogil=True)
    def _rref_log_nb(L, q1, half, zech, full):
        nr, nc = L.shape
        piv = np.empty(min(nr, nc), dtype=np.int64)
        r = 0
        for c in range(nc):
            if r == nr:
                break
            pr = -1
            for i in range(r, nr):
                if L[i, c] >= 0:
                    pr = i
                    break
            if pr < 0:
                continue
            if pr != r:
                for j in range(nc):
                    t = L[r, j]
                    L[r, j] = L[pr, j]
                    L[pr, j] = t
            shift = (q1 - L[r, c]) % q1
            for j in range(c, nc):
                if L[r, j] >= 0:
                    L[r, j] = (L[r, j] + shift) % q1
            for i in range(0 if full else r + 1, nr):
                if i == r:
                    continue
                f = L[i, c]
                if f < 0:
                    continue
                nf = (f + half) % q1
                for j in range(c, nc):
                    b = L[r, j]
                    if b < 0:
                        continue
                    t = (nf + b) % q1
                    a = L[i, j]
                    if a < 0:
                        L[i, j] = t
                    else:
                        z = zech[(t - a) % q1]
                        L[i, j] = -1 if z < 0 else (a + z) % q1
            piv[r] = c
            r += 1
        return r, piv[:r].copy()

    @numba.njit(cache=True, nogil=True)
    def _matmul_log_nb(A, B, q1, zech):
        n, k = A.shape
        m = B.shape[1]
        out = np.full((n, m), -1, dtype=np.int64)
        for i in range(n):
            for t in range(k):
                a = A[i, t]
                if a < 0:
                    continue
                for j in range(m):
                    b = B[t, j]
                    if b < 0:
                        continue
                    v = (a + b) % q1
                    o = out[i, j]
                    if o < 0:
                        out[i, j] = v
                    else:
                        z = zech[(v - o) % q1]
                        out[i, j] = -1 if z < 0 else (o + z) % q1
        return out


# ---------------------------------------------------------------------------
# dispatch


def rref_prime(A: np.ndarray, p: int, full: bool = True) -> tuple[int, np.ndarray]:
    """Reduce ``A`` (int64 residues, modified in place) mod p.

    ``full=False`` stops at row echelon form, which is all a rank needs.
    """
    if USE_NUMBA:
        return _rref_prime_nb(A, np.int64(p), full)
    return rref_prime_np(A, p, full)


def rref_log(L: np.ndarray, q1: int, half: int, zech: np.ndarray, full: bool = True) -> tuple[int, np.ndarray]:
    """Reduce ``L`` (Zech-log entries, modified in place); see :func:`rref_prime`."""
    if USE_NUMBA:
        return _rref_log_nb(L, np.int64(q1), np.int64(half), zech, full)
    return rref_log_np(L, q1, half, zech, full)


def matmul_log(A: np.ndarray, B: np.ndarray, q1: int, zech: np.ndarray) -> np.ndarray:
    if USE_NUMBA:
        return _matmul_log_nb(A, B, np.int64(q1), zech)
    return matmul_log_np(A, B, q1, zech)


def matmul_prime(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    k = A.shape[1]
    if (p - 1) ** 2 * max(k, 1) < (1 << 52):
        # exact in double precision
        return np.rint(A.astype(np.float64) @ B.astype(np.float64)).astype(np.int64) % p
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    step = max(1, (1 << 62) // ((p - 1) ** 2 + 1))
    for s in range(0, k, step):
        out = (out + A[:, s : s + step] @ B[s : s + step]) % p
    return out
