"""Exact dense linear algebra over a :class:`~koszul_lab.field.Field`.

Matrices are 2-d ``int64`` numpy arrays of encoded field elements; the field is
passed alongside.  Row reduction picks the lowest-index nonzero row as pivot, so
reduced forms are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from . import _kernels
from .errors import AmbientMismatch, MalformedFile, NotInSpan
from .field import Field


def as_mat(A, ncols: int | None = None) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    if A.ndim == 1:
        if ncols is None:
            A = A.reshape(1, -1)
        else:
            A = A.reshape(-1, ncols)
    return A


def zeros(nrows: int, ncols: int) -> np.ndarray:
    return np.zeros((nrows, ncols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def random_matrix(F: Field, rng: np.random.Generator, nrows: int, ncols: int) -> np.ndarray:
    return F.random(rng, (nrows, ncols))


def _to_log(F: Field, A: np.ndarray) -> np.ndarray:
    return F._log[A]


def _from_log(F: Field, L: np.ndarray) -> np.ndarray:
    return np.where(L < 0, 0, F._exp[np.maximum(L, 0)])


def echelon(F: Field, A, reduced: bool = True) -> tuple[np.ndarray, int, list[int]]:
    """Reduced row echelon form, rank and pivot columns of ``A``."""
    A = as_mat(A)
    if A.size == 0:
        return A.copy(), 0, []
    if F.m == 1:
        R = np.ascontiguousarray(A % F.p)
        rank, piv = _kernels.rref_prime(R, F.p, reduced)
    else:
        L = np.ascontiguousarray(_to_log(F, A))
        rank, piv = _kernels.rref_log(L, F.q - 1, F.half, F._zech, reduced)
        R = _from_log(F, L)
    return R, int(rank), [int(c) for c in piv]


def rank(F: Field, A) -> int:
    A = as_mat(A)
    if A.size == 0:
        return 0
    # fewer rows means fewer elimination sweeps
    if A.shape[0] > A.shape[1]:
        A = A.T
    return echelon(F, A, reduced=False)[1]


def matmul(F: Field, A, B) -> np.ndarray:
    A = as_mat(A)
    B = as_mat(B)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    if A.shape[1] == 0:
        return zeros(A.shape[0], B.shape[1])
    if F.m == 1:
        return _kernels.matmul_prime(np.ascontiguousarray(A), np.ascontiguousarray(B), F.p)
    L = _kernels.matmul_log(
        np.ascontiguousarray(_to_log(F, A)), np.ascontiguousarray(_to_log(F, B)), F.q - 1, F._zech
    )
    return _from_log(F, L)


def matvec(F: Field, A, v) -> np.ndarray:
    return matmul(F, A, np.asarray(v, dtype=np.int64).reshape(-1, 1)).ravel()


def is_zero(A) -> bool:
    return not np.any(np.asarray(A))


def kernel_from_rref(F: Field, R: np.ndarray, rank_: int, pivots: list[int], ncols: int) -> np.ndarray:
    free = [c for c in range(ncols) if c not in set(pivots)]
    K = zeros(len(free), ncols)
    if not free:
        return K
    free_arr = np.array(free)
    K[np.arange(len(free)), free_arr] = 1
    if rank_:
        piv = np.array(pivots)
        # v[piv_k] = -R[k, f]
        K[:, piv] = F.vneg(R[:rank_, free_arr].T)
    return K


def kernel_basis(F: Field, A) -> "Subspace":
    """Subspace of column vectors v with A v = 0."""
    A = as_mat(A)
    ncols = A.shape[1]
    if A.shape[0] == 0:
        return Subspace(F, ncols, identity(ncols), echelonized=True)
    R, r, piv = echelon(F, A)
    K = kernel_from_rref(F, R, r, piv, ncols)
    return Subspace(F, ncols, K)


def inverse(F: Field, A) -> np.ndarray:
    A = as_mat(A)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    R, r, piv = echelon(F, np.hstack([A, identity(n)]))
    if r < n or piv[n - 1] != n - 1:
        raise NotInSpan("matrix is singular")
    return R[:, n:]


def det(F: Field, A) -> int:
    """Determinant by elimination (small matrices; python scalars)."""
    M = [[int(x) for x in row] for row in as_mat(A)]
    n = len(M)
    d = 1
    for c in range(n):
        pr = next((i for i in range(c, n) if M[i][c]), None)
        if pr is None:
            return 0
        if pr != c:
            M[c], M[pr] = M[pr], M[c]
            d = F.neg(d)
        piv = M[c][c]
        d = F.mul(d, piv)
        inv = F.inv(piv)
        for i in range(c + 1, n):
            f = F.mul(M[i][c], inv)
            if f:
                M[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(M[i], M[c])]
    return d


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of F^ambient_dim held as an rref row basis."""

    field: Field
    ambient_dim: int
    basis: np.ndarray
    echelonized: bool = dc_field(default=False, repr=False)
    pivots: tuple[int, ...] = dc_field(default=(), repr=False)

    def __post_init__(self):
        B = as_mat(self.basis, self.ambient_dim) if np.asarray(self.basis).size else zeros(0, self.ambient_dim)
        if B.shape[1] != self.ambient_dim:
            raise AmbientMismatch(f"basis has {B.shape[1]} columns, ambient is {self.ambient_dim}")
        if B.shape[0]:
            R, r, piv = echelon(self.field, B)
            B = R[:r]
        else:
            piv = []
        B.setflags(write=False)
        object.__setattr__(self, "basis", B)
        object.__setattr__(self, "pivots", tuple(piv))
        object.__setattr__(self, "echelonized", True)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def _check(self, other: "Subspace") -> None:
        if self.ambient_dim != other.ambient_dim:
            raise AmbientMismatch(f"ambient {self.ambient_dim} vs {other.ambient_dim}")

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(self.field, self.ambient_dim, np.vstack([self.basis, other.basis]))

    __add__ = sum

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        F = self.field
        if self.dim == 0 or other.dim == 0:
            return Subspace(F, self.ambient_dim, zeros(0, self.ambient_dim))
        # alpha A = beta B  <=>  [A^T | -B^T] (alpha, beta) = 0
        M = np.hstack([self.basis.T, F.vneg(other.basis.T)])
        K = kernel_basis(F, M).basis
        return Subspace(F, self.ambient_dim, matmul(F, K[:, : self.dim], self.basis))

    def contains(self, other: "Subspace") -> bool:
        self._check(other)
        if other.dim == 0:
            return True
        return rank(self.field, np.vstack([self.basis, other.basis])) == self.dim

    def contains_vector(self, v) -> bool:
        try:
            self.solve(v)
        except NotInSpan:
            return False
        return True

    def solve(self, v) -> np.ndarray:
        """Coordinates c with c @ basis == v, or NotInSpan."""
        v = np.asarray(v, dtype=np.int64).ravel()
        if v.size != self.ambient_dim:
            raise AmbientMismatch("vector length differs from ambient dimension")
        coords = v[list(self.pivots)] if self.pivots else np.zeros(0, dtype=np.int64)
        recon = matmul(self.field, coords.reshape(1, -1), self.basis).ravel() if self.dim else np.zeros_like(v)
        if not np.array_equal(recon, v % self.field.p if self.field.m == 1 else v):
            raise NotInSpan("vector is not in the span")
        return coords

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.field == other.field
            and self.ambient_dim == other.ambient_dim
            and np.array_equal(self.basis, other.basis)
        )

    __hash__ = None  # type: ignore[assignment]


def subspace_ops(a: Subspace, b, op: str):
    """Dispatch for sum / intersect / contains / solve_in_span."""
    if op == "sum":
        return a.sum(b)
    if op == "intersect":
        return a.intersect(b)
    if op == "contains":
        return a.contains(b)
    if op == "solve_in_span":
        return a.solve(b)
    raise ValueError(f"unknown subspace operation {op!r}")


def span(F: Field, vectors, ambient_dim: int | None = None) -> Subspace:
    V = as_mat(vectors, ambient_dim)
    return Subspace(F, V.shape[1] if ambient_dim is None else ambient_dim, V)


def quotient_rank(F: Field, vectors, base: np.ndarray, base_rank: int | None = None) -> int:
    """dim of span(vectors) + span(base) modulo span(base)."""
    vectors = as_mat(vectors, base.shape[1] if base.ndim == 2 else None)
    if base_rank is None:
        base_rank = rank(F, base) if base.size else 0
    if vectors.size == 0:
        return 0
    stacked = np.vstack([base, vectors]) if base.size else vectors
    return rank(F, stacked) - base_rank


def mat_to_json(F: Field, A) -> dict:
    A = as_mat(A)
    return {
        "nrows": int(A.shape[0]),
        "ncols": int(A.shape[1]),
        "entries": [F.to_json(int(x)) for x in A.ravel()],
    }


def mat_from_json(F: Field, d: dict) -> np.ndarray:
    try:
        nr, nc = int(d["nrows"]), int(d["ncols"])
        entries = [F.from_json(x) for x in d["entries"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedFile(f"bad matrix record: {exc}") from exc
    if len(entries) != nr * nc:
        raise MalformedFile("matrix entry count does not match its shape")
    return np.array(entries, dtype=np.int64).reshape(nr, nc)
