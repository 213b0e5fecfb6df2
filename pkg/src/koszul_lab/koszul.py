"""Koszul complexes, Koszul cohomology and graded Betti tables.

The differential on wedge^p W (x) M_q is

    d(w_{i1} ^ ... ^ w_{ip} (x) m) = sum_j (-1)^j  (... w_{ij} omitted ...) (x) w_{ij} m

with j counted from 0.  Matrices act on column vectors: rows index the target
basis wedge^{p-1} W (x) M_{q+1}, columns the source, both ordered as
(wedge tuple, ring basis element) with the ring index varying fastest.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import combinations

import numpy as np

from . import exactla as la
from .errors import KoszulLabError
from .field import Field
from .gradedring import GradedRing


@lru_cache(maxsize=None)
def wedge_basis(dim_w: int, p: int) -> tuple[tuple[int, ...], ...]:
    """Strictly increasing p-tuples of range(dim_w), lexicographic."""
    if p < 0 or p > dim_w:
        return ()
    return tuple(combinations(range(dim_w), p))


@lru_cache(maxsize=None)
def _wedge_index(dim_w: int, p: int) -> dict:
    return {t: i for i, t in enumerate(wedge_basis(dim_w, p))}


def full_space(F: Field, n: int) -> la.Subspace:
    return la.Subspace(F, n, la.identity(n))


def koszul_differential(ring: GradedRing, W: la.Subspace, p: int, q: int) -> np.ndarray:
    """d: wedge^p W (x) M_q  ->  wedge^{p-1} W (x) M_{q+1}."""
    F = ring.field
    w = W.dim
    src = wedge_basis(w, p)
    dst = wedge_basis(w, p - 1)
    dq = ring.dim(q) if q >= 0 else 0
    dq1 = ring.dim(q + 1) if q + 1 >= 0 else 0
    out = la.zeros(len(dst) * dq1, len(src) * dq)
    if not src or not dst or dq == 0 or dq1 == 0:
        return out
    mults = [ring.mult_by(q, W.basis[k]) for k in range(w)]
    neg = [F.vneg(M) for M in mults]
    idx = _wedge_index(w, p - 1)
    for a, tup in enumerate(src):
        for j, k in enumerate(tup):
            b = idx[tup[:j] + tup[j + 1 :]]
            block = mults[k] if j % 2 == 0 else neg[k]
            out[b * dq1 : (b + 1) * dq1, a * dq : (a + 1) * dq] = block
    return out


@dataclass(frozen=True, eq=False)
class KoszulCell:
    p: int
    q: int
    W: la.Subspace
    delta_in: np.ndarray  # wedge^{p+1} W (x) M_{q-1} -> wedge^p W (x) M_q
    delta_out: np.ndarray  # wedge^p W (x) M_q -> wedge^{p-1} W (x) M_{q+1}


class ComplexError(KoszulLabError):
    pass


def koszul_cell(ring: GradedRing, W: la.Subspace, p: int, q: int) -> KoszulCell:
    d_in = koszul_differential(ring, W, p + 1, q - 1)
    d_out = koszul_differential(ring, W, p, q)
    if d_in.size and d_out.size and not la.is_zero(la.matmul(ring.field, d_out, d_in)):
        raise ComplexError(f"d o d != 0 at (p, q) = ({p}, {q})")
    return KoszulCell(p, q, W, d_in, d_out)


@dataclass(frozen=True, eq=False)
class SyzygyClassSpace:
    """A subspace of K_{p,q}, held through cocycle representatives."""

    p: int
    q: int
    cocycles: la.Subspace
    coboundaries: la.Subspace
    representatives: np.ndarray  # rows, in the V-complex coordinates
    meta: dict = dc_field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.representatives.shape[0]


def _greedy_complement(F: Field, base: np.ndarray, candidates: np.ndarray) -> np.ndarray:
    """Rows of ``candidates`` chosen greedily to be independent modulo ``base``."""
    if candidates.shape[0] == 0:
        return candidates
    nb = base.shape[0]
    stacked = np.vstack([base, candidates]) if nb else candidates
    # pivot columns of the transpose = greedily independent rows, in order
    _, _, piv = la.echelon(F, stacked.T, reduced=False)
    chosen = [c - nb for c in piv if c >= nb]
    return candidates[chosen]


def koszul_cohomology(ring: GradedRing, W: la.Subspace | None, p: int, q: int) -> tuple[int, SyzygyClassSpace]:
    """dim K_{p,q}(M; W) and a cocycle-representative basis of it."""
    F = ring.field
    if W is None:
        W = full_space(F, ring.n)
    cell = koszul_cell(ring, W, p, q)
    ncols = cell.delta_out.shape[1]
    cocycles = la.kernel_basis(F, cell.delta_out) if cell.delta_out.shape[0] else la.Subspace(F, ncols, la.identity(ncols))
    if cell.delta_in.size:
        cobound = la.Subspace(F, ncols, cell.delta_in.T)
    else:
        cobound = la.Subspace(F, ncols, la.zeros(0, ncols))
    reps = _greedy_complement(F, cobound.basis, cocycles.basis)
    dim = cocycles.dim - cobound.dim
    assert reps.shape[0] == dim
    return dim, SyzygyClassSpace(p, q, cocycles, cobound, reps)


def koszul_dim(ring: GradedRing, p: int, q: int, W: la.Subspace | None = None) -> int:
    """dim K_{p,q} computed from ranks only."""
    F = ring.field
    if W is None:
        W = full_space(F, ring.n)
    cell = koszul_cell(ring, W, p, q)
    ncols = cell.delta_out.shape[1]
    if ncols == 0:
        return 0
    r_out = la.rank(F, cell.delta_out) if cell.delta_out.size else 0
    r_in = la.rank(F, cell.delta_in) if cell.delta_in.size else 0
    return ncols - r_out - r_in


def wedge_inclusion(F: Field, W: la.Subspace, p: int) -> np.ndarray:
    """Matrix of wedge^p of the inclusion W -> V (columns = images of W-tuples)."""
    n = W.ambient_dim
    vt = wedge_basis(n, p)
    wt = wedge_basis(W.dim, p)
    out = la.zeros(len(vt), len(wt))
    B = W.basis
    for a, I in enumerate(wt):
        rows = B[list(I)]
        for b, J in enumerate(vt):
            out[b, a] = la.det(F, rows[:, list(J)]) if p else 1
    return out


def include_cochains(F: Field, W: la.Subspace, p: int, dim_m: int, vectors: np.ndarray) -> np.ndarray:
    """Push rows of wedge^p W (x) M_q coordinates into wedge^p V (x) M_q."""
    incl = wedge_inclusion(F, W, p)
    if vectors.shape[0] == 0:
        return la.zeros(0, incl.shape[0] * dim_m)
    nw = incl.shape[1]
    out = []
    for v in vectors:
        blocks = v.reshape(nw, dim_m)
        out.append(la.matmul(F, incl, blocks).ravel())
    return np.array(out, dtype=np.int64)


def subspace_cohomology_image(
    ring: GradedRing,
    W: la.Subspace,
    p: int,
    q: int,
    full: SyzygyClassSpace | None = None,
) -> SyzygyClassSpace:
    """Image of K_{p,q}(M; W) -> K_{p,q}(M; V)."""
    F = ring.field
    if full is None:
        _, full = koszul_cohomology(ring, None, p, q)
    if W.dim < p:
        raise ValueError("subspace too small for this wedge degree")
    cell = koszul_cell(ring, W, p, q)
    ncols = cell.delta_out.shape[1]
    zw = la.kernel_basis(F, cell.delta_out).basis if cell.delta_out.shape[0] else la.identity(ncols)
    included = include_cochains(F, W, p, ring.dim(q), zw)
    reps = _greedy_complement(F, full.coboundaries.basis, included)
    return SyzygyClassSpace(
        p,
        q,
        full.cocycles,
        full.coboundaries,
        reps,
        {"subspace_dim": W.dim, "w_cocycles": int(zw.shape[0])},
    )


def class_span_dim(F: Field, spaces, coboundaries: la.Subspace) -> int:
    """Dimension of the sum of represented subspaces inside cohomology."""
    reps = [s.representatives for s in spaces if s.representatives.shape[0]]
    if not reps:
        return 0
    return la.quotient_rank(F, np.vstack(reps), coboundaries.basis, coboundaries.dim)


# ---------------------------------------------------------------------------


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("KOSZUL_LAB_THREADS", "1")))
    except ValueError:
        return 1


@dataclass
class BettiTable:
    grid: dict  # (p, q) -> int
    p_range: tuple
    q_range: tuple
    meta: dict = dc_field(default_factory=dict)

    def __getitem__(self, key) -> int:
        return self.grid[key]

    def row(self, q: int) -> list[int]:
        return [self.grid[(p, q)] for p in self.p_range]

    def to_json(self) -> dict:
        return {
            "p_range": list(self.p_range),
            "q_range": list(self.q_range),
            "rows": {str(q): self.row(q) for q in self.q_range},
            "meta": self.meta,
        }

    @classmethod
    def from_json(cls, d: dict) -> "BettiTable":
        pr = tuple(d["p_range"])
        qr = tuple(d["q_range"])
        grid = {(p, int(q)): v for q, row in d["rows"].items() for p, v in zip(pr, row)}
        return cls(grid, pr, qr, d.get("meta", {}))

    def to_text(self) -> str:
        width = max(3, max(len(str(v)) for v in self.grid.values()) + 1)
        head = "     " + "".join(f"{p:>{width}}" for p in self.p_range)
        lines = [head, "-" * len(head)]
        for q in self.q_range:
            cells = "".join(f"{(self.grid[(p, q)] or '.'):>{width}}" for p in self.p_range)
            lines.append(f"{q:>3}: {cells}")
        return "\n".join(lines)


def betti_table(ring: GradedRing, p_range=None, q_range=(0, 1, 2), W: la.Subspace | None = None) -> BettiTable:
    """Grid of dim K_{p,q}; cells run in a thread pool of KOSZUL_LAB_THREADS."""
    if p_range is None:
        p_range = range(0, ring.n + 1)
    p_range = tuple(p_range)
    q_range = tuple(q_range)
    for q in q_range:
        for d in (q - 1, q, q + 1):
            if d >= 0:
                ring.piece(d)
    cells = [(p, q) for q in q_range for p in p_range]
    nthreads = _threads()
    if nthreads > 1:
        with ThreadPoolExecutor(max_workers=nthreads) as ex:
            dims = list(ex.map(lambda pq: koszul_dim(ring, pq[0], pq[1], W), cells))
    else:
        dims = [koszul_dim(ring, p, q, W) for p, q in cells]
    return BettiTable(dict(zip(cells, dims)), p_range, q_range, {"rep": ring.rep})
