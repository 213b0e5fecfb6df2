"""Graded pieces of homogeneous coordinate rings.

A model is a set of homogeneous generators (a presentation) and/or a set of
projective points (an evaluation oracle).  Either way the degree-q piece M_q is
stored as a choice of basis monomials plus a *reduction matrix* sending any
Sym^q coefficient vector to coordinates in that basis:

* presentation: M_q = Sym^q / I_q; basis = monomials outside the pivot
  columns of rref(I_q);
* evaluation: M_q = image of Sym^q in functions on the points; basis =
  pivot monomials of rref(E_q), and the nonzero rref rows already express
  every column of E_q in terms of the pivot columns.

Multiplication by a variable is then just column selection in the reduction
matrix of the next degree.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb

import numpy as np

from . import exactla as la
from .errors import DegreeUnavailable, HilbertMismatch, InsufficientPoints
from .field import Field

MIN_POINT_SLACK = 4


@dataclass(frozen=True)
class MonomialBasis:
    n: int
    q: int
    exponents: np.ndarray  # (size, n), graded lex (x0 > x1 > ...)
    index: dict = dc_field(repr=False, compare=False)

    @property
    def size(self) -> int:
        return self.exponents.shape[0]

    def label(self, i: int, names=None) -> str:
        names = names or [f"x{j}" for j in range(self.n)]
        parts = []
        for j, e in enumerate(self.exponents[i]):
            if e == 1:
                parts.append(names[j])
            elif e > 1:
                parts.append(f"{names[j]}^{e}")
        return "*".join(parts) or "1"


@lru_cache(maxsize=None)
def sym_basis(n: int, q: int) -> MonomialBasis:
    """Monomials of degree q in n variables, graded-lex ordered."""
    if n < 1 or q < 0:
        raise ValueError("need n >= 1 and q >= 0")
    exps = []
    # combinations_with_replacement of variable indices in increasing order gives
    # exactly the lex-descending exponent vectors
    for combo in combinations_with_replacement(range(n), q):
        e = [0] * n
        for j in combo:
            e[j] += 1
        exps.append(e)
    arr = np.array(exps, dtype=np.int64).reshape(-1, n)
    arr.setflags(write=False)
    index = {tuple(int(x) for x in row): i for i, row in enumerate(arr)}
    assert len(index) == comb(n + q - 1, q)
    return MonomialBasis(n, q, arr, index)


@lru_cache(maxsize=None)
def shift_table(n: int, q: int) -> np.ndarray:
    """T[a, j] = index in Sym^{q+1} of x_j times monomial a of Sym^q."""
    src = sym_basis(n, q)
    dst = sym_basis(n, q + 1)
    T = np.empty((src.size, n), dtype=np.int64)
    for a, e in enumerate(src.exponents):
        for j in range(n):
            f = list(e)
            f[j] += 1
            T[a, j] = dst.index[tuple(f)]
    T.setflags(write=False)
    return T


@lru_cache(maxsize=None)
def _parent_table(n: int, q: int) -> tuple[np.ndarray, np.ndarray]:
    """For each monomial of degree q >= 1: (index of monomial / x_j in degree q-1, j)."""
    basis = sym_basis(n, q)
    prev = sym_basis(n, q - 1)
    parents = np.empty(basis.size, dtype=np.int64)
    var = np.empty(basis.size, dtype=np.int64)
    for i, e in enumerate(basis.exponents):
        j = int(np.flatnonzero(e)[0])
        f = list(e)
        f[j] -= 1
        parents[i] = prev.index[tuple(f)]
        var[i] = j
    return parents, var


def monomial_values(F: Field, points: np.ndarray, q: int) -> np.ndarray:
    """Evaluate all degree-q monomials at the given points (rows)."""
    points = la.as_mat(points)
    N, n = points.shape
    vals = np.ones((N, 1), dtype=np.int64)
    for d in range(1, q + 1):
        parents, var = _parent_table(n, d)
        vals = F.vmul(vals[:, parents], points[:, var])
    return vals


def eval_matrix(F: Field, points, q: int) -> np.ndarray:
    """Entry (i, j) is monomial j of degree q evaluated at point i."""
    points = la.as_mat(points)
    if points.shape[0] < 1:
        raise ValueError("need at least one point")
    return monomial_values(F, points, q)


def evaluate_form(F: Field, coeffs, points, q: int) -> np.ndarray:
    """Values of a degree-q form at each point."""
    E = monomial_values(F, la.as_mat(points), q)
    return la.matvec(F, E, coeffs)


def multiply_forms(F: Field, n: int, a, da: int, b, db: int) -> np.ndarray:
    """Product of two forms given by coefficient vectors."""
    A = sym_basis(n, da)
    B = sym_basis(n, db)
    C = sym_basis(n, da + db)
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    out = np.zeros(C.size, dtype=np.int64)
    bnz = np.flatnonzero(b)
    targets_cache = {}
    for i in np.flatnonzero(a):
        if i not in targets_cache:
            targets_cache[i] = np.array(
                [C.index[tuple(A.exponents[i] + B.exponents[j])] for j in bnz], dtype=np.int64
            )
        t = targets_cache[i]
        if t.size:
            out[t] = F.vadd(out[t], F.vmul(b[bnz], a[i]))
    return out


def substitution_matrix(F: Field, n: int, d: int, P) -> np.ndarray:
    """Matrix of f -> f(y P) from Sym^d in n variables to Sym^d in n' variables, P of shape (n' x n)."""
    P = la.as_mat(P)
    n2 = P.shape[0]
    if P.shape[1] != n:
        raise ValueError("parametrization has the wrong number of columns")
    M = np.ones((1, 1), dtype=np.int64)
    for k in range(1, d + 1):
        parents, var = _parent_table(n, k)
        T = shift_table(n2, k - 1)
        new = np.zeros((sym_basis(n2, k).size, parents.size), dtype=np.int64)
        prev = M[:, parents]
        for i in range(n2):
            rows = T[:, i]
            new[rows] = F.vadd(new[rows], F.vmul(prev, P[i, var][None, :]))
        M = new
    return M


def substitute_linear(F: Field, coeffs, n: int, d: int, P) -> np.ndarray:
    """Pull a degree-d form back along x = y P, where P is (n' x n)."""
    S = substitution_matrix(F, n, d, P)
    return la.matvec(F, S, coeffs)


def substitute_forms(F: Field, forms, n: int, P) -> list[np.ndarray]:
    """Pull back (degree, coeffs) pairs along x = y P, sharing one matrix per degree."""
    out = []
    cache = {}
    for d, c in forms:
        if d not in cache:
            cache[d] = substitution_matrix(F, n, d, P)
        out.append(la.matvec(F, cache[d], c))
    return out


def normalize_point(F: Field, v) -> np.ndarray:
    """Scale so that the first nonzero coordinate is 1."""
    v = np.asarray(v, dtype=np.int64).ravel()
    nz = np.flatnonzero(v)
    if nz.size == 0:
        raise ValueError("the zero vector is not a projective point")
    return F.vmul(v, F.inv(int(v[nz[0]])))


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ProjectiveModel:
    """Generators and/or points of a projective variety in P^{n-1}.

    ``generators`` is a tuple of (degree, coefficient vector over sym_basis(n, degree)).
    ``points`` (if present) is an (N x n) array of normalised projective points.
    """

    field: Field
    n: int
    generators: tuple = ()
    points: np.ndarray | None = None
    expected_hilbert: dict = dc_field(default_factory=dict)
    meta: dict = dc_field(default_factory=dict)
    variables: tuple = ()

    def __post_init__(self):
        if not self.variables:
            object.__setattr__(self, "variables", tuple(f"x{i}" for i in range(self.n)))
        gens = []
        for d, c in self.generators:
            c = np.asarray(c, dtype=np.int64).ravel()
            if c.size != sym_basis(self.n, d).size:
                raise ValueError(f"generator of degree {d} has {c.size} coefficients")
            if not np.any(c):
                raise ValueError("zero generator")
            c.setflags(write=False)
            gens.append((int(d), c))
        object.__setattr__(self, "generators", tuple(gens))
        if self.points is not None:
            pts = la.as_mat(self.points, self.n)
            if pts.shape[0] and np.any(~np.any(pts, axis=1)):
                raise ValueError("zero point in evaluation model")
            pts.setflags(write=False)
            object.__setattr__(self, "points", pts)

    @property
    def has_presentation(self) -> bool:
        return bool(self.generators) or self.points is None

    @property
    def has_points(self) -> bool:
        return self.points is not None and self.points.shape[0] > 0

    def with_points(self, points) -> "ProjectiveModel":
        return ProjectiveModel(
            self.field, self.n, self.generators, points, dict(self.expected_hilbert), dict(self.meta), self.variables
        )

    def generators_vanish_at(self, points) -> bool:
        pts = la.as_mat(points, self.n)
        for d, c in self.generators:
            if np.any(evaluate_form(self.field, c, pts, d)):
                return False
        return True


def ideal_piece(model: ProjectiveModel, q: int) -> la.Subspace:
    """(I)_q spanned by all monomial multiples of the generators."""
    F = model.field
    n = model.n
    target = sym_basis(n, q)
    rows = []
    for d, g in model.generators:
        if d > q:
            continue
        mons = sym_basis(n, q - d)
        gnz = np.flatnonzero(g)
        gexp = sym_basis(n, d).exponents[gnz]
        for e in mons.exponents:
            row = np.zeros(target.size, dtype=np.int64)
            idx = [target.index[tuple(x)] for x in (gexp + e)]
            row[idx] = g[gnz]
            rows.append(row)
    if not rows:
        return la.Subspace(F, target.size, la.zeros(0, target.size))
    return la.Subspace(F, target.size, np.array(rows))


@dataclass(frozen=True)
class GradedPiece:
    q: int
    dim: int
    rep: str
    basis_monomials: tuple  # indices into sym_basis(n, q)
    reduction: np.ndarray  # (dim x dim Sym^q)


def _piece_from_ideal(F: Field, n: int, q: int, ideal: la.Subspace) -> GradedPiece:
    s = sym_basis(n, q).size
    piv = list(ideal.pivots)
    pivset = set(piv)
    std = [j for j in range(s) if j not in pivset]
    red = la.zeros(len(std), s)
    red[np.arange(len(std)), std] = 1
    if piv:
        # monomial at pivot k equals -sum_j rref[k, j] x^j over standard j
        red[:, piv] = F.vneg(ideal.basis[:, std].T)
    red.setflags(write=False)
    return GradedPiece(q, len(std), "presentation", tuple(std), red)


def _piece_from_points(F: Field, points: np.ndarray, q: int) -> GradedPiece:
    E = eval_matrix(F, points, q)
    R, r, piv = la.echelon(F, E)
    red = np.ascontiguousarray(R[:r])
    red.setflags(write=False)
    return GradedPiece(q, r, "evaluation", tuple(piv), red)


def quotient_piece(model: ProjectiveModel, q: int, rep: str = "presentation", check: bool = True) -> GradedPiece:
    """Degree-q piece of the coordinate ring in the requested representation."""
    F = model.field
    if q < 0:
        raise DegreeUnavailable("negative degree")
    if q == 0:
        piece = GradedPiece(0, 1, rep, (0,), np.ones((1, 1), dtype=np.int64))
    elif rep == "presentation":
        piece = _piece_from_ideal(F, model.n, q, ideal_piece(model, q))
    elif rep == "evaluation":
        if not model.has_points:
            raise InsufficientPoints("model carries no points")
        need = sym_basis(model.n, q).size + MIN_POINT_SLACK
        if model.points.shape[0] < need:
            raise InsufficientPoints(f"degree {q} needs >= {need} points, have {model.points.shape[0]}")
        piece = _piece_from_points(F, model.points, q)
    else:
        raise ValueError(f"unknown representation {rep!r}")
    expected = model.expected_hilbert.get(q)
    if check and expected is not None and piece.dim != expected:
        raise HilbertMismatch(f"dim M_{q} = {piece.dim}, expected {expected} ({rep})")
    return piece


def mult_map(F: Field, n: int, piece: GradedPiece, next_piece: GradedPiece, variable_index: int) -> np.ndarray:
    """Matrix of multiplication by x_i from M_q to M_{q+1} (columns = images)."""
    T = shift_table(n, piece.q)
    cols = T[list(piece.basis_monomials), variable_index]
    return np.ascontiguousarray(next_piece.reduction[:, cols])


class GradedRing:
    """Lazily built pieces and multiplication maps of one model in one representation.

    Pieces and maps are built at most once; concurrent callers block on a lock
    and then read the finished object.
    """

    def __init__(self, model: ProjectiveModel, rep: str = "presentation", check: bool = True):
        self.model = model
        self.field = model.field
        self.n = model.n
        self.rep = rep
        self.check = check
        self._pieces: dict[int, GradedPiece] = {}
        self._mults: dict[tuple[int, int], np.ndarray] = {}
        self._lock = threading.RLock()

    def piece(self, q: int) -> GradedPiece:
        if q < 0:
            return GradedPiece(q, 0, self.rep, (), la.zeros(0, 0))
        got = self._pieces.get(q)
        if got is not None:
            return got
        with self._lock:
            if q not in self._pieces:
                self._pieces[q] = quotient_piece(self.model, q, self.rep, self.check)
            return self._pieces[q]

    def dim(self, q: int) -> int:
        return self.piece(q).dim

    def mult(self, q: int, i: int) -> np.ndarray:
        """Multiplication by variable i, M_q -> M_{q+1}."""
        key = (q, i)
        got = self._mults.get(key)
        if got is not None:
            return got
        src, dst = self.piece(q), self.piece(q + 1)
        with self._lock:
            if key not in self._mults:
                if q < 0:
                    M = la.zeros(dst.dim, 0)
                else:
                    M = mult_map(self.field, self.n, src, dst, i)
                M.setflags(write=False)
                self._mults[key] = M
            return self._mults[key]

    def mult_by(self, q: int, linear_form) -> np.ndarray:
        """Multiplication by a linear form sum c_i x_i, M_q -> M_{q+1}."""
        F = self.field
        c = np.asarray(linear_form, dtype=np.int64).ravel()
        out = la.zeros(self.dim(q + 1), max(self.dim(q), 0))
        for i in np.flatnonzero(c):
            out = F.vadd(out, F.vmul(self.mult(q, int(i)), c[i]))
        return out
