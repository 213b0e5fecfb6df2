"""Explicit general canonical curves and K3 surfaces over a finite field.

Constructions
-------------
* ``canonical-g4``: complete intersection of a quadric and a cubic in P^3.
* ``canonical-g6-grass``: Gr(2,5) cut by a random P^5 and a random quadric.
* ``canonical-g6-sextic``: a plane sextic with nodes at the four standard
  points, embedded by its adjoint cubics; the quadrics are interpolated from
  sampled points.
* ``canonical-g8-grass``: Gr(2,6) cut by a random P^7.
* ``k3-g6``: Gr(2,5) cut by a random P^6 and a random quadric.

Every random draw is checked against its expected Hilbert function (and, for
sextics, node and smoothness predicates) and redrawn on failure.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from pathlib import Path
from typing import Callable

import numpy as np

from . import exactla as la
from .errors import (
    DegenerateModel,
    FormatVersionMismatch,
    HilbertMismatch,
    InsufficientPoints,
    MalformedFile,
    NotInSpan,
    RankDeficientParametrization,
    RetriesExhausted,
)
from .field import MAX_ORDER, Field, get_field, poly_trim, univariate_roots
from .gradedring import (
    GradedRing,
    ProjectiveModel,
    eval_matrix,
    evaluate_form,
    monomial_values,
    mult_map,
    multiply_forms,
    normalize_point,
    quotient_piece,
    shift_table,
    substitute_forms,
    sym_basis,
)

FORMAT_VERSION = 1
DEFAULT_RETRIES = 32
POINT_SLACK = 10
STALL_LIMIT = 60  # consecutive sections without a new point

CONSTRUCTION_TAGS = {
    "canonical-g4": (4, "ci"),
    "canonical-g6-grass": (6, "grass"),
    "canonical-g6-sextic": (6, "sextic"),
    "canonical-g8-grass": (8, "grass"),
    "k3-g6": (6, "k3"),
}


def _rng(seed: int, *stream: int) -> np.random.Generator:
    return np.random.default_rng([int(seed) & ((1 << 64) - 1), *stream])


def canonical_hilbert(g: int, qmax: int = 3) -> dict[int, int]:
    """h^0(q K) for a canonical curve: 1, g, then (2q-1)(g-1)."""
    out = {0: 1, 1: g}
    for q in range(2, qmax + 1):
        out[q] = (2 * q - 1) * (g - 1)
    return out


def k3_hilbert(g: int, qmax: int = 3) -> dict[int, int]:
    """h^0(q L) = 2 + q^2 (g-1) on a K3 of genus g."""
    out = {0: 1}
    for q in range(1, qmax + 1):
        out[q] = 2 + q * q * (g - 1)
    return out


def random_full_rank(F: Field, rng: np.random.Generator, nrows: int, ncols: int) -> np.ndarray:
    while True:
        P = F.random(rng, (nrows, ncols))
        if la.rank(F, P) == min(nrows, ncols):
            return P


# ---------------------------------------------------------------------------
# Grassmannians


@dataclass(frozen=True)
class GrassmannianModel:
    n: int
    plucker_vars: tuple  # pairs (i, j), i < j
    relations: tuple  # coefficient vectors over Sym^2 of binom(n, 2) variables

    @property
    def num_vars(self) -> int:
        return len(self.plucker_vars)

    def variable_names(self) -> list[str]:
        return [f"p{i}{j}" for i, j in self.plucker_vars]


def plucker_model(F: Field, n: int) -> GrassmannianModel:
    """The binom(n,4) three-term Plucker quadrics of Gr(2, n)."""
    if n < 4:
        raise ValueError("Gr(2, n) needs n >= 4")
    pairs = tuple(combinations(range(n), 2))
    var = {pr: k for k, pr in enumerate(pairs)}
    N = len(pairs)
    basis = sym_basis(N, 2)
    rels = []
    for i, j, k, l in combinations(range(n), 4):
        c = np.zeros(basis.size, dtype=np.int64)
        for (a, b), sign in (((i, j), (k, l)), 1), (((i, k), (j, l)), -1), (((i, l), (j, k)), 1):
            e = [0] * N
            e[var[a]] += 1
            e[var[b]] += 1
            c[basis.index[tuple(e)]] = F.from_int(sign)
        rels.append(c)
    return GrassmannianModel(n, pairs, tuple(rels))


def plucker_point(F: Field, frame) -> np.ndarray:
    """Plucker coordinates (2x2 minors) of a 2 x n frame."""
    frame = la.as_mat(frame)
    n = frame.shape[1]
    u, v = frame
    out = []
    for i, j in combinations(range(n), 2):
        out.append(F.sub(F.mul(int(u[i]), int(v[j])), F.mul(int(u[j]), int(v[i]))))
    return np.array(out, dtype=np.int64)


def sample_plucker_points(F: Field, n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    pts = []
    while len(pts) < count:
        frame = F.random(rng, (2, n))
        if la.rank(F, frame) == 2:
            pts.append(plucker_point(F, frame))
    return np.array(pts, dtype=np.int64)


def restrict_to_linear_section(F: Field, quadrics, parametrization) -> tuple[list[np.ndarray], int]:
    """Pull quadrics back to the linear subspace spanned by the rows of the parametrization.

    Returns the nonzero restricted quadrics and the dimension of their span.
    """
    P = la.as_mat(parametrization)
    if la.rank(F, P) < P.shape[0]:
        raise RankDeficientParametrization("parametrization does not have full row rank")
    N = P.shape[1]
    out = [r for r in substitute_forms(F, [(2, c) for c in quadrics], N, P) if np.any(r)]
    span_dim = la.rank(F, np.array(out)) if out else 0
    return out, span_dim


# ---------------------------------------------------------------------------
# presentation-model generators


def _check_hilbert(model: ProjectiveModel) -> None:
    ring = GradedRing(model, "presentation")
    for q in sorted(model.expected_hilbert):
        ring.piece(q)  # raises HilbertMismatch


def _with_retries(build: Callable[[np.random.Generator, int], ProjectiveModel], seed: int, retries: int):
    last = None
    for attempt in range(retries):
        try:
            return build(_rng(seed, attempt), attempt)
        except DegenerateModel as exc:
            last = exc
    raise RetriesExhausted(f"no generic draw within {retries} attempts (last: {last})")


def _grass_model(F: Field, rng, n_grass: int, section_dim: int, extra_quadric: bool) -> list[np.ndarray]:
    G = plucker_model(F, n_grass)
    P = random_full_rank(F, rng, section_dim, G.num_vars)
    quads, _ = restrict_to_linear_section(F, G.relations, P)
    if extra_quadric:
        quads.append(F.random(rng, sym_basis(section_dim, 2).size))
    return quads


def gen_canonical(genus: int, variant: str, F: Field, seed: int, retries: int = DEFAULT_RETRIES) -> ProjectiveModel:
    """A general canonical curve of genus 4, 6 or 8 in the requested construction."""
    key = (genus, variant)
    if key == (6, "sextic"):
        return gen_canonical_sextic(F, seed, retries)
    if key not in {(4, "ci"), (6, "grass"), (8, "grass")}:
        raise ValueError(f"unsupported construction genus={genus} variant={variant}")

    def build(rng, attempt):
        if genus == 4:
            gens = [(2, F.random(rng, 10)), (3, F.random(rng, 20))]
            meta = {"construction": "complete_intersection_2_3"}
        elif genus == 6:
            gens = [(2, c) for c in _grass_model(F, rng, 5, 6, True)]
            meta = {"construction": "gr25_linear_section_quadric"}
        else:
            gens = [(2, c) for c in _grass_model(F, rng, 6, 8, False)]
            meta = {"construction": "gr26_linear_section"}
        if any(not np.any(c) for _, c in gens):
            raise DegenerateModel("zero generator")
        meta.update({"genus": genus, "variant": variant, "seed": int(seed), "attempt": attempt, "kind": "curve",
                     "dimension": 1, "degree": 2 * genus - 2})
        model = ProjectiveModel(F, genus, tuple(gens), None, canonical_hilbert(genus), meta)
        _check_hilbert(model)
        return model

    return _with_retries(build, seed, retries)


def gen_k3_g6(F: Field, seed: int, retries: int = DEFAULT_RETRIES) -> ProjectiveModel:
    """Degree-10 K3 surface Gr(2,5) n P^6 n Q in P^6."""

    def build(rng, attempt):
        gens = [(2, c) for c in _grass_model(F, rng, 5, 7, True)]
        meta = {"construction": "gr25_linear_section_quadric", "genus": 6, "variant": "k3", "seed": int(seed),
                "attempt": attempt, "kind": "k3", "dimension": 2, "degree": 10}
        model = ProjectiveModel(F, 7, tuple(gens), None, k3_hilbert(6), meta)
        _check_hilbert(model)
        return model

    return _with_retries(build, seed, retries)


def hyperplane_section(model: ProjectiveModel, sub_seed: int, retries: int = DEFAULT_RETRIES) -> ProjectiveModel:
    """Cut a K3 model by a random hyperplane, giving a canonical curve."""
    F = model.field
    n = model.n
    g = int(model.meta.get("genus", n - 1))

    def build(rng, attempt):
        P = random_full_rank(F, rng, n - 1, n)
        gens = []
        for (d, _), r in zip(model.generators, substitute_forms(F, model.generators, n, P)):
            if not np.any(r):
                raise DegenerateModel("generator vanishes on the hyperplane")
            gens.append((d, r))
        meta = {"construction": "k3_hyperplane_section", "genus": g, "variant": "k3-section",
                "seed": int(sub_seed), "attempt": attempt, "kind": "curve", "dimension": 1, "degree": 2 * g - 2,
                "parent": dict(model.meta), "hyperplane": [[F.to_json(int(x)) for x in row] for row in P]}
        out = ProjectiveModel(F, n - 1, tuple(gens), None, canonical_hilbert(g), meta)
        _check_hilbert(out)
        return out

    return _with_retries(build, sub_seed, retries)


# ---------------------------------------------------------------------------
# point sampling on presentation models through zero-dimensional sections


def charpoly(F: Field, M) -> list[int]:
    """Characteristic polynomial det(x I - M) via Hessenberg reduction."""
    H = [[int(x) for x in row] for row in la.as_mat(M)]
    n = len(H)
    for m in range(1, n - 1):
        i = next((r for r in range(m, n) if H[r][m - 1]), None)
        if i is None:
            continue
        if i != m:
            H[i], H[m] = H[m], H[i]
            for row in H:
                row[i], row[m] = row[m], row[i]
        inv = F.inv(H[m][m - 1])
        for r in range(m + 1, n):
            u = F.mul(H[r][m - 1], inv)
            if not u:
                continue
            H[r] = [F.sub(a, F.mul(u, b)) for a, b in zip(H[r], H[m])]
            for row in H:
                row[m] = F.add(row[m], F.mul(u, row[r]))
    from .field import poly_mul, poly_scale, poly_sub

    polys = [[1]]
    for m in range(1, n + 1):
        pm = poly_mul(F, [F.neg(H[m - 1][m - 1]), 1], polys[m - 1])
        t = 1
        for i in range(1, m):
            t = F.mul(t, H[m - i][m - i - 1])
            coef = F.mul(H[m - i - 1][m - 1], t)
            if coef:
                pm = poly_sub(F, pm, poly_scale(F, polys[m - i - 1], coef))
        polys.append(pm)
    return polys[n]


def _power_of_linear_form(F: Field, n: int, l: np.ndarray, e: int) -> np.ndarray:
    out = np.array([1], dtype=np.int64)
    for d in range(e):
        out = multiply_forms(F, n, out, d, l, 1)
    return out


def sample_section_points(
    model: ProjectiveModel,
    count: int,
    seed: int,
    max_sections: int | None = None,
    existing=None,
) -> np.ndarray:
    """Rational points of a presentation model, found via random linear sections.

    Each attempt cuts the variety by a random linear space of complementary
    dimension, giving a finite set Z of ``degree`` points.  In degrees 3 and 4
    the coordinate ring of Z is the space of functions on Z, so multiplication
    by linear forms is simultaneously diagonal there; rational eigenvalues of
    (mult by l0)^{-1} (mult by l1) single out rational points and the left
    eigenvectors are their evaluation functionals.
    """
    F = model.field
    n = model.n
    codim = int(model.meta.get("dimension", 1))
    degree = int(model.meta["degree"])
    d0 = int(model.meta.get("section_degree", 3))
    n2 = n - codim
    rng = _rng(seed, 0xC0DE)
    if max_sections is None:
        max_sections = 40 * count + 100
    pts = [] if existing is None else [np.asarray(p, dtype=np.int64) for p in existing]
    seen = {tuple(int(x) for x in p) for p in pts}
    stall = 0
    for _ in range(max_sections):
        if len(pts) >= count or stall >= STALL_LIMIT:
            break
        stall += 1
        P = random_full_rank(F, rng, n2, n)
        gens = [(d, r) for (d, _), r in zip(model.generators, substitute_forms(F, model.generators, n, P))
                if np.any(r)]
        sub = ProjectiveModel(F, n2, tuple(gens))
        R3 = quotient_piece(sub, d0, check=False)
        R4 = quotient_piece(sub, d0 + 1, check=False)
        if R3.dim != degree or R4.dim != degree:
            continue
        l0 = F.random_nonzero(rng, n2)
        l1 = F.random(rng, n2)
        mults = [mult_map(F, n2, R3, R4, i) for i in range(n2)]
        A = la.zeros(degree, degree)
        B = la.zeros(degree, degree)
        for i in range(n2):
            A = F.vadd(A, F.vmul(mults[i], l0[i]))
            B = F.vadd(B, F.vmul(mults[i], l1[i]))
        try:
            Ainv = la.inverse(F, A)
        except NotInSpan:
            continue
        chi = charpoly(F, la.matmul(F, Ainv, B))
        roots = [r for r, mult in univariate_roots(F, chi) if mult == 1]
        if not roots:
            continue
        l0cube = _power_of_linear_form(F, n2, l0, d0)
        T = shift_table(n2, d0)
        G = la.zeros(sym_basis(n2, d0 + 1).size, n2)
        for i in range(n2):
            G[T[:, i], i] = l0cube
        coords_of_forms = la.matmul(F, R4.reduction, G)  # (degree x n2)
        for lam in roots:
            Mlam = F.vsub(B, F.vmul(A, lam))
            ker = la.kernel_basis(F, Mlam.T)
            if ker.dim != 1:
                continue
            z = la.matmul(F, ker.basis, coords_of_forms).ravel()
            if not np.any(z):
                continue
            x = la.matmul(F, z.reshape(1, -1), P).ravel()
            if not np.any(x):
                continue
            x = normalize_point(F, x)
            key = tuple(int(v) for v in x)
            if key in seen or not model.generators_vanish_at(x.reshape(1, -1)):
                continue
            seen.add(key)
            pts.append(x)
            stall = 0
    if len(pts) < count:
        raise InsufficientPoints(f"only {len(pts)} of {count} points found over F_{F.q}")
    return np.array(pts[:count], dtype=np.int64) if existing is None else np.array(pts, dtype=np.int64)


def sample_grass_section_points(model: ProjectiveModel, count: int, seed: int = 0) -> np.ndarray:
    """Rational points on a Grassmannian-section model (curve or K3)."""
    return sample_section_points(model, count, seed)


def hasse_weil_bound(q: int, g: int) -> int:
    """Upper bound q + 1 + 2 g sqrt(q) on the number of rational points of a curve."""
    return q + 1 + math.isqrt(4 * g * g * q)


def stable_point_count(F: Field, points: np.ndarray, q: int) -> int:
    return la.rank(F, eval_matrix(F, points, q))


def attach_points(model: ProjectiveModel, seed: int, q_top: int = 3, slack: int = POINT_SLACK) -> ProjectiveModel:
    """Attach enough sampled points to support the evaluation representation up to q_top."""
    F = model.field
    need = sym_basis(model.n, q_top).size + slack
    if int(model.meta.get("dimension", 1)) == 1 and "genus" in model.meta:
        if hasse_weil_bound(F.q, int(model.meta["genus"])) < need:
            raise InsufficientPoints(f"a genus-{model.meta['genus']} curve over F_{F.q} has fewer than {need} points")
    pts = sample_section_points(model, need, seed)
    pts = _stabilize(F, pts, q_top, lambda cur, k: sample_section_points(model, len(cur) + 1, seed + 7919 * (k + 1),
                                                                           existing=cur))
    return model.with_points(pts)


def _stabilize(F: Field, pts: np.ndarray, q_top: int, extend: Callable) -> np.ndarray:
    """Add points until the degree-q_top evaluation rank survives two additions."""
    r = stable_point_count(F, pts, q_top)
    unchanged = 0
    k = 0
    while unchanged < 2:
        pts = extend(pts, k)
        k += 1
        r2 = stable_point_count(F, pts, q_top)
        unchanged = unchanged + 1 if r2 == r else 0
        r = r2
        if k > 200:
            raise InsufficientPoints("evaluation rank does not stabilise")
    return pts


# ---------------------------------------------------------------------------
# nodal plane sextics

STANDARD_NODES = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1))


def derivative_functional(F: Field, d: int, point, k: int) -> np.ndarray:
    """Row r with r . coeffs(f) = (d f / d x_k)(point) for degree-d forms in 3 variables."""
    basis = sym_basis(3, d)
    lower = monomial_values(F, la.as_mat(point), d - 1).ravel()
    idx = sym_basis(3, d - 1).index
    out = np.zeros(basis.size, dtype=np.int64)
    for a, e in enumerate(basis.exponents):
        if e[k] == 0:
            continue
        f = list(e)
        f[k] -= 1
        out[a] = F.mul(F.from_int(int(e[k])), int(lower[idx[tuple(f)]]))
    return out


def hessian_functional(F: Field, d: int, point, a: int, b: int) -> np.ndarray:
    basis = sym_basis(3, d)
    lower = monomial_values(F, la.as_mat(point), d - 2).ravel()
    idx = sym_basis(3, d - 2).index
    out = np.zeros(basis.size, dtype=np.int64)
    for i, e in enumerate(basis.exponents):
        f = list(e)
        c = f[a]
        f[a] -= 1
        c2 = f[b]
        f[b] -= 1
        if c <= 0 or c2 <= 0:
            continue
        out[i] = F.mul(F.from_int(c * c2), int(lower[idx[tuple(f)]]))
    return out


def node_condition_matrix(F: Field, nodes=STANDARD_NODES, d: int = 6) -> np.ndarray:
    rows = []
    for node in nodes:
        for k in range(3):
            rows.append(derivative_functional(F, d, np.array(node), k))
    return np.array(rows, dtype=np.int64)


def _node_hessian_minor(F: Field, f: np.ndarray, node) -> int:
    node = np.asarray(node, dtype=np.int64)
    c = int(np.flatnonzero(node)[0])
    idx = [k for k in range(3) if k != c]
    H = [[F.dot(hessian_functional(F, 6, node, a, b), f) for b in idx] for a in idx]
    return F.sub(F.mul(H[0][0], H[1][1]), F.mul(H[0][1], H[1][0]))


@dataclass(frozen=True, eq=False)
class NodalSexticModel:
    field: Field
    f: np.ndarray  # 28 coefficients over sym_basis(3, 6)
    nodes: np.ndarray  # 4 x 3
    adjoints: np.ndarray  # 6 x 10, cubics through the nodes
    meta: dict = dc_field(default_factory=dict)

    def canonical_image(self, plane_points) -> np.ndarray:
        """Images in P^5 of plane points under the adjoint map."""
        vals = monomial_values(self.field, la.as_mat(plane_points, 3), 3)
        return la.matmul(self.field, vals, self.adjoints.T)

    def value(self, point) -> int:
        return int(evaluate_form(self.field, self.f, la.as_mat(point, 3), 6)[0])

    def gradient(self, point) -> list[int]:
        return [self.field.dot(derivative_functional(self.field, 6, point, k), self.f) for k in range(3)]

    def is_node(self, point) -> bool:
        p = normalize_point(self.field, point)
        return any(np.array_equal(p, normalize_point(self.field, nd)) for nd in self.nodes)

    def to_json(self) -> dict:
        F = self.field
        enc = lambda A: [[F.to_json(int(x)) for x in row] for row in la.as_mat(A)]
        return {"f": [F.to_json(int(x)) for x in self.f], "nodes": enc(self.nodes), "adjoints": enc(self.adjoints),
                "meta": self.meta}

    @classmethod
    def from_json(cls, F: Field, d: dict) -> "NodalSexticModel":
        dec = lambda A: np.array([[F.from_json(x) for x in row] for row in A], dtype=np.int64)
        return cls(F, np.array([F.from_json(x) for x in d["f"]], dtype=np.int64), dec(d["nodes"]),
                   dec(d["adjoints"]), d.get("meta", {}))


def adjoint_cubics(F: Field, nodes=STANDARD_NODES) -> np.ndarray:
    K = la.kernel_basis(F, eval_matrix(F, np.array(nodes, dtype=np.int64), 3))
    return K.basis


def gen_nodal_sextic(F: Field, seed: int, retries: int = DEFAULT_RETRIES) -> NodalSexticModel:
    """Random sextic with ordinary nodes at the four standard points."""
    nodes = np.array(STANDARD_NODES, dtype=np.int64)
    cond = node_condition_matrix(F, nodes)
    if la.rank(F, cond) != 12:
        raise DegenerateModel("node conditions are dependent")
    K = la.kernel_basis(F, cond).basis
    adj = adjoint_cubics(F, nodes)
    if adj.shape[0] != 6:
        raise DegenerateModel("expected six adjoint cubics")

    def build(rng, attempt):
        c = F.random(rng, K.shape[0])
        f = la.matmul(F, c.reshape(1, -1), K).ravel()
        if not np.any(f):
            raise DegenerateModel("zero sextic")
        for nd in nodes:
            if _node_hessian_minor(F, f, nd) == 0:
                raise DegenerateModel("non-ordinary node")
        return NodalSexticModel(F, f, nodes, adj, {"seed": int(seed), "attempt": attempt})

    return _with_retries(build, seed, retries)


def _affine_y_poly(F: Field, f: np.ndarray, x: int) -> list[int]:
    """f(x, y, 1) as a polynomial in y."""
    exps = sym_basis(3, 6).exponents
    out = [0] * 7
    for a in np.flatnonzero(f):
        e = exps[a]
        out[e[1]] = F.add(out[e[1]], F.mul(int(f[a]), F.pow(x, int(e[0]))))
    return poly_trim(out)


def sample_sextic_points(model: NodalSexticModel, rng: np.random.Generator):
    """Yield smooth affine points (x, y, 1) of the sextic, x drawn without repetition."""
    F = model.field
    order = rng.permutation(F.q) if F.q <= (1 << 18) else None
    tries = F.q if order is not None else 1 << 18
    for t in range(tries):
        x = int(order[t]) if order is not None else int(rng.integers(0, F.q))
        poly = _affine_y_poly(F, model.f, x)
        if len(poly) < 2:
            continue
        for y, _ in univariate_roots(F, poly):
            pt = np.array([x, y, 1], dtype=np.int64)
            if model.is_node(pt):
                continue
            if not any(model.gradient(pt)):
                raise DegenerateModel("sextic has a singular point besides the nodes")
            yield pt


def canonical_from_sextic(
    sextic: NodalSexticModel,
    seed: int = 0,
    point_budget: int | None = None,
    q_top: int = 3,
) -> ProjectiveModel:
    """Canonical model of the sextic with interpolated quadrics and attached points."""
    F = sextic.field
    if point_budget is None:
        point_budget = sym_basis(6, q_top).size + POINT_SLACK
    stream = sample_sextic_points(sextic, _rng(seed, 0x5E7))
    seen = set()
    pts: list[np.ndarray] = []
    plane: list[np.ndarray] = []

    def take(k: int) -> None:
        while len(pts) < k:
            try:
                pt = next(stream)
            except StopIteration:
                raise InsufficientPoints(f"sextic has too few points over F_{F.q}") from None
            img = la.as_mat(sextic.canonical_image(pt)).ravel()
            if not np.any(img):
                continue
            img = normalize_point(F, img)
            key = tuple(int(v) for v in img)
            if key in seen:
                continue
            seen.add(key)
            pts.append(img)
            plane.append(pt)

    take(point_budget)
    arr = _stabilize(F, np.array(pts), q_top, lambda cur, k: (take(len(cur) + 1), np.array(pts))[1])
    I2 = la.kernel_basis(F, eval_matrix(F, arr, 2))
    if I2.dim != 6:
        raise HilbertMismatch(f"interpolated {I2.dim} quadrics, expected 6")
    meta = {"construction": "nodal_sextic", "genus": 6, "variant": "sextic", "seed": int(seed), "kind": "curve",
            "dimension": 1, "degree": 10, "sextic": sextic.to_json(),
            "plane_points": [[F.to_json(int(v)) for v in p] for p in plane]}
    model = ProjectiveModel(F, 6, tuple((2, row) for row in I2.basis), arr, canonical_hilbert(6), meta)
    if not model.generators_vanish_at(arr):
        raise HilbertMismatch("interpolated quadrics do not vanish on the sample")
    return model


def gen_canonical_sextic(F: Field, seed: int, retries: int = DEFAULT_RETRIES) -> ProjectiveModel:
    def build(rng, attempt):
        sub = int(rng.integers(0, 1 << 62))
        sextic = gen_nodal_sextic(F, sub, retries)
        model = canonical_from_sextic(sextic, sub)
        _check_hilbert(model)
        ring = GradedRing(model, "evaluation")
        for q in (1, 2, 3):
            ring.piece(q)
        model.meta.update({"seed": int(seed), "attempt": attempt})
        return model

    return _with_retries(build, seed, retries)


def sextic_of(model: ProjectiveModel) -> NodalSexticModel:
    d = model.meta.get("sextic")
    if d is None:
        raise ValueError("model was not built from a nodal sextic")
    return NodalSexticModel.from_json(model.field, d)


# ---------------------------------------------------------------------------
# field escalation


def escalate(p: int, build: Callable[[Field], object], m_start: int = 1, m_max: int = 4):
    """Run ``build`` over F_{p^m} for m = m_start, m_start+1, ... until it succeeds.

    Escalation happens on InsufficientPoints or RetriesExhausted; returns
    (result, field).
    """
    last = None
    for m in range(m_start, m_max + 1):
        if p**m > MAX_ORDER:
            break
        F = get_field(p, m)
        try:
            return build(F), F
        except (InsufficientPoints, RetriesExhausted) as exc:
            last = exc
    raise RetriesExhausted(f"field escalation over p={p} exhausted (last: {last})")


def build_tagged(tag: str, F: Field, seed: int) -> ProjectiveModel:
    if tag not in CONSTRUCTION_TAGS:
        raise ValueError(f"unknown construction tag {tag!r}")
    genus, variant = CONSTRUCTION_TAGS[tag]
    if variant == "k3":
        return gen_k3_g6(F, seed)
    return gen_canonical(genus, variant, F, seed)


# ---------------------------------------------------------------------------
# persistence


def model_to_json(model: ProjectiveModel) -> dict:
    F = model.field
    return {
        "format_version": FORMAT_VERSION,
        "field": F.spec(),
        "n": model.n,
        "variables": list(model.variables),
        "monomial_order": "grlex",
        "generators": [{"degree": d, "coeffs": [F.to_json(int(x)) for x in c]} for d, c in model.generators],
        "points": None if model.points is None else [[F.to_json(int(x)) for x in p] for p in model.points],
        "expected_hilbert": {str(k): v for k, v in sorted(model.expected_hilbert.items())},
        "meta": model.meta,
    }


def model_from_json(d: dict) -> ProjectiveModel:
    if not isinstance(d, dict):
        raise MalformedFile("model file must hold a JSON object")
    if d.get("format_version") != FORMAT_VERSION:
        raise FormatVersionMismatch(f"expected format_version {FORMAT_VERSION}, got {d.get('format_version')}")
    try:
        F = Field.from_spec(d["field"])
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedFile(f"bad field record: {exc}") from exc
    try:
        if d.get("monomial_order", "grlex") != "grlex":
            raise MalformedFile("only grlex monomial order is supported")
        n = int(d["n"])
        gens = tuple((int(g["degree"]), np.array([F.from_json(x) for x in g["coeffs"]], dtype=np.int64))
                     for g in d.get("generators", []))
        pts = d.get("points")
        points = None if pts is None else np.array([[F.from_json(x) for x in p] for p in pts], dtype=np.int64)
        eh = {int(k): int(v) for k, v in d.get("expected_hilbert", {}).items()}
        return ProjectiveModel(F, n, gens, points, eh, dict(d.get("meta", {})), tuple(d.get("variables", ())))
    except MalformedFile:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedFile(f"bad model record: {exc}") from exc


def save_model(path, model: ProjectiveModel) -> None:
    Path(path).write_text(json.dumps(model_to_json(model), sort_keys=True) + "\n")


def load_model(path) -> ProjectiveModel:
    try:
        d = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"{path}: not JSON ({exc})") from exc
    return model_from_json(d)
