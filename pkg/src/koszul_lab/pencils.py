"""The five g^1_4 pencils on a four-nodal plane sextic of genus 6.

Four pencils are cut by the lines through a node, one by the conics through
all four nodes.  A divisor is the residual intersection of one member with
the sextic; it is used only when it splits into four distinct rational
points.  Its special subspace is H^0(K - Z), the linear forms on P^5
vanishing at the canonical images of the four points.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import comb

import numpy as np

from . import exactla as la
from .errors import ConicSpaceDegenerate, RetriesExhausted, SpecialtyViolation
from .field import Field, poly_add, poly_mul, poly_scale, poly_sub, poly_trim, univariate_roots
from .gradedring import eval_matrix, normalize_point, sym_basis
from .models import NodalSexticModel

DIVISOR_DEGREE = 4
DEFAULT_PARAM_BUDGET = 4000


def brill_noether_numbers(r: int, d: int, g: int | None = None, k: int | None = None) -> tuple[int, int]:
    """rho(r, d, g) and the number binom(2k, k)/(k+1) of minimal pencils at genus 2k.

    Either g or k may be given; the other is filled in from g = 2k.
    """
    if g is None and k is None:
        raise ValueError("give g or k")
    if g is None:
        g = 2 * k
    if k is None:
        k = g // 2
    rho = g - (r + 1) * (r - d + g)
    return rho, comb(2 * k, k) // (k + 1)


@dataclass(frozen=True, eq=False)
class Pencil:
    id: str
    kind: str  # "node_projection" or "conic_family"
    data: np.ndarray  # the node (3,), or a basis of the conics through the nodes (2 x 6)
    node_index: int | None = None

    def to_json(self, F: Field) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "node_index": self.node_index,
            "data": [[F.to_json(int(x)) for x in row] for row in la.as_mat(self.data)],
        }


@dataclass(frozen=True, eq=False)
class Divisor:
    points: tuple  # ((x, y, z), multiplicity) pairs, points normalized
    pencil_id: str
    t: int

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.points)

    def point_array(self) -> np.ndarray:
        return np.array([p for p, _ in self.points], dtype=np.int64)

    def point_set(self) -> set:
        return {p for p, _ in self.points}

    def to_json(self, F: Field) -> dict:
        return {
            "pencil": self.pencil_id,
            "t": F.to_json(self.t),
            "degree": self.degree,
            "points": [{"point": [F.to_json(x) for x in p], "multiplicity": m} for p, m in self.points],
        }


@dataclass(frozen=True, eq=False)
class SpecialSubspace:
    subspace: la.Subspace
    pencil_id: str
    t: int
    meta: dict = dc_field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.subspace.dim

    def to_json(self, F: Field) -> dict:
        return {
            "pencil": self.pencil_id,
            "t": F.to_json(self.t),
            "dim": self.dim,
            "basis": [[F.to_json(int(x)) for x in row] for row in self.subspace.basis],
        }


# ---------------------------------------------------------------------------
# polynomial bookkeeping


def compose_form(F: Field, coeffs, d: int, coords: list[list[int]]) -> list[int]:
    """f(X_0(s), X_1(s), X_2(s)) for a degree-d ternary form and polynomial coordinates."""
    exps = sym_basis(3, d).exponents
    powers = []
    for X in coords:
        pw = [[1]]
        for _ in range(d):
            pw.append(poly_mul(F, pw[-1], X))
        powers.append(pw)
    out: list[int] = []
    coeffs = np.asarray(coeffs, dtype=np.int64)
    for a in np.flatnonzero(coeffs):
        e = exps[a]
        term = poly_mul(F, poly_mul(F, powers[0][e[0]], powers[1][e[1]]), powers[2][e[2]])
        out = poly_add(F, out, poly_scale(F, term, int(coeffs[a])))
    return poly_trim(out)


def _eval_coords(F: Field, coords: list[list[int]], s: int) -> np.ndarray:
    from .field import poly_eval

    return np.array([poly_eval(F, X, s) for X in coords], dtype=np.int64)


def _key(F: Field, pt) -> tuple:
    return tuple(int(x) for x in normalize_point(F, pt))


# ---------------------------------------------------------------------------


def conic_space(F: Field, nodes) -> la.Subspace:
    return la.kernel_basis(F, eval_matrix(F, la.as_mat(nodes, 3), 2))


def enumerate_pencils(model: NodalSexticModel) -> list[Pencil]:
    F = model.field
    out = [
        Pencil(f"node{i + 1}", "node_projection", np.asarray(nd, dtype=np.int64), i)
        for i, nd in enumerate(model.nodes)
    ]
    C = conic_space(F, model.nodes)
    if C.dim != 2:
        raise ConicSpaceDegenerate(f"conics through the nodes form a space of dim {C.dim}")
    out.append(Pencil("conics", "conic_family", C.basis))
    return out


def _line_frame(F: Field, node: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Two points a, b completing the node to a basis of F^3."""
    E = la.identity(3)
    for i in range(3):
        for j in range(i + 1, 3):
            if la.rank(F, np.vstack([node, E[i], E[j]])) == 3:
                return E[i], E[j]
    raise ValueError("zero node")


def _residual_line(model: NodalSexticModel, pencil: Pencil, t: int):
    F = model.field
    n = pencil.data
    a, b = _line_frame(F, n)
    m = F.vadd(a, F.vmul(b, t))
    coords = [[int(m[i]), int(n[i])] for i in range(3)]
    poly = compose_form(F, model.f, 6, coords)
    # the node is a double point at s = infinity, so deg <= 4
    if len(poly) - 1 != DIVISOR_DEGREE:
        return None
    roots = univariate_roots(F, poly)
    if len(roots) != DIVISOR_DEGREE or any(mu != 1 for _, mu in roots):
        return None
    pts = [_key(F, _eval_coords(F, coords, s)) for s, _ in roots]
    return pts


def _residual_conic(model: NodalSexticModel, pencil: Pencil, t: int):
    F = model.field
    C1, C2 = pencil.data
    Q = F.vadd(C1, F.vmul(C2, t))
    H = _conic_hessian(F, Q)
    if la.det(F, H) == 0:
        return None
    P0 = np.asarray(model.nodes[0], dtype=np.int64)
    grad = la.matvec(F, H, P0)  # gradient of Q at P0
    if P0.tolist() != [1, 0, 0]:
        raise ValueError("conic parametrization expects the first node at (1:0:0)")
    # D(s) = D0 + s D1 runs over the line x = 0, which misses P0; D1 is not a node
    D0 = np.array([0, 1, F.from_int(3)], dtype=np.int64)
    D1 = np.array([0, 1, F.from_int(2)], dtype=np.int64)
    D = [poly_trim([int(D0[i]), int(D1[i])]) for i in range(3)]
    QD = compose_form(F, Q, 2, D)
    lin = poly_trim([F.dot(grad, D0), F.dot(grad, D1)])
    coords = [poly_sub(F, poly_scale(F, QD, int(P0[i])), poly_mul(F, lin, D[i])) for i in range(3)]
    poly = compose_form(F, model.f, 6, coords)
    if len(poly) - 1 != 12:
        return None
    node_keys = {_key(F, nd) for nd in model.nodes}
    node_mult = {k: 0 for k in node_keys}
    residual = []
    for s, mu in univariate_roots(F, poly):
        X = _eval_coords(F, coords, s)
        if not np.any(X):
            return None
        k = _key(F, X)
        if k in node_keys:
            node_mult[k] += mu
        elif mu == 1:
            residual.append(k)
        else:
            return None
    if any(v != 2 for v in node_mult.values()) or len(residual) != DIVISOR_DEGREE:
        return None
    if len(set(residual)) != DIVISOR_DEGREE:
        return None
    return residual


def _conic_hessian(F: Field, Q) -> np.ndarray:
    """Symmetric matrix H with Q(x) = x^T H x / 2."""
    H = la.zeros(3, 3)
    for a, e in enumerate(sym_basis(3, 2).exponents):
        c = int(Q[a])
        idx = [i for i in range(3) for _ in range(e[i])]
        i, j = idx
        if i == j:
            H[i, i] = F.add(H[i, i], F.add(c, c))
        else:
            H[i, j] = F.add(H[i, j], c)
            H[j, i] = F.add(H[j, i], c)
    return H


def residual_points(model: NodalSexticModel, pencil: Pencil, t: int):
    """The four residual points of member t, or None if they are not four distinct rational points."""
    if pencil.kind == "node_projection":
        pts = _residual_line(model, pencil, t)
    else:
        pts = _residual_conic(model, pencil, t)
    if pts is None or len(set(pts)) != DIVISOR_DEGREE:
        return None
    if any(model.is_node(np.array(p)) for p in pts):
        return None
    return sorted(pts)


def divisor_at(
    model: NodalSexticModel,
    pencil: Pencil,
    t: int | None = None,
    rng: np.random.Generator | None = None,
    exclude=(),
    budget: int = DEFAULT_PARAM_BUDGET,
) -> Divisor:
    """Split divisor of the pencil at parameter t, or at the first split parameter drawn from rng."""
    F = model.field
    if t is not None:
        candidates = [int(t)]
    else:
        if rng is None:
            raise ValueError("need t or rng")
        if F.q <= budget:
            candidates = [int(x) for x in rng.permutation(F.q)]
        else:
            candidates = [int(x) for x in rng.integers(0, F.q, size=budget)]
    skip = set(int(x) for x in exclude)
    for cand in candidates:
        if cand in skip:
            continue
        skip.add(cand)
        pts = residual_points(model, pencil, cand)
        if pts is not None:
            return Divisor(tuple((p, 1) for p in pts), pencil.id, cand)
    raise RetriesExhausted(f"no split member of pencil {pencil.id} over F_{F.q}")


def sample_divisors(model: NodalSexticModel, pencil: Pencil, count: int, rng: np.random.Generator) -> list[Divisor]:
    """``count`` split divisors at distinct parameters, in draw order."""
    out: list[Divisor] = []
    F = model.field
    order = [int(x) for x in rng.permutation(F.q)] if F.q <= DEFAULT_PARAM_BUDGET else None
    used: set[int] = set()
    tries = 0
    while len(out) < count:
        if order is not None:
            if not order:
                raise RetriesExhausted(f"pencil {pencil.id} has fewer than {count} split members over F_{F.q}")
            t = order.pop()
        else:
            tries += 1
            if tries > DEFAULT_PARAM_BUDGET:
                raise RetriesExhausted(f"pencil {pencil.id}: parameter budget exhausted over F_{F.q}")
            t = int(rng.integers(0, F.q))
        if t in used:
            continue
        used.add(t)
        pts = residual_points(model, pencil, t)
        if pts is not None:
            out.append(Divisor(tuple((p, 1) for p in pts), pencil.id, t))
    return out


def special_subspace(model: NodalSexticModel, divisor: Divisor) -> SpecialSubspace:
    """Linear forms on P^5 vanishing at the canonical images of the divisor."""
    F = model.field
    imgs = model.canonical_image(divisor.point_array())
    W = la.kernel_basis(F, imgs)
    if W.dim != 3:
        raise SpecialtyViolation(f"H^0(K - Z) has dim {W.dim}, expected 3")
    return SpecialSubspace(W, divisor.pencil_id, divisor.t)


def random_points_subspace_dim(model: NodalSexticModel, plane_points) -> int:
    """dim of linear forms vanishing at the canonical images of arbitrary curve points."""
    imgs = model.canonical_image(plane_points)
    return la.kernel_basis(model.field, imgs).dim
