import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from koszul_lab import exactla as la
from koszul_lab.errors import AmbientMismatch, NotInSpan
from koszul_lab.field import Field, get_field


def _minor_rank(F, A):
    """Largest k with a nonzero k x k minor; independent of row reduction."""
    A = np.asarray(A)
    r, c = A.shape
    for k in range(min(r, c), 0, -1):
        for rows in itertools.combinations(range(r), k):
            for cols in itertools.combinations(range(c), k):
                if _leibniz_det(F, A[np.ix_(rows, cols)]):
                    return k
    return 0


def _leibniz_det(F, M):
    n = M.shape[0]
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = 1
        for i in range(n):
            term = F.mul(term, int(M[i, perm[i]]))
        total = F.sub(total, term) if inv % 2 else F.add(total, term)
    return total


def test_identity_rank_and_pivots():
    F = get_field(7)
    R, r, piv = la.echelon(F, la.identity(3))
    assert r == 3 and piv == [0, 1, 2]


def test_proportional_rows():
    assert la.rank(get_field(7), [[1, 2], [2, 4]]) == 1


def test_kernel_of_zero_and_identity():
    F = get_field(7)
    assert la.kernel_basis(F, la.zeros(1, 3)).dim == 3
    assert la.kernel_basis(F, la.identity(4)).dim == 0


def test_sum_and_intersection_of_coordinate_spaces():
    F = get_field(11)
    e = la.identity(3)
    assert la.span(F, e[[0]]).sum(la.span(F, e[[1]])).dim == 2
    I = la.span(F, e[[0, 1]]).intersect(la.span(F, e[[1, 2]]))
    assert I == la.span(F, e[[1]])


def test_subspace_ops_dispatch():
    F = get_field(11)
    a = la.span(F, [[1, 0, 0], [0, 1, 0]])
    b = la.span(F, [[1, 1, 0]])
    assert la.subspace_ops(a, b, "contains")
    assert la.subspace_ops(a, np.array([2, 3, 0]), "solve_in_span").tolist() == [2, 3]
    with pytest.raises(NotInSpan):
        a.solve([0, 0, 1])
    with pytest.raises(AmbientMismatch):
        a.sum(la.span(F, [[1, 0]]))


@pytest.mark.parametrize("spec", [(7, 1), (101, 1), (5, 2), (3, 3)])
def test_rank_matches_minor_oracle(spec):
    F = get_field(*spec)
    rng = np.random.default_rng(3)
    for _ in range(40):
        r, c = rng.integers(1, 5, 2)
        A = F.random(rng, (r, c))
        if rng.random() < 0.5 and r > 1:
            A[-1] = F.vadd(A[0], A[-1] if r > 2 else A[0])  # plant a dependency
        assert la.rank(F, A) == _minor_rank(F, A)


def test_inverse_and_det():
    F = get_field(101)
    rng = np.random.default_rng(0)
    A = F.random(rng, (5, 5))
    if la.det(F, A) == 0:
        pytest.skip("singular draw")
    Ai = la.inverse(F, A)
    assert np.array_equal(la.matmul(F, A, Ai), la.identity(5))
    assert la.det(F, A) == _leibniz_det(F, A)


def test_singular_inverse_raises():
    with pytest.raises(NotInSpan):
        la.inverse(get_field(7), [[1, 2], [2, 4]])


def test_matmul_large_prime_matches_object_arithmetic():
    p = 1048573  # near the supported bound: exercises the chunked int path
    F = get_field(p)
    rng = np.random.default_rng(0)
    A = F.random(rng, (4, 40))
    B = F.random(rng, (40, 3))
    ref = (A.astype(object) @ B.astype(object)) % p
    assert np.array_equal(la.matmul(F, A, B), ref.astype(np.int64))


def test_matrix_json_round_trip():
    F = Field(5, 2)
    A = F.random(np.random.default_rng(1), (3, 4))
    assert np.array_equal(la.mat_from_json(F, la.mat_to_json(F, A)), A)


specs = st.sampled_from([(7, 1), (101, 1), (9973, 1), (5, 2), (101, 2)])


@st.composite
def matrices(draw, max_dim=9):
    spec = draw(specs)
    F = get_field(*spec)
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    rng = np.random.default_rng(seed)
    A = F.random(rng, (r, c))
    k = draw(st.integers(0, r))
    if k and r > 1:
        # low-rank perturbation keeps rank deficiency common
        A = la.matmul(F, F.random(rng, (r, k)), F.random(rng, (k, c)))
    return F, A


@given(matrices())
def test_rank_nullity(case):
    F, A = case
    K = la.kernel_basis(F, A)
    assert la.rank(F, A) + K.dim == A.shape[1]
    if K.dim:
        assert la.is_zero(la.matmul(F, A, K.basis.T))


@given(matrices())
def test_rank_of_transpose(case):
    F, A = case
    assert la.rank(F, A) == la.rank(F, A.T)


@given(matrices(), st.integers(0, 2 ** 32 - 1))
def test_subspace_lattice_identities(case, seed):
    F, A = case
    B = F.random(np.random.default_rng(seed), (max(1, A.shape[0] // 2), A.shape[1]))
    U, W = la.span(F, A), la.span(F, B)
    S, I = U + W, U.intersect(W)
    assert S.dim + I.dim == U.dim + W.dim
    assert S.contains(U) and S.contains(W)
    assert U.contains(I) and W.contains(I)


@given(matrices())
def test_echelon_is_idempotent(case):
    F, A = case
    R, r, _ = la.echelon(F, A)
    R2, r2, _ = la.echelon(F, R)
    assert r == r2 and np.array_equal(R, R2)
