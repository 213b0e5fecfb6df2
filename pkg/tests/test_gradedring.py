import numpy as np
import pytest

from koszul_lab import exactla as la
from koszul_lab.errors import HilbertMismatch, InsufficientPoints
from koszul_lab.field import get_field
from koszul_lab.gradedring import (
    GradedRing,
    ProjectiveModel,
    eval_matrix,
    evaluate_form,
    ideal_piece,
    multiply_forms,
    quotient_piece,
    substitute_linear,
    sym_basis,
)


def test_sym_basis_small_cases():
    b = sym_basis(2, 3)
    assert [b.label(i, "xy") for i in range(b.size)] == ["x^3", "x^2*y", "x*y^2", "y^3"]
    assert sym_basis(6, 2).size == 21
    assert sym_basis(8, 2).size == 36


def test_ideal_piece_below_generator_degree(g4):
    assert ideal_piece(g4, 1).dim == 0


def test_degree_zero_piece_is_one_dimensional(g6):
    assert quotient_piece(g6, 0).dim == 1


def test_mult_from_degree_zero_is_coordinate_injection(g6):
    R = GradedRing(g6)
    for i in range(6):
        M = R.mult(0, i)
        e = np.zeros(6, dtype=np.int64)
        e[i] = 1
        assert M.shape == (6, 1) and M[:, 0].tolist() == e.tolist()


def test_eval_matrix_single_point():
    F = get_field(7)
    assert eval_matrix(F, np.array([[2, 3, 5]]), 1).tolist() == [[2, 3, 5]]


def test_conic_points_impose_five_conditions():
    # points (s^2 : s t : t^2) on x z - y^2
    F = get_field(31)
    pts = np.array([[s * s % 31, s, 1] for s in range(10)])
    E = eval_matrix(F, pts, 2)
    assert la.rank(F, E) == 5
    K = la.kernel_basis(F, E)
    b = sym_basis(3, 2)
    xz_minus_y2 = np.zeros(6, dtype=np.int64)
    xz_minus_y2[b.index[(1, 0, 1)]] = 1
    xz_minus_y2[b.index[(0, 2, 0)]] = F.neg(1)
    assert K.dim == 1 and K.contains_vector(xz_minus_y2)


def test_genus_four_quadric_is_the_kernel(g4):
    F = g4.field
    R = GradedRing(g4)
    # Sym^2 V -> M_2 through products x_i x_j
    piece2 = R.piece(2)
    sym2 = sym_basis(4, 2)
    assert la.kernel_basis(F, piece2.reduction).dim == 1
    assert la.rank(F, piece2.reduction) == 9 == sym2.size - 1
    quad = [c for d, c in g4.generators if d == 2][0]
    assert la.is_zero(la.matvec(F, piece2.reduction, quad))


def test_hilbert_function_of_genus_six(g6):
    R = GradedRing(g6)
    assert [R.dim(q) for q in range(4)] == [1, 6, 15, 25]


def test_presentation_and_evaluation_agree(g6_sextic):
    P = GradedRing(g6_sextic, "presentation")
    E = GradedRing(g6_sextic, "evaluation")
    assert [P.dim(q) for q in range(4)] == [E.dim(q) for q in range(4)] == [1, 6, 15, 25]


def test_interpolated_quadrics_match_eval_kernel(g6_sextic):
    F = g6_sextic.field
    K = la.kernel_basis(F, eval_matrix(F, g6_sextic.points, 2))
    assert K.dim == 6
    assert K == ideal_piece(g6_sextic, 2)


def test_hilbert_mismatch_is_detected(g6):
    wrong = ProjectiveModel(g6.field, g6.n, g6.generators, None, {2: 16})
    with pytest.raises(HilbertMismatch):
        GradedRing(wrong).piece(2)


def test_too_few_points(g6_sextic):
    thin = g6_sextic.with_points(g6_sextic.points[:30])
    with pytest.raises(InsufficientPoints):
        quotient_piece(thin, 3, "evaluation")


@pytest.mark.parametrize("spec", [(101, 1), (7, 2)])
def test_products_and_substitution_evaluate_correctly(spec):
    F = get_field(*spec)
    rng = np.random.default_rng(4)
    n = 4
    a = F.random(rng, sym_basis(n, 2).size)
    b = F.random(rng, sym_basis(n, 3).size)
    pts = F.random(rng, (6, n))
    ab = multiply_forms(F, n, a, 2, b, 3)
    assert np.array_equal(evaluate_form(F, ab, pts, 5), F.vmul(evaluate_form(F, a, pts, 2), evaluate_form(F, b, pts, 3)))
    P = F.random(rng, (3, n))
    pulled = substitute_linear(F, b, n, 3, P)
    ys = F.random(rng, (6, 3))
    assert np.array_equal(evaluate_form(F, pulled, ys, 3), evaluate_form(F, b, la.matmul(F, ys, P), 3))


def test_identity_substitution_is_trivial(g6):
    F = g6.field
    for d, c in g6.generators:
        assert np.array_equal(substitute_linear(F, c, 6, d, la.identity(6)), c)
