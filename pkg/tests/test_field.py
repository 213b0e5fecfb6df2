import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from koszul_lab.errors import DivisionByZero, SpecMismatch
from koszul_lab.field import (
    Field,
    field_arith,
    find_irreducible,
    get_field,
    is_prime,
    poly_divmod,
    poly_eval,
    poly_gcd,
    poly_mul,
    univariate_roots,
)


def test_inverse_in_f7():
    F = get_field(7)
    assert F.inv(3) == 5
    assert F.mul(3, 5) == 1


def test_extension_defining_relation():
    F = Field(7, 2, [1, 0, 1])
    x = F.element([0, 1])
    assert F.mul(x, x) == 6
    assert F.pow(x, 49) == x


def test_frobenius_fixes_every_element():
    F = Field(5, 2)
    for a in range(F.q):
        assert F.pow(a, F.q) == a


def test_division_by_zero_raises():
    F = get_field(11)
    with pytest.raises(DivisionByZero):
        F.inv(0)
    with pytest.raises(ZeroDivisionError):
        field_arith(F, "div", 3, 0)


def test_element_length_mismatch():
    F = Field(7, 2)
    with pytest.raises(SpecMismatch):
        F.element([1, 2, 3])


def test_non_prime_rejected():
    assert not is_prime(9)
    with pytest.raises(ValueError):
        Field(9)


def _brute_has_factor(f, p, deg):
    # any monic factor of the given degree, by exhaustion
    for tail in itertools.product(range(p), repeat=deg):
        g = list(tail) + [1]
        F = get_field(p)
        _, r = poly_divmod(F, f, g)
        if not r:
            return True
    return False


def test_find_irreducible_degree_two_over_f7():
    f = find_irreducible(7, 2)
    assert len(f) == 3 and f[-1] == 1
    assert not _brute_has_factor(f, 7, 1)


@pytest.mark.parametrize("p,m", [(5, 3), (3, 4), (7, 3)])
def test_find_irreducible_exhaustive_factor_check(p, m):
    f = find_irreducible(p, m)
    for d in range(1, m // 2 + 1):
        assert not _brute_has_factor(f, p, d)


def test_roots_simple_and_multiple():
    F = get_field(7)
    assert univariate_roots(F, [6, 0, 1]) == [(1, 1), (6, 1)]
    assert univariate_roots(F, [4, 3, 1]) == [(2, 2)]  # (x - 2)^2 = x^2 - 4x + 4


def test_roots_depend_on_field():
    assert univariate_roots(get_field(7), [1, 0, 1]) == []
    F49 = Field(7, 2, [1, 0, 1])
    roots = univariate_roots(F49, [1, 0, 1])
    assert len(roots) == 2 and all(m == 1 for _, m in roots)
    brute = [a for a in range(F49.q) if poly_eval(F49, [1, 0, 1], a) == 0]
    assert sorted(r for r, _ in roots) == brute


@pytest.mark.parametrize("p,m", [(101, 1), (11, 2), (3, 5)])
def test_roots_of_product_of_linears(p, m):
    F = get_field(p, m)
    rng = np.random.default_rng(p * m)
    chosen = sorted({int(x) for x in rng.integers(0, F.q, 6)})
    poly = [1]
    for r in chosen:
        poly = poly_mul(F, poly, [F.neg(r), 1])
    poly = poly_mul(F, poly, [F.neg(chosen[0]), 1])
    got = dict(univariate_roots(F, poly))
    assert sorted(got) == chosen
    assert got[chosen[0]] == 2


@pytest.mark.parametrize("q", [(7, 1), (5, 2), (3, 3)])
def test_roots_match_exhaustive_search(q):
    F = get_field(*q)
    rng = np.random.default_rng(1)
    for _ in range(20):
        poly = [int(x) for x in F.random(rng, 7)] + [1]
        brute = [a for a in range(F.q) if poly_eval(F, poly, a) == 0]
        assert [r for r, _ in univariate_roots(F, poly)] == brute


fields = st.sampled_from([(7, 1), (101, 1), (5, 2), (3, 3), (101, 2)])


@given(fields, st.data())
def test_field_axioms(spec, data):
    F = get_field(*spec)
    el = st.integers(0, F.q - 1)
    a, b, c = data.draw(el), data.draw(el), data.draw(el)
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    if a:
        assert F.mul(a, F.inv(a)) == 1


@given(fields, st.data())
def test_vector_ops_match_scalar_ops(spec, data):
    F = get_field(*spec)
    xs = data.draw(st.lists(st.integers(0, F.q - 1), min_size=1, max_size=12))
    ys = data.draw(st.lists(st.integers(0, F.q - 1), min_size=len(xs), max_size=len(xs)))
    a, b = np.array(xs), np.array(ys)
    assert F.vadd(a, b).tolist() == [F.add(x, y) for x, y in zip(xs, ys)]
    assert F.vmul(a, b).tolist() == [F.mul(x, y) for x, y in zip(xs, ys)]
    assert F.vsub(a, b).tolist() == [F.sub(x, y) for x, y in zip(xs, ys)]


def test_gcd_is_monic_common_factor():
    F = get_field(13)
    a = poly_mul(F, [1, 1], [2, 1])
    b = poly_mul(F, [1, 1], [5, 1])
    assert poly_gcd(F, a, b) == [1, 1]


def test_spec_round_trip():
    F = Field(5, 3)
    assert Field.from_spec(F.spec()) == F
