import random
from fractions import Fraction

import pytest

from glambda.asm6v import validate_asm
from glambda.errors import CapExceeded, MismatchAt, ZeroEntryAtMinus
from glambda.exact import PolyRing, evaluate
from glambda.lambdadet import (
    CrossCheckReport,
    asm_sum,
    asm_weight,
    cross_check,
    entry_name,
    generic_matrix,
    generic_ring,
    homogeneous_lu_check,
    random_instance,
    require_agreement,
    robbins_rumsey,
    statistics_form,
    transform_coeffs,
    transform_matrix,
    vandermonde_matrix,
    vandermonde_product,
)
from glambda.linalg import gaussian_det
from glambda.tsystem import CoeffWindow, dodgson, lambda_det_via_tsystem, random_rational

from oracles import display_3x3, robbins_rumsey_3x3

F = Fraction


def ones(n):
    return [[F(1)] * n for _ in range(n)]


def generic3():
    R = generic_ring(3)
    return R, generic_matrix(3, R), CoeffWindow.symbolic(R, 3)


def test_weight_of_identity():
    R, A, c = generic3()
    w = asm_weight(validate_asm([[1, 0, 0], [0, 1, 0], [0, 0, 1]]), A, c)
    g = R.gen
    assert w.total == g("mu[1]") * g("mu[0]") * g("mu[-1]") * g("a[1,1]") * g("a[2,2]") * g("a[3,3]")


def test_weight_of_anti_identity():
    R, A, c = generic3()
    w = asm_weight(validate_asm([[0, 0, 1], [0, 1, 0], [1, 0, 0]]), A, c)
    g = R.gen
    assert w.total == g("lam[1]") * g("lam[0]") * g("lam[-1]") * g("a[1,3]") * g("a[2,2]") * g("a[3,1]")


def test_weight_of_diamond():
    R, A, c = generic3()
    w = asm_weight(validate_asm([[0, 1, 0], [1, -1, 1], [0, 1, 0]]), A, c)
    g = R.gen
    l0, m0 = g("lam[0]"), g("mu[0]")
    assert w.coefficient == l0 * m0 * (l0 + m0)
    assert w.monomial == g("a[1,2]") * g("a[2,1]") * g("a[2,3]") * g("a[3,2]") / g("a[2,2]")
    assert w.factors[(2, 2)] == (l0 + m0) / g("a[2,2]")


def test_symbolic_three_by_three_matches_display():
    total = asm_sum(None, None, mode="symbolic", n=3)
    assert total == display_3x3(total.ring)
    assert len(total) == 8


def test_display_agrees_with_dodgson_at_random_points():
    R = generic_ring(3)
    poly = display_3x3(R)
    rng = random.Random(11)
    for _ in range(50):
        point = {v: random_rational(rng) for v in R.names}
        A = [[point[entry_name(i, j)] for j in (1, 2, 3)] for i in (1, 2, 3)]
        c = CoeffWindow({a: point[f"lam[{a}]"] for a in (-1, 0, 1)}, {a: point[f"mu[{a}]"] for a in (-1, 0, 1)})
        assert evaluate(poly, point) == dodgson(A, c)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_statistics_form_symbolic(n):
    R = generic_ring(n)
    A, c = generic_matrix(n, R), CoeffWindow.symbolic(R, n)
    assert statistics_form(A, c) == asm_sum(A, c, mode="symbolic")


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_statistics_form_random(n):
    rng = random.Random(n)
    for _ in range(5):
        A, c = random_instance(n, rng)
        assert statistics_form(A, c) == asm_sum(A, c)


def test_robbins_rumsey_display():
    names = [entry_name(i, j) for i in (1, 2, 3) for j in (1, 2, 3)] + ["x"]
    R = PolyRing(names)
    x = R.gen("x")
    A = generic_matrix(3, R)
    expected = robbins_rumsey_3x3(R, x)
    assert robbins_rumsey(A, x) == expected
    assert asm_sum(A, CoeffWindow.homogeneous(x, 1, 2), mode="symbolic") == expected


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_robbins_rumsey_is_the_homogeneous_case(n):
    rng = random.Random(n)
    for _ in range(3):
        A, _ = random_instance(n, rng)
        lam = random_rational(rng)
        assert robbins_rumsey(A, lam) == asm_sum(A, CoeffWindow.homogeneous(lam, 1, n))


@pytest.mark.parametrize("n", range(1, 7))
def test_minus_one_gives_determinant(n):
    rng = random.Random(100 + n)
    A, _ = random_instance(n, rng)
    c = CoeffWindow.homogeneous(-1, 1, n)
    assert asm_sum(A, c) == gaussian_det(A) == dodgson(A, c)


def test_vandermonde_examples():
    c = CoeffWindow.homogeneous(F(2), F(1), 2)
    A = vandermonde_matrix([1, 2, 3])
    assert vandermonde_product([1, 2, 3], 2, 1) == 140
    assert asm_sum(A, c) == dodgson(A, c) == 140
    assert vandermonde_product([1, 2], 1, 1) == 3
    assert dodgson(vandermonde_matrix([F(1), F(4)]), CoeffWindow.homogeneous(1, 1, 1)) == 5


@pytest.mark.parametrize("n", range(1, 7))
def test_vandermonde_random(n):
    rng = random.Random(n)
    a = [random_rational(rng) for _ in range(n)]
    lam, mu = random_rational(rng), random_rational(rng)
    A = vandermonde_matrix(a)
    c = CoeffWindow.homogeneous(lam, mu, n)
    expected = vandermonde_product(a, lam, mu)
    assert dodgson(A, c) == lambda_det_via_tsystem(A, c) == expected
    if n <= 5:
        rep = cross_check(A, c)
        assert rep.agreement and rep.value == expected


def test_lu_examples():
    rep = homogeneous_lu_check(3, 1, 1)
    assert rep.ok and rep.determinant == 8
    rep = homogeneous_lu_check(5, 2, 3)
    assert rep.ok and rep.determinant == 5**10


@pytest.mark.parametrize("n", range(1, 7))
def test_lu_factorisation(n):
    assert homogeneous_lu_check(n, F(1), F(2)).ok
    assert homogeneous_lu_check(n, F(-3, 2), F(5, 7)).ok


def test_cross_check_all_ones():
    rep = cross_check(ones(3), CoeffWindow.homogeneous(1, 1, 3), description="ones")
    assert isinstance(rep, CrossCheckReport)
    assert rep.agreement and rep.value == 8
    assert set(rep.values) == {"dodgson", "tsystem", "asm", "statistics", "lgv"}
    assert set(rep.timings) == set(rep.values)


def test_zero_under_minus_one_is_a_partial_agreement():
    A = ones(3)
    A[1][1] = F(0)
    rep = cross_check(A, CoeffWindow.homogeneous(1, 1, 3))
    assert not rep.agreement
    assert rep.errors["asm"].startswith("ZeroEntryAtMinus")
    with pytest.raises(ZeroEntryAtMinus):
        asm_sum(A, CoeffWindow.homogeneous(1, 1, 3))


def test_require_agreement_raises_on_mismatch():
    rep = CrossCheckReport("x", {"a": F(1), "b": F(2)}, {}, {})
    with pytest.raises(MismatchAt):
        require_agreement(rep)
    require_agreement(CrossCheckReport("x", {"a": F(1), "b": F(1)}, {}, {}))


def test_symbolic_coefficients_are_positive():
    total = asm_sum(None, None, mode="symbolic", n=4)
    assert all(coef > 0 for _, coef in total.terms())
    point = {v: 1 for v in total.ring.names}
    assert evaluate(total, point) == 64


@pytest.mark.parametrize("phi", ["sigma", "tau"])
@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_symmetry_covariance(phi, n):
    rng = random.Random(n)
    for _ in range(4):
        A, c = random_instance(n, rng)
        B, d = transform_matrix(A, phi), transform_coeffs(c, phi)
        assert asm_sum(B, d) == asm_sum(A, c)
        assert dodgson(B, d) == dodgson(A, c)


def test_symbolic_symmetry_n3():
    R = generic_ring(3)
    A, c = generic_matrix(3, R), CoeffWindow.symbolic(R, 1)
    base = asm_sum(A, c, mode="symbolic")
    for phi in ("sigma", "tau"):
        assert asm_sum(transform_matrix(A, phi), transform_coeffs(c, phi), mode="symbolic") == base


def test_caps(monkeypatch):
    with pytest.raises(CapExceeded):
        asm_sum(ones(7), CoeffWindow.homogeneous(1, 1, 7))
    with pytest.raises(CapExceeded):
        asm_sum(None, None, mode="symbolic", n=6)
    monkeypatch.setenv("LAMBDADET_CAP", "3")
    with pytest.raises(CapExceeded):
        asm_sum(ones(4), CoeffWindow.homogeneous(1, 1, 4))

