import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from glambda.errors import DivisionByZero, WindowMiss, WindowTooSmall
from glambda.exact import PolyRing, evaluate
from glambda.linalg import gaussian_det, matmul
from glambda.tsystem import (
    CoeffWindow,
    ExtendedExchangeMatrix,
    InitialData,
    build_plan,
    build_theta,
    cluster_mutation_check,
    diamond,
    dodgson,
    evolve,
    lambda_det_via_chips,
    lambda_det_via_tsystem,
    lambda_name,
    mu_name,
    q_product,
    random_rational,
    soltij_closed_form,
    soltsys_check,
    solve_frame,
    t_name,
    theta_identity_check,
    tsystem_all_ones,
)

from oracles import THETA_MAX_3, THETA_MIN_3, general_n3_terms

F = Fraction


def random_matrix(n, rng):
    return [[random_rational(rng) for _ in range(n)] for _ in range(n)]


# ---------------------------------------------------------------------------
# coefficient windows
# ---------------------------------------------------------------------------


def test_window_lookup_and_shift():
    c = CoeffWindow({-1: F(2), 0: F(3), 1: F(5)}, {-1: F(7), 0: F(11), 1: F(13)})
    assert c.lam(1) == 5 and c.mu(-1) == 7
    s = c.shifted(1, -1)
    assert s.lam(0) == 5 and s.mu(0) == 7
    with pytest.raises(WindowMiss):
        c.lam(2)
    with pytest.raises(WindowMiss):
        s.lam(1)


def test_window_rejects_zero_and_reports_coverage():
    with pytest.raises(ValueError):
        CoeffWindow({0: 0}, {0: 1})
    c = CoeffWindow({1: F(1)}, {0: F(1)})
    with pytest.raises(WindowTooSmall):
        c.require(2)
    CoeffWindow.homogeneous(1, 1, 1).require(3)
    with pytest.raises(WindowTooSmall):
        CoeffWindow.homogeneous(1, 1, 1).require(4)


def test_window_symmetries():
    c = CoeffWindow({-1: F(2), 0: F(3), 1: F(5)}, {-1: F(7), 0: F(11), 1: F(13)})
    sg = c.sigma()
    assert [sg.lam(a) for a in (-1, 0, 1)] == [13, 11, 7]
    assert [sg.mu(a) for a in (-1, 0, 1)] == [2, 3, 5]
    tau = c.tau()
    assert [tau.lam(a) for a in (-1, 0, 1)] == [5, 3, 2]
    assert [tau.mu(a) for a in (-1, 0, 1)] == [7, 11, 13]


# ---------------------------------------------------------------------------
# evolution
# ---------------------------------------------------------------------------


def test_initial_data_domain():
    assert len(diamond(3)) == 13
    with pytest.raises(ValueError):
        InitialData(2, {(0, 0): 1})
    A = [[F(1), F(2)], [F(3), F(4)]]
    init = InitialData.from_matrix(A)
    assert init.t[(0, 0)] == 1
    # odd layer at n = 2: the four neighbours of the origin
    assert {init.t[p] for p in [(-1, 0), (1, 0), (0, -1), (0, 1)]} == {1, 2, 3, 4}


def test_evolve_examples():
    init = InitialData.constant(3, F(1))
    assert evolve(init, CoeffWindow.homogeneous(1, 1, 2), (0, 0, 3)) == 8
    assert evolve(init, CoeffWindow.q_power(2, 2), (0, 0, 3)) == 9


def test_evolve_argument_checks():
    init = InitialData.constant(3, F(1))
    c = CoeffWindow.homogeneous(1, 1, 2)
    with pytest.raises(ValueError, match="parity"):
        evolve(init, c, (0, 0, 2))
    with pytest.raises(ValueError, match="pyramid"):
        evolve(init, c, (2, 1, 2))


def test_evolve_names_vanishing_denominator():
    init = InitialData.constant(3, F(1))
    t = dict(init.t)
    t[(0, 0)] = F(0)  # T[0,0,1] = 0 is the denominator of T[0,0,3]
    with pytest.raises(DivisionByZero) as exc:
        evolve(InitialData(3, t), CoeffWindow.homogeneous(1, 1, 2), (0, 0, 3))
    assert exc.value.where == (0, 0, 1)


def test_evolve_missing_coefficient():
    init = InitialData.constant(3, F(1))
    with pytest.raises(WindowMiss):
        evolve(init, CoeffWindow.homogeneous(1, 1, 0), (0, 0, 3))


def test_frame_satisfies_recurrence():
    rng = random.Random(11)
    n = 5
    init = InitialData.random(n, rng)
    c = CoeffWindow.random(rng, n)
    fr = solve_frame(init, c)
    for (i, j, k), v in fr.values.items():
        if k < 2:
            continue
        lhs = v * fr[(i, j, k - 2)]
        rhs = c.mu(j) * fr[(i, j + 1, k - 1)] * fr[(i, j - 1, k - 1)] + c.lam(i) * fr[(i + 1, j, k - 1)] * fr[(i - 1, j, k - 1)]
        assert lhs == rhs


def test_general_size_three_solution():
    R, terms = general_n3_terms()
    init = InitialData.symbolic(3, R)
    value = evolve(init, CoeffWindow.symbolic(R, 1), (0, 0, 3))
    assert value == sum(terms[1:], terms[0])
    assert len(value) == 8


# ---------------------------------------------------------------------------
# deformed condensation
# ---------------------------------------------------------------------------


def test_dodgson_two_by_two_symbolic():
    R = PolyRing(["p", "q", "r", "s", lambda_name(0), mu_name(0)])
    p, q, r, s, l0, m0 = (R.gen(v) for v in R.names)
    c = CoeffWindow({0: l0}, {0: m0})
    assert dodgson([[p, q], [r, s]], c) == m0 * p * s + l0 * q * r


def test_dodgson_examples():
    one = CoeffWindow.homogeneous(1, 1, 2)
    assert dodgson([[1, 2], [3, 4]], one) == 10
    assert lambda_det_via_tsystem([[F(1), F(2)], [F(3), F(4)]], one) == 10
    assert lambda_det_via_tsystem([[F(1), F(2)], [F(1), F(3)]], one) == 5
    ones = [[F(1)] * 3 for _ in range(3)]
    assert dodgson(ones, one) == 8 == lambda_det_via_tsystem(ones, one)
    assert dodgson([], one) == 1
    assert dodgson([[F(7)]], one) == 7


def test_dodgson_reports_vanishing_minor():
    A = [[F(1), F(1), F(1)], [F(1), F(0), F(1)], [F(1), F(1), F(1)]]
    with pytest.raises(DivisionByZero):
        dodgson(A, CoeffWindow.homogeneous(1, 1, 2))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_dodgson_matches_tsystem(n):
    rng = random.Random(100 + n)
    for _ in range(15):
        A = random_matrix(n, rng)
        c = CoeffWindow.random(rng, n)
        try:
            expected = lambda_det_via_tsystem(A, c)
        except DivisionByZero:
            continue
        assert dodgson(A, c) == expected


def test_literal_shift_convention_disagrees():
    rng = random.Random(5)
    ones = [[F(1)] * 3 for _ in range(3)]
    assert dodgson(ones, CoeffWindow.homogeneous(1, 1, 3), convention="literal") == 8
    A = random_matrix(3, rng)
    c = CoeffWindow.random(rng, 3)
    assert dodgson(A, c, convention="literal") != dodgson(A, c)
    with pytest.raises(ValueError):
        dodgson(A, c, convention="other")


@pytest.mark.parametrize("n", range(1, 9))
def test_minus_one_gives_determinant(n):
    rng = random.Random(n)
    c = CoeffWindow.homogeneous(-1, 1, n)
    for _ in range(3):
        A = random_matrix(n, rng)
        try:
            value = dodgson(A, c)
        except DivisionByZero:
            continue
        assert value == gaussian_det(A)


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def test_soltij_examples():
    for i, j in [(0, 0), (3, -2), (-4, 5)]:
        assert soltij_closed_form(i, j, 0, F(3)) == 1
        assert soltij_closed_form(i, j, 1, F(3)) == 1
    assert soltij_closed_form(0, 0, 3, F(2)) == 9
    q = F(3, 2)
    assert soltij_closed_form(1, -2, 4, q) == tsystem_all_ones(1, -2, 4, CoeffWindow.q_power(q, 12))


@pytest.mark.parametrize("q", [F(2), F(3, 2)])
def test_soltij_matches_dp(q):
    rng = random.Random(str(q))
    c = CoeffWindow.q_power(q, 20)
    for _ in range(250):
        i, j, k = rng.randint(-6, 6), rng.randint(-6, 6), rng.randint(0, 8)
        assert soltij_closed_form(i, j, k, q) == tsystem_all_ones(i, j, k, c)


@settings(max_examples=100, deadline=None)
@given(st.integers(-6, 6), st.integers(-6, 6), st.integers(2, 8), st.sampled_from([F(2), F(3, 2), F(-2)]))
def test_soltij_satisfies_recurrence(i, j, k, q):
    T = lambda a, b, c: soltij_closed_form(a, b, c, q)  # noqa: E731
    lhs = T(i, j, k) * T(i, j, k - 2)
    rhs = q**j * T(i, j + 1, k - 1) * T(i, j - 1, k - 1) + q**i * T(i + 1, j, k - 1) * T(i - 1, j, k - 1)
    assert lhs == rhs


def test_q_product_examples():
    assert q_product(2, F(7)) == 2
    assert q_product(3, F(2)) == 9
    assert q_product(5, F(1)) == 2**10


@pytest.mark.parametrize("q", [F(2), F(3, 2), F(-2)])
def test_q_product_matches_evolve(q):
    for n in range(1, 11):
        init = InitialData.constant(n, F(1))
        try:
            expected = evolve(init, CoeffWindow.q_power(q, n), (0, 0, n))
        except DivisionByZero:
            continue
        assert q_product(n, q) == expected == soltij_closed_form(0, 0, n, q)


# ---------------------------------------------------------------------------
# chips
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("flavor,expected", [("theta_min", THETA_MIN_3), ("theta_max", THETA_MAX_3)])
def test_size_three_chip_sequences(flavor, expected):
    plan = build_plan(flavor, 3)
    got = [(c.kind, c.position, [(y, x) for x, y in c.vertices], c.lam_index, c.mu_index) for c in plan.chips]
    assert got == expected
    assert plan.matrix_size == 4


def test_size_two_chip_product_by_hand():
    init = InitialData.constant(2, F(1))
    c = CoeffWindow.homogeneous(1, 1, 2)
    V = [[1, 1], [0, 1]]
    U = [[1, 0], [1, 1]]
    assert build_plan("theta_min", 2).sequence() == ["V1", "U1"]
    assert build_theta("theta_min", init.t, c, 2) == matmul(V, U)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_theta_identity(n):
    rng = random.Random(n)
    for _ in range(5):
        init = InitialData.random(n, rng)
        c = CoeffWindow.random(rng, n)
        try:
            rep = theta_identity_check(n, init, c)
        except DivisionByZero:
            continue
        assert rep.ok
        assert soltsys_check(n, init, c)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_chips_give_lambda_determinant(n):
    rng = random.Random(40 + n)
    A = random_matrix(n, rng)
    c = CoeffWindow.random(rng, n)
    assert lambda_det_via_chips(A, c) == dodgson(A, c)


# ---------------------------------------------------------------------------
# exchange matrix
# ---------------------------------------------------------------------------


def test_initial_exchange_matrix_entries():
    R = 3
    m = ExtendedExchangeMatrix.initial(R)
    for _, i, j in m.mutable:
        for _, i2, j2 in m.mutable:
            if (i + j) % 2 == 1:
                expected = int(i == i2 and abs(j - j2) == 1) - int(j == j2 and abs(i - i2) == 1)
                assert m.get(("v", i, j), ("v", i2, j2)) == expected
            assert m.get(("v", i, j), ("v", i2, j2)) == -m.get(("v", i2, j2), ("v", i, j))
        filled = (i + j) % 2 == 1
        for a in range(-R, R + 1):
            assert m.get(("lam", a), ("v", i, j)) == (int(i == a) if filled else -int(i == a))
            assert m.get(("mu", a), ("v", i, j)) == (-int(j == a) if filled else int(j == a))


@pytest.mark.parametrize("radius", [3, 4, 5, 6])
def test_compound_mutation(radius):
    rep = cluster_mutation_check(radius)
    assert rep.order_independent and rep.flipped and rep.restored
    assert rep.compared_entries > 0


def test_mutation_radius_precondition():
    with pytest.raises(ValueError):
        cluster_mutation_check(2)


def test_single_mutation_is_involution():
    m = ExtendedExchangeMatrix.initial(3)
    before = dict(m.entries)
    m.mutate(("v", 0, 1))
    assert m.entries != before
    m.mutate(("v", 0, 1))
    assert m.entries == before


def test_symbolic_value_evaluates_consistently():
    R, terms = general_n3_terms()
    rng = random.Random(2)
    point = {v: random_rational(rng) for v in R.names}
    init = InitialData(3, {(i, j): point[t_name(i, j)] for i, j in diamond(3)})
    c = CoeffWindow({a: point[lambda_name(a)] for a in (-1, 0, 1)}, {a: point[mu_name(a)] for a in (-1, 0, 1)})
    assert evolve(init, c, (0, 0, 3)) == sum(evaluate(t, point) for t in terms)
