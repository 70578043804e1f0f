import random
from collections import defaultdict
from fractions import Fraction

import pytest

from glambda.asm6v import all_asms, asm_to_sixv
from glambda.errors import CapExceeded, ZeroFaceLabel
from glambda.lambdadet import asm_sum, asm_weight
from glambda.linalg import determinant
from glambda.network import (
    build_general_network,
    build_network,
    domain,
    enumerate_families,
    family_to_asm,
    family_to_sixv,
    lgv_general,
    lgv_lambda_det,
    partition_matrix,
    path_partition,
)
from glambda.tsystem import CoeffWindow, InitialData, diamond, dodgson, evolve, random_rational, t_name

from oracles import general_n3_terms

F = Fraction


def ones(n):
    return [[F(1)] * n for _ in range(n)]


def random_matrix(n, rng):
    return [[random_rational(rng) for _ in range(n)] for _ in range(n)]


def series_coeff(p, q, lam, mu):
    """Coefficient of z^p w^q in 1 / (1 - z - lam w - mu z w)."""
    c = {}
    for a in range(p + 1):
        for b in range(q + 1):
            if a == b == 0:
                c[a, b] = F(1)
                continue
            c[a, b] = c.get((a - 1, b), 0) + lam * c.get((a, b - 1), 0) + mu * c.get((a - 1, b - 1), 0)
    return c[p, q]


def test_domain_shape():
    assert domain(1) == [(0, 0)]
    for n in range(1, 7):
        pts = domain(n)
        assert len(pts) == n * n
        assert all((x + y) % 2 == 0 for x, y in pts)


def test_size_one():
    net = build_network([[F(5)]], CoeffWindow({}, {}))
    assert net.vertices == [(0, 0)]
    assert path_partition(net, 1, 1) == 1
    assert lgv_lambda_det([[F(5)]], CoeffWindow({}, {})) == 5


@pytest.mark.parametrize("n", range(1, 7))
def test_networks_are_acyclic(n):
    rng = random.Random(n)
    net = build_network(random_matrix(n, rng), CoeffWindow.random(rng, n))
    assert net.is_acyclic()
    assert all(e.kind in "RHD" for e in net.edges())


def test_partition_functions_match_series():
    n = 6
    lam, mu = F(2), F(3)
    net = build_network(ones(n), CoeffWindow.homogeneous(lam, mu, n))
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            assert path_partition(net, i, j) == series_coeff(i - 1, j - 1, lam, mu)
    assert path_partition(net, 1, 2) == lam


def test_lgv_examples():
    one = CoeffWindow.homogeneous(1, 1, 8)
    assert lgv_lambda_det(ones(2), one) == 2
    assert lgv_lambda_det(ones(3), one) == 8
    for n in range(1, 9):
        lam, mu = F(2), F(3, 2)
        assert lgv_lambda_det(ones(n), CoeffWindow.homogeneous(lam, mu, n)) == (lam + mu) ** (n * (n - 1) // 2)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_lgv_matches_dodgson(n):
    rng = random.Random(7 * n)
    for _ in range(5):
        A = random_matrix(n, rng)
        c = CoeffWindow.random(rng, n)
        assert lgv_lambda_det(A, c) == dodgson(A, c)


def test_minimal_window_suffices():
    rng = random.Random(3)
    for n in range(2, 6):
        A = random_matrix(n, rng)
        c = CoeffWindow.homogeneous(F(2), F(5), n - 2)
        assert lgv_lambda_det(A, c) == dodgson(A, c)


def test_zero_face_label():
    A = ones(3)
    A[1][1] = F(0)
    with pytest.raises(ZeroFaceLabel):
        build_network(A, CoeffWindow.homogeneous(1, 1, 3))


def test_dot_output():
    dot = build_network(ones(2), CoeffWindow.homogeneous(1, 1, 2)).to_dot()
    assert dot.startswith("digraph network {")
    assert dot.count("->") == 5


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("n,count", [(1, 1), (2, 2), (3, 8), (4, 64)])
def test_family_counts_at_unit_weights(n, count):
    net = build_network(ones(n), CoeffWindow.homogeneous(1, 1, n))
    fams = enumerate_families(net)
    assert len(fams) == count == 2 ** (n * (n - 1) // 2)
    assert all(f.weight == 1 for f in fams)


def test_family_cap(monkeypatch):
    net = build_network(ones(4), CoeffWindow.homogeneous(1, 1, 4))
    with pytest.raises(CapExceeded):
        enumerate_families(net, cap=3)
    monkeypatch.setenv("LAMBDADET_CAP", "3")
    with pytest.raises(CapExceeded):
        enumerate_families(net)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_family_sum_is_determinant(n):
    rng = random.Random(n)
    A = random_matrix(n, rng)
    c = CoeffWindow.random(rng, n)
    net = build_network(A, c)
    fams = enumerate_families(net)
    assert sum(f.weight for f in fams) == determinant(partition_matrix(net))
    for f in fams:
        occupied = [v for p in f.paths for v in [e.dst for e in p]] + f.starts
        assert len(occupied) == len(set(occupied))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_fibres_over_asms(n):
    rng = random.Random(50 + n)
    A = random_matrix(n, rng)
    c = CoeffWindow.random(rng, n)
    net = build_network(A, c)
    fibres = defaultdict(list)
    for f in enumerate_families(net):
        grid, m, alt = family_to_sixv(net, f)
        B = family_to_asm(net, f)
        assert asm_to_sixv(B) == grid
        assert m == len(B.minus_positions) == len(alt)
        fibres[B].append(f)
    assert set(fibres) == set(all_asms(n))
    for B, fs in fibres.items():
        assert len(fs) == 2 ** len(B.minus_positions)
        assert sum(f.weight for f in fs) == asm_weight(B, A, c).total


def test_size_three_diamond_has_two_preimages():
    net = build_network(ones(3), CoeffWindow.homogeneous(1, 1, 3))
    images = [family_to_asm(net, f) for f in enumerate_families(net)]
    assert len(set(images)) == 7
    diamond_asm = [B for B in set(images) if B.minus_positions]
    assert len(diamond_asm) == 1 and images.count(diamond_asm[0]) == 2
    alts = sorted(family_to_sixv(net, f)[2][(2, 2)] for f in enumerate_families(net) if family_to_asm(net, f) == diamond_asm[0])
    assert alts == ["lambda", "mu"]


# ---------------------------------------------------------------------------
# general initial data
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_general_network_matches_evolve(n):
    rng = random.Random(n)
    init = InitialData.random(n, rng)
    c = CoeffWindow.random(rng, n)
    assert lgv_general(init, c) == evolve(init, c, (0, 0, n))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_general_network_specializes(n):
    rng = random.Random(n)
    A = random_matrix(n, rng)
    c = CoeffWindow.random(rng, n)
    plain = build_network(A, c)
    general = build_general_network(InitialData.from_matrix(A), c)
    assert [(e.src, e.dst, e.kind, e.weight) for e in plain.edges()] == [
        (e.src, e.dst, e.kind, e.weight) for e in general.edges()
    ]
    assert plain.exit_factors == general.exit_factors


def test_size_three_general_families():
    R, terms = general_n3_terms()
    init = InitialData.symbolic(3, R)
    net = build_general_network(init, CoeffWindow.symbolic(R, 1))
    weights = [f.weight for f in enumerate_families(net)]
    assert len(weights) == 8
    assert sorted(map(str, weights)) == sorted(map(str, terms))


def test_size_three_general_sum_specializes():
    R, terms = general_n3_terms()
    total = sum(terms[1:], terms[0])
    ones_at_even = {t_name(i, j): 1 for i, j in diamond(3) if (i + j + 3) % 2 == 0}
    reduced = total.substitute(ones_at_even)
    A = [[None] * 3 for _ in range(3)]
    for i, j in diamond(3):
        if (i + j + 3) % 2:
            A[(j - i + 4) // 2 - 1][(i + j + 4) // 2 - 1] = R.gen(t_name(i, j))
    assert reduced == asm_sum(A, CoeffWindow.symbolic(R, 1), mode="symbolic")
    q = F(2)
    point = {v: F(1) for v in R.names if v.startswith("t[")}
    point.update({f"lam[{a}]": q**a for a in (-1, 0, 1)})
    point.update({f"mu[{a}]": q**a for a in (-1, 0, 1)})
    assert total.evaluate(point) == 9
