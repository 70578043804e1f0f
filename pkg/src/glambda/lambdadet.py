"""Division-free evaluators of the Lambda-determinant and the cross-method harness."""

from __future__ import annotations

import os
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Any, Callable, Sequence

from .asm6v import AlternatingSignMatrix, all_asms, asm_to_sixv, statistics
from .errors import CapExceeded, GLambdaError, MismatchAt, ZeroEntryAtMinus
from .exact import LaurentPolynomial, PolyRing, exact_div, is_zero
from .linalg import determinant, matmul
from .network import build_network, lgv_lambda_det, partition_matrix
from .tsystem import (
    CoeffWindow,
    dodgson,
    lambda_det_via_chips,
    lambda_det_via_tsystem,
    lambda_name,
    mu_name,
    random_rational,
)

DEFAULT_SUM_CAP = 6
DEFAULT_SYMBOLIC_CAP = 5


def _cap(default: int) -> int:
    env = os.environ.get("LAMBDADET_CAP")
    return int(env) if env else default


@lru_cache(maxsize=None)
def _asm_data(n: int):
    """Per-ASM data reused across instances: grid types, statistics."""
    out = []
    for B in all_asms(n):
        out.append((B, asm_to_sixv(B), statistics(B)))
    return tuple(out)


def _in_window(n: int, idx: int) -> bool:
    return 2 - n <= idx <= n - 2


@dataclass
class WeightBreakdown:
    asm: AlternatingSignMatrix
    monomial: Any
    coefficient: Any
    factors: dict[tuple[int, int], Any]
    total: Any = field(init=False)

    def __post_init__(self):
        self.total = self.monomial * self.coefficient


def _entry_power(A, i: int, j: int, b: int):
    a = A[i - 1][j - 1]
    if b == 1:
        return a
    if b == -1:
        if is_zero(a):
            raise ZeroEntryAtMinus(i, j)
        return exact_div(1, a)
    return 1


def _vertex_coeff(kind: str, i: int, j: int, n: int, coeffs: CoeffWindow):
    if kind in ("a1", "c2"):
        if not _in_window(n, j - i):
            raise AssertionError(f"{kind} at ({i},{j}) needs lambda_{j - i} outside [2-n, n-2]")
    if kind in ("b1", "c2"):
        if not _in_window(n, i + j - n - 1):
            raise AssertionError(f"{kind} at ({i},{j}) needs mu_{i + j - n - 1} outside [2-n, n-2]")
    if kind == "a1":
        return coeffs.lam(j - i)
    if kind == "b1":
        return coeffs.mu(i + j - n - 1)
    if kind == "c2":
        return coeffs.lam(j - i) + coeffs.mu(i + j - n - 1)
    return 1


def asm_weight(B: AlternatingSignMatrix, A: Sequence[Sequence[Any]], coeffs: CoeffWindow, grid=None) -> WeightBreakdown:
    """Per-vertex weights ``a^b`` times the coefficient picked by the vertex type."""
    n = B.n
    g = grid if grid is not None else asm_to_sixv(B)
    mono = 1
    coeff = 1
    factors = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            b = B[i, j]
            e = _entry_power(A, i, j, b)
            c = _vertex_coeff(g[i, j], i, j, n, coeffs)
            if b:
                mono = mono * e
            if not (isinstance(c, int) and c == 1):
                coeff = coeff * c
            factors[(i, j)] = e * c if b else c
    return WeightBreakdown(B, mono, coeff, factors)


def _check_size(n: int, symbolic: bool, allow_large: bool) -> None:
    cap = _cap(DEFAULT_SYMBOLIC_CAP if symbolic else DEFAULT_SUM_CAP)
    if symbolic and allow_large:
        cap = max(cap, DEFAULT_SUM_CAP)
    if n > cap:
        raise CapExceeded(f"ASM sum at n={n} exceeds the cap {cap}")


def asm_sum(A: Sequence[Sequence[Any]] | None, coeffs: CoeffWindow | None, mode: str = "numeric", n: int | None = None, allow_large: bool = False):
    """Sum of ASM weights.

    In ``"symbolic"`` mode a missing ``A``/``coeffs`` is replaced by generic
    variables (see :func:`generic_ring`) and the result is a Laurent polynomial.
    """
    symbolic = mode == "symbolic"
    if mode not in ("numeric", "symbolic"):
        raise ValueError(f"unknown mode {mode!r}")
    if A is None or coeffs is None:
        if not symbolic:
            raise ValueError("numeric mode needs a matrix and coefficients")
        n = n if n is not None else len(A)
        ring = generic_ring(n)
        A = generic_matrix(n, ring) if A is None else A
        coeffs = CoeffWindow.symbolic(ring, n) if coeffs is None else coeffs
    n = len(A)
    _check_size(n, symbolic, allow_large)
    if n == 0:
        return 1
    total = 0
    for B, g, _ in _asm_data(n):
        total = total + asm_weight(B, A, coeffs, g).total
    return total


def statistics_form(A: Sequence[Sequence[Any]], coeffs: CoeffWindow, allow_large: bool = False):
    """Same sum, written through the ``I_a``/``I'_a`` statistics of each ASM."""
    n = len(A)
    _check_size(n, False, allow_large)
    total = 0
    for B, _, st in _asm_data(n):
        w = 1
        for a, e in st.I.items():
            if e:
                w = w * coeffs.lam(a) ** e
        for a, e in st.I_prime.items():
            if e:
                w = w * coeffs.mu(a) ** e
        for i, j in st.minus_positions:
            w = w * (coeffs.lam(j - i) + coeffs.mu(i + j - n - 1))
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                b = B[i, j]
                if b:
                    w = w * _entry_power(A, i, j, b)
        total = total + w
    return total


def robbins_rumsey(A: Sequence[Sequence[Any]], lam):
    """``sum_B lam^Inv(B) (1 + 1/lam)^#(-1) prod a^b`` (one-parameter case, ``mu = 1``)."""
    n = len(A)
    _check_size(n, False, False)
    inv_lam = exact_div(1, lam)
    total = 0
    for B, _, st in _asm_data(n):
        w = lam**st.inv if st.inv >= 0 else inv_lam ** (-st.inv)
        w = w * (1 + inv_lam) ** st.minus_count
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                b = B[i, j]
                if b:
                    w = w * _entry_power(A, i, j, b)
        total = total + w
    return total


def vandermonde_matrix(a: Sequence[Any]) -> list[list]:
    return [[x**j for j in range(len(a))] for x in a]


def vandermonde_product(a: Sequence[Any], lam, mu):
    out = 1
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            out = out * (lam * a[i] + mu * a[j])
    return out


# ---------------------------------------------------------------------------
# homogeneous LU factorisation of the path matrix
# ---------------------------------------------------------------------------


def binomial_matrix(n: int, alpha, beta) -> list[list]:
    """``B[i][j] = C(j, i) alpha^i beta^(j-i)`` for ``0 <= i <= j < n``."""
    return [[comb(j, i) * alpha**i * beta ** (j - i) if j >= i else 0 for j in range(n)] for i in range(n)]


def series_z(n: int, lam, mu) -> list[list]:
    """Coefficients of ``1 / (1 - z - lam w - mu z w)``: ``Z[i][j]`` multiplies ``z^i w^j``."""
    c = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            v = 1 if i == j == 0 else 0
            if i:
                v = v + c[i - 1][j]
            if j:
                v = v + lam * c[i][j - 1]
            if i and j:
                v = v + mu * c[i - 1][j - 1]
            c[i][j] = v
    return c


@dataclass
class LUReport:
    n: int
    factorisation_ok: bool
    network_ok: bool
    determinant: Any
    expected: Any

    @property
    def ok(self) -> bool:
        return self.factorisation_ok and self.network_ok and self.determinant == self.expected


def homogeneous_lu_check(n: int, lam, mu) -> LUReport:
    lam, mu = Fraction(lam), Fraction(mu)
    lower = [list(r) for r in zip(*binomial_matrix(n, 1, 1))]
    upper = binomial_matrix(n, lam + mu, lam)
    prod = matmul(lower, upper)
    Z = series_z(n, lam, mu)
    fact_ok = prod == Z
    net = build_network([[1] * n for _ in range(n)], CoeffWindow.homogeneous(lam, mu, n))
    net_ok = partition_matrix(net, scaled=False) == Z
    det = determinant(prod)
    return LUReport(n, fact_ok, net_ok, det, (lam + mu) ** (n * (n - 1) // 2))


# ---------------------------------------------------------------------------
# generic variables and random instances
# ---------------------------------------------------------------------------


def entry_name(i: int, j: int) -> str:
    return f"a[{i},{j}]"


def generic_ring(n: int) -> PolyRing:
    names = [entry_name(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    names += [lambda_name(a) for a in range(2 - n, n - 1)]
    names += [mu_name(a) for a in range(2 - n, n - 1)]
    return PolyRing(names)


def generic_matrix(n: int, ring: PolyRing) -> list[list[LaurentPolynomial]]:
    return [[ring.gen(entry_name(i, j)) for j in range(1, n + 1)] for i in range(1, n + 1)]


def random_matrix(n: int, rng: random.Random) -> list[list[Fraction]]:
    return [[random_rational(rng) for _ in range(n)] for _ in range(n)]


def random_instance(n: int, rng: random.Random):
    A = random_matrix(n, rng)
    return A, CoeffWindow.random(rng, max(n - 1, 0))


def transform_matrix(A: Sequence[Sequence[Any]], phi: str) -> list[list]:
    """``sigma(A)[i,j] = A[n+1-j, i]``, ``tau(A)[i,j] = A[j, i]``."""
    n = len(A)
    if phi == "sigma":
        return [[A[n - 1 - j][i] for j in range(n)] for i in range(n)]
    if phi == "tau":
        return [[A[j][i] for j in range(n)] for i in range(n)]
    raise ValueError(f"unknown symmetry {phi!r}")


def transform_coeffs(coeffs: CoeffWindow, phi: str) -> CoeffWindow:
    return coeffs.sigma() if phi == "sigma" else coeffs.tau()


# ---------------------------------------------------------------------------
# cross-method harness
# ---------------------------------------------------------------------------


METHODS: dict[str, Callable] = {
    "dodgson": dodgson,
    "tsystem": lambda_det_via_tsystem,
    "asm": asm_sum,
    "statistics": statistics_form,
    "lgv": lgv_lambda_det,
    "chips": lambda_det_via_chips,
}

DEFAULT_METHODS = ("dodgson", "tsystem", "asm", "statistics", "lgv")


@dataclass
class CrossCheckReport:
    description: str
    values: dict[str, Any]
    errors: dict[str, str]
    timings: dict[str, float]

    @property
    def agreement(self) -> bool:
        vals = list(self.values.values())
        return not self.errors and all(v == vals[0] for v in vals[1:])

    @property
    def partial_agreement(self) -> bool:
        vals = list(self.values.values())
        return bool(vals) and all(v == vals[0] for v in vals[1:])

    @property
    def value(self):
        return next(iter(self.values.values()), None)


def cross_check(A, coeffs: CoeffWindow, methods: Sequence[str] = DEFAULT_METHODS, description: str = "") -> CrossCheckReport:
    values, errors, timings = {}, {}, {}
    for m in methods:
        fn = METHODS[m]
        t0 = time.perf_counter()
        try:
            values[m] = fn(A, coeffs)
        except (GLambdaError, ZeroDivisionError, ArithmeticError) as exc:
            errors[m] = f"{type(exc).__name__}: {exc}"
        timings[m] = time.perf_counter() - t0
    return CrossCheckReport(description, values, errors, timings)


def require_agreement(report: CrossCheckReport) -> None:
    vals = list(report.values.items())
    for name, v in vals[1:]:
        if v != vals[0][1]:
            raise MismatchAt(f"{vals[0][0]} vs {name}", vals[0][1], v)
