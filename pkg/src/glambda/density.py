"""Density ``rho[i,j,k]``: the derivative of ``log T[i,j,k]`` with respect to ``t[0,0]``
at all-ones initial data, plus its generating-function and q-case checks."""

from __future__ import annotations

import csv

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import DivisionByZero, ViolationAt
from .exact import Jet, format_rational
from .tsystem import CoeffWindow, InitialData, solve_frame


@dataclass
class DensityTable:
    K: int
    values: dict[tuple[int, int, int], Fraction]

    def __getitem__(self, ijk) -> Fraction:
        """Zero outside the computed support (``i + j + k`` even or beyond the cone)."""
        return self.values.get(ijk, Fraction(0))

    def support(self) -> list[tuple[int, int, int]]:
        return sorted(p for p, v in self.values.items() if v)

    def layer_sum(self, k: int) -> Fraction:
        return sum((v for (i, j, kk), v in self.values.items() if kk == k), Fraction(0))


def rho_table(K: int, coeffs: CoeffWindow) -> DensityTable:
    """Evolve jets with ``t[0,0] = 1 + eps`` and every other value 1.

    The seed size is odd so ``t[0,0]`` sits on layer 1; it is large enough that every
    point with ``|i| + |j| <= K`` and ``k <= K`` is inside the pyramid.
    """
    if K < 1:
        raise ValueError("K must be at least 1")
    n = 2 * K + 1
    init = InitialData.constant(n, Jet(1))
    init.t[(0, 0)] = Jet(1, 1)
    frame = solve_frame(init, coeffs, kmax=K)
    values = {}
    for (i, j, k), v in frame.values.items():
        if abs(i) + abs(j) > K:
            continue
        if v.value == 0:
            raise DivisionByZero("T vanishes along the density sweep", where=(i, j, k))
        values[(i, j, k)] = v.log_derivative()
    return DensityTable(K, values)


@dataclass
class DensitySeries:
    """Coefficients of ``Z / (1 + Z^2 - Z (p (X + 1/X) + r (Y + 1/Y)))`` with
    ``p = lam / (lam + mu)`` and ``r = mu / (lam + mu)``."""

    lam: Fraction
    mu: Fraction
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.lam, self.mu = Fraction(self.lam), Fraction(self.mu)
        if self.lam + self.mu == 0:
            raise DivisionByZero("lambda + mu vanishes")
        self.p = self.lam / (self.lam + self.mu)
        self.r = self.mu / (self.lam + self.mu)

    def coeff(self, i: int, j: int, k: int) -> Fraction:
        if k <= 0 or abs(i) + abs(j) > k - 1:
            return Fraction(0)
        key = (i, j, k)
        if key in self._cache:
            return self._cache[key]
        c = Fraction(1) if key == (0, 0, 1) else Fraction(0)
        c -= self.coeff(i, j, k - 2)
        c += self.p * (self.coeff(i - 1, j, k - 1) + self.coeff(i + 1, j, k - 1))
        c += self.r * (self.coeff(i, j - 1, k - 1) + self.coeff(i, j + 1, k - 1))
        self._cache[key] = c
        return c


def rho_series_coeff(i: int, j: int, k: int, lam, mu) -> Fraction:
    return _series(Fraction(lam), Fraction(mu)).coeff(i, j, k)


@lru_cache(maxsize=32)
def _series(lam: Fraction, mu: Fraction) -> DensitySeries:
    return DensitySeries(lam, mu)


@dataclass
class FunctionalReport:
    K: int
    q: Fraction
    checked: int
    violations: list[tuple[tuple[int, int, int], Fraction, Fraction]]

    @property
    def ok(self) -> bool:
        return not self.violations


def q_functional_check(K: int, q, raise_on_violation: bool = False, stencil: str = "shifted") -> FunctionalReport:
    """Coefficient-wise q-case identity with ``w = q^(j-i)``:

    ``(rho[i,j,k] + rho[i,j,k-2] - rho[i-1,j,k-1] - rho[i+1,j,k-1])
      + w (rho[i,j,k] + rho[i,j,k-2] - rho[i,j-1,k-1] - rho[i,j+1,k-1])``
    equals 2 at ``(0,0,1)`` and 0 elsewhere. The neighbour terms carry the ``Z`` of
    the generating function, hence layer ``k - 1``. ``stencil="same_layer"`` reads
    them at layer ``k`` instead and checks every point; it does not hold.
    """
    if stencil not in ("shifted", "same_layer"):
        raise ValueError(f"unknown stencil {stencil!r}")
    q = Fraction(q)
    if q == 0:
        raise DivisionByZero("q must be non-zero")
    table = rho_table(K, CoeffWindow.q_power(q, 2 * K + 2))
    dk = 1 if stencil == "shifted" else 0
    r = table
    violations = []
    checked = 0
    for k in range(0, K + 1):
        for i in range(-(K - 1), K):
            for j in range(-(K - 1), K):
                # neighbours must stay inside |i| + |j| <= K
                if abs(i) + abs(j) > K - 1:
                    continue
                if dk and (i + j + k) % 2 == 0:
                    continue
                w = q ** (j - i)
                centre = r[(i, j, k)] + r[(i, j, k - 2)]
                lhs = (centre - r[(i - 1, j, k - dk)] - r[(i + 1, j, k - dk)]) + w * (
                    centre - r[(i, j - 1, k - dk)] - r[(i, j + 1, k - dk)]
                )
                rhs = Fraction(2) if (i, j, k) == (0, 0, 1) else Fraction(0)
                checked += 1
                if lhs != rhs:
                    violations.append(((i, j, k), lhs, rhs))
                    if raise_on_violation:
                        raise ViolationAt((i, j, k), lhs, rhs)
    return FunctionalReport(K, q, checked, violations)


def write_csv(table: DensityTable, fh) -> None:
    """Rows ``i,j,k,rho`` sorted by ``(k, i, j)``; values as exact rational strings."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["i", "j", "k", "rho"])
    for (i, j, k) in sorted(table.values, key=lambda p: (p[2], p[0], p[1])):
        w.writerow([i, j, k, format_rational(table.values[(i, j, k)])])
