"""T-system with index-dependent coefficients.

The relation evolved here is

    T[i,j,k+1] * T[i,j,k-1] = mu[j] * T[i,j+1,k] * T[i,j-1,k] + lam[i] * T[i+1,j,k] * T[i-1,j,k]

on points with ``i + j + k = n (mod 2)``. Initial data of size ``n`` sits on the
diamond ``|i| + |j| <= n - 1`` at layer ``(i + j + n) mod 2``.

Also here: the deformed condensation recursion on contiguous minors, the
q-power closed forms, the chip-matrix products for the two extreme tilings of the
diamond, and the exchange-matrix mutation check.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Mapping, Sequence

from .errors import (
    DivisionByZero,
    MismatchAt,
    OrderDependence,
    WindowMiss,
    WindowTooSmall,
)
from .exact import PolyRing, exact_div, is_zero
from .linalg import determinant, identity, leading_minor

# ---------------------------------------------------------------------------
# coefficients
# ---------------------------------------------------------------------------


class CoeffWindow:
    """Finite windows of the sequences ``lam[a]`` and ``mu[b]``.

    ``lambda_shift``/``mu_shift`` are added to every requested index, which is how
    shifted sequences are represented without copying.
    """

    def __init__(self, lam: Mapping[int, Any], mu: Mapping[int, Any], lambda_shift: int = 0, mu_shift: int = 0):
        self._lam = {int(a): v for a, v in lam.items()}
        self._mu = {int(b): v for b, v in mu.items()}
        for which, d in (("lambda", self._lam), ("mu", self._mu)):
            for a, v in d.items():
                if is_zero(v):
                    raise ValueError(f"{which}_{a} is zero; coefficients must be non-zero")
        self.lambda_shift = lambda_shift
        self.mu_shift = mu_shift

    # lookups ------------------------------------------------------------
    def lam(self, a: int):
        idx = a + self.lambda_shift
        try:
            return self._lam[idx]
        except KeyError:
            raise WindowMiss("lambda", idx) from None

    def mu(self, b: int):
        idx = b + self.mu_shift
        try:
            return self._mu[idx]
        except KeyError:
            raise WindowMiss("mu", idx) from None

    def shifted(self, dl: int = 0, dm: int = 0) -> "CoeffWindow":
        out = CoeffWindow.__new__(CoeffWindow)
        out._lam, out._mu = self._lam, self._mu
        out.lambda_shift = self.lambda_shift + dl
        out.mu_shift = self.mu_shift + dm
        return out

    @property
    def lambdas(self) -> dict[int, Any]:
        return {a - self.lambda_shift: v for a, v in self._lam.items()}

    @property
    def mus(self) -> dict[int, Any]:
        return {b - self.mu_shift: v for b, v in self._mu.items()}

    def covers(self, lo: int, hi: int) -> bool:
        return all(a + self.lambda_shift in self._lam and a + self.mu_shift in self._mu for a in range(lo, hi + 1))

    def require(self, n: int, lo: int | None = None, hi: int | None = None) -> None:
        """Raise :class:`WindowTooSmall` unless indices ``[2-n, n-2]`` (or ``[lo, hi]``) are stored."""
        lo = 2 - n if lo is None else lo
        hi = n - 2 if hi is None else hi
        for a in range(lo, hi + 1):
            if a + self.lambda_shift not in self._lam:
                raise WindowTooSmall(f"lambda_{a} is missing for a {n}x{n} instance")
            if a + self.mu_shift not in self._mu:
                raise WindowTooSmall(f"mu_{a} is missing for a {n}x{n} instance")

    # symmetries -----------------------------------------------------------
    def sigma(self) -> "CoeffWindow":
        """``lam'[a] = mu[-a]``, ``mu'[a] = lam[a]`` (quarter turn)."""
        lam, mu = self.lambdas, self.mus
        return CoeffWindow({-b: v for b, v in mu.items()}, dict(lam))

    def tau(self) -> "CoeffWindow":
        """``lam'[a] = lam[-a]``, ``mu'[a] = mu[a]`` (transpose)."""
        lam, mu = self.lambdas, self.mus
        return CoeffWindow({-a: v for a, v in lam.items()}, dict(mu))

    # constructors ---------------------------------------------------------
    @classmethod
    def homogeneous(cls, lam=1, mu=1, radius: int = 8) -> "CoeffWindow":
        idx = range(-radius, radius + 1)
        return cls({a: lam for a in idx}, {a: mu for a in idx})

    @classmethod
    def q_power(cls, q, radius: int = 8) -> "CoeffWindow":
        q = Fraction(q)
        idx = range(-radius, radius + 1)
        return cls({a: q**a for a in idx}, {a: q**a for a in idx})

    @classmethod
    def random(cls, rng: random.Random, radius: int = 8) -> "CoeffWindow":
        idx = range(-radius, radius + 1)
        lam = {a: random_rational(rng) for a in idx}
        mu = {a: random_rational(rng) for a in idx}
        return cls(lam, mu)

    @classmethod
    def symbolic(cls, ring: PolyRing, radius: int) -> "CoeffWindow":
        idx = [a for a in range(-radius, radius + 1) if lambda_name(a) in ring.index]
        return cls({a: ring.gen(lambda_name(a)) for a in idx}, {a: ring.gen(mu_name(a)) for a in idx})

    def __repr__(self):
        return f"CoeffWindow(lambda={self.lambdas!r}, mu={self.mus!r})"


def lambda_name(a: int) -> str:
    return f"lam[{a}]"


def mu_name(b: int) -> str:
    return f"mu[{b}]"


def random_rational(rng: random.Random) -> Fraction:
    """Non-zero integer in [-9, 9] over an integer in [1, 4]."""
    num = 0
    while num == 0:
        num = rng.randint(-9, 9)
    return Fraction(num, rng.randint(1, 4))


# ---------------------------------------------------------------------------
# initial data and evolution
# ---------------------------------------------------------------------------


def diamond(n: int) -> list[tuple[int, int]]:
    """Lattice points ``(i, j)`` with ``|i| + |j| <= n - 1``."""
    return [(i, j) for i in range(1 - n, n) for j in range(1 - n, n) if abs(i) + abs(j) <= n - 1]


@dataclass
class InitialData:
    """Values ``t[i,j]`` on the size-``n`` diamond; ``t[i,j]`` lives at layer ``(i+j+n) % 2``."""

    n: int
    t: dict[tuple[int, int], Any]

    def __post_init__(self):
        expected = set(diamond(self.n))
        if set(self.t) != expected:
            missing = sorted(expected - set(self.t))
            extra = sorted(set(self.t) - expected)
            raise ValueError(f"initial data domain mismatch: missing {missing[:4]}, extra {extra[:4]}")

    def layer(self, i: int, j: int) -> int:
        return (i + j + self.n) % 2

    @classmethod
    def constant(cls, n: int, value=1) -> "InitialData":
        return cls(n, {p: value for p in diamond(n)})

    @classmethod
    def from_matrix(cls, A: Sequence[Sequence[Any]]) -> "InitialData":
        """Ones on the even layer, matrix entries on the odd one."""
        n = len(A)
        t = {}
        for i, j in diamond(n):
            if (i + j + n) % 2 == 0:
                t[(i, j)] = 1
            else:
                row, col = (j - i + n + 1) // 2, (i + j + n + 1) // 2
                t[(i, j)] = A[row - 1][col - 1]
        return cls(n, t)

    @classmethod
    def random(cls, n: int, rng: random.Random) -> "InitialData":
        return cls(n, {p: random_rational(rng) for p in diamond(n)})

    @classmethod
    def symbolic(cls, n: int, ring: PolyRing) -> "InitialData":
        return cls(n, {(i, j): ring.gen(t_name(i, j)) for i, j in diamond(n)})


def t_name(i: int, j: int) -> str:
    return f"t[{i},{j}]"


def matrix_entry_position(i: int, j: int, n: int) -> tuple[int, int]:
    """The 1-based matrix position whose entry sits at odd-layer point ``(i, j)``."""
    return (j - i + n + 1) // 2, (i + j + n + 1) // 2


@dataclass
class TSystemFrame:
    n: int
    values: dict[tuple[int, int, int], Any] = field(default_factory=dict)

    def __getitem__(self, ijk):
        return self.values[ijk]

    def __contains__(self, ijk):
        return ijk in self.values


def _step(frame_values, coeffs: CoeffWindow, i: int, j: int, k: int):
    """Compute ``T[i,j,k]`` from layers ``k-1`` and ``k-2``."""
    v = frame_values
    num = coeffs.mu(j) * v[(i, j + 1, k - 1)] * v[(i, j - 1, k - 1)] + coeffs.lam(i) * v[(i + 1, j, k - 1)] * v[(i - 1, j, k - 1)]
    den = v[(i, j, k - 2)]
    if is_zero(den):
        raise DivisionByZero("vanishing T-system denominator", where=(i, j, k - 2))
    return exact_div(num, den)


def _seed(init: InitialData) -> dict:
    return {(i, j, init.layer(i, j)): val for (i, j), val in init.t.items()}


def solve_frame(init: InitialData, coeffs: CoeffWindow, kmax: int | None = None) -> TSystemFrame:
    """Every value of the pyramid ``|i| + |j| <= n - k`` up to layer ``kmax``."""
    n = init.n
    kmax = n if kmax is None else kmax
    vals = _seed(init)
    for k in range(2, kmax + 1):
        r = n - k
        for i in range(-r, r + 1):
            for j in range(-(r - abs(i)), r - abs(i) + 1):
                if (i + j + k - n) % 2 == 0:
                    vals[(i, j, k)] = _step(vals, coeffs, i, j, k)
    return TSystemFrame(n, vals)


def evolve(init: InitialData, coeffs: CoeffWindow, target: tuple[int, int, int], return_frame: bool = False):
    """``T`` at ``target`` by a layered sweep restricted to the target's backward cone."""
    n = init.n
    i0, j0, k0 = target
    if (i0 + j0 + k0 - n) % 2:
        raise ValueError(f"target {target} has the wrong parity for size {n}")
    if k0 < 0 or abs(i0) + abs(j0) > n - k0:
        raise ValueError(f"target {target} lies outside the pyramid of size {n}")
    vals = _seed(init)
    if k0 <= 1:
        out = vals[(i0, j0, k0)]
        return (out, TSystemFrame(n, vals)) if return_frame else out
    for k in range(2, k0 + 1):
        r = k0 - k
        for di in range(-r, r + 1):
            for dj in range(-(r - abs(di)), r - abs(di) + 1):
                if (di + dj + r) % 2:
                    continue
                vals[(i0 + di, j0 + dj, k)] = _step(vals, coeffs, i0 + di, j0 + dj, k)
    out = vals[(i0, j0, k0)]
    return (out, TSystemFrame(n, vals)) if return_frame else out


def lambda_det_via_tsystem(A: Sequence[Sequence[Any]], coeffs: CoeffWindow):
    n = len(A)
    if n == 0:
        return 1
    return evolve(InitialData.from_matrix(A), coeffs, (0, 0, n))


# ---------------------------------------------------------------------------
# deformed condensation
# ---------------------------------------------------------------------------

# (lambda shift, mu shift) applied to the four (k-1)-minors, in the order
# drop-first-row-and-col, drop-last-row-and-col, drop-first-row-last-col, drop-last-row-first-col.
_SHIFTS = {
    "absolute": ((0, 1), (0, -1), (-1, 0), (1, 0)),
    "literal": ((1, 1), (-1, -1), (-1, 1), (1, -1)),
}


def dodgson(A: Sequence[Sequence[Any]], coeffs: CoeffWindow, convention: str = "absolute"):
    """Deformed condensation on contiguous minors.

    ``convention="absolute"`` shifts only the coefficient sequence that changes
    with the minor's position, so a block of size ``k`` with top-left corner
    ``(r, c)`` uses ``lam[c - r]`` and ``mu[r + c + k - n - 2]``; this is the
    bookkeeping that matches the T-system solution. ``"literal"`` shifts both
    sequences on every branch and is kept for comparison.
    """
    n = len(A)
    try:
        s11, snn, s1n, sn1 = _SHIFTS[convention]
    except KeyError:
        raise ValueError(f"unknown convention {convention!r}") from None
    memo: dict = {}

    def block(r: int, c: int, k: int, sl: int, sm: int):
        if k == 0:
            return 1
        if k == 1:
            return A[r][c]
        key = (r, c, k, sl, sm)
        if key in memo:
            return memo[key]
        lam = coeffs.lam(sl)
        mu = coeffs.mu(sm)
        a11 = block(r + 1, c + 1, k - 1, sl + s11[0], sm + s11[1])
        ann = block(r, c, k - 1, sl + snn[0], sm + snn[1])
        a1n = block(r + 1, c, k - 1, sl + s1n[0], sm + s1n[1])
        an1 = block(r, c + 1, k - 1, sl + sn1[0], sm + sn1[1])
        centre = block(r + 1, c + 1, k - 2, sl, sm)
        if is_zero(centre):
            raise DivisionByZero(
                "vanishing central minor",
                where=f"rows {r + 2}..{r + k - 1}, cols {c + 2}..{c + k - 1}",
            )
        val = exact_div(mu * a11 * ann + lam * a1n * an1, centre)
        memo[key] = val
        return val

    return block(0, 0, n, 0, 0)


# ---------------------------------------------------------------------------
# q-power closed forms
# ---------------------------------------------------------------------------


def soltij_closed_form(i: int, j: int, k: int, q) -> Fraction:
    """Closed-form solution for all-ones data on layers 0, 1 and ``lam[a] = mu[a] = q**a``."""
    q = Fraction(q)
    if q == 0:
        raise DivisionByZero("q must be non-zero")
    d = abs(i - j)
    out = q ** (k * (k - 1) // 2 * min(i, j))
    for m in range(1, (k - d) // 2 + 1):
        for a in range(2 * m - k + d, k - d - 2 * m + 1):
            out *= 1 + q**a
    for m in range(1, d + 1):
        for a in range(m, k - d + 2 * m - 2 + 1):
            out *= 1 + q**a
    return out


def q_product(n: int, q) -> Fraction:
    q = Fraction(q)
    if q == 0:
        raise DivisionByZero("q must be non-zero")
    out = Fraction(1)
    for m in range(1, n // 2 + 1):
        for j in range(2 * m - n, n - 2 * m + 1):
            out *= 1 + q**j
    return out


def tsystem_all_ones(i: int, j: int, k: int, coeffs: CoeffWindow):
    """``T[i,j,k]`` for all-ones values on layers 0 and 1, by the layered sweep."""
    # layer-0 points need |i| + |j| <= n - 1, so pad by 2 to keep the parity
    n = abs(i) + abs(j) + k + (2 if k == 0 else 0)
    return evolve(InitialData.constant(n), coeffs, (i, j, k))


# ---------------------------------------------------------------------------
# chip products for the two extreme tilings
# ---------------------------------------------------------------------------

# triangle of the unit square with lower-left corner (x0, y0) -> chip kind
TRIANGLE_KIND = {"LL": "U", "LR": "U'", "UR": "V", "UL": "V'"}
_CENTROID = {"LL": Fraction(1, 3), "UL": Fraction(1, 3), "LR": Fraction(2, 3), "UR": Fraction(2, 3)}


@dataclass(frozen=True)
class UVChip:
    """One elementary 2x2 factor.

    ``vertices`` are the lattice points ``(x, y)`` feeding the labels ``(d, a, b)``
    for V-type chips and ``(a, b, c)`` for U-type chips; the vertex ``(x, y)``
    carries the value indexed ``[y, x]``. ``lam_index``/``mu_index`` are ``None``
    when the corresponding edge is not thickened.
    """

    kind: str
    position: int
    vertices: tuple[tuple[int, int], ...]
    lam_index: int | None
    mu_index: int | None
    square: tuple[int, int]
    triangle: str

    def labels(self, value: Callable[[int, int], Any]) -> tuple:
        return tuple(value(y, x) for x, y in self.vertices)

    def matrix(self, value: Callable[[int, int], Any], coeffs: CoeffWindow) -> list[list]:
        lam = coeffs.lam(self.lam_index) if self.lam_index is not None else 1
        mu = coeffs.mu(self.mu_index) if self.mu_index is not None else 1
        p, q, r = self.labels(value)
        if is_zero(q if self.kind in ("U", "U'") else r):
            raise DivisionByZero("vanishing chip label", where=self.vertices[1 if self.kind in ("U", "U'") else 2])
        if self.kind in ("V", "V'"):
            d, a, b = p, q, r
            top = exact_div(a, b)
            if self.kind == "V":
                top = mu * top
            return [[top, lam * exact_div(d, b)], [0, 1]]
        a, b, c = p, q, r
        bottom = exact_div(a, b)
        if self.kind == "U'":
            bottom = mu * bottom
        return [[1, 0], [exact_div(c, b), bottom]]

    def describe(self) -> str:
        sub = "".join(str(self.position))
        return f"{self.kind}{sub}"


@dataclass
class ChipPlan:
    n: int
    flavor: str
    chips: list[UVChip]

    @property
    def matrix_size(self) -> int:
        return 2 * self.n - 2

    def sequence(self) -> list[str]:
        return [c.describe() for c in self.chips]


def _in_diamond(n: int, pts) -> bool:
    return all(abs(x) + abs(y) <= n - 1 for x, y in pts)


def _triangle_vertices(tri: str, x0: int, y0: int) -> tuple:
    if tri == "LL":
        return ((x0, y0), (x0 + 1, y0), (x0, y0 + 1))
    if tri == "LR":
        return ((x0, y0), (x0 + 1, y0), (x0 + 1, y0 + 1))
    if tri == "UR":
        return ((x0 + 1, y0), (x0, y0 + 1), (x0 + 1, y0 + 1))
    if tri == "UL":
        return ((x0, y0), (x0, y0 + 1), (x0 + 1, y0 + 1))
    raise ValueError(tri)


def _cut(flavor: str, x0: int, y0: int) -> str:
    """``"anti"`` (lower-left / upper-right halves) or ``"main"`` (lower-right / upper-left)."""
    if flavor == "theta_min":
        return "anti"
    return "anti" if (x0 < 0) == (y0 < 0) else "main"


def _grey_triangles(flavor: str, n: int, x0: int, y0: int) -> list[str]:
    if flavor == "theta_min":
        return ["LL", "UR"] if (x0 + y0 + n) % 2 == 0 else []
    if x0 < 0:
        return ["LL"] if y0 < 0 else ["LR"]
    return ["UL"] if y0 < 0 else ["UR"]


def _make_chip(n: int, tri: str, x0: int, y0: int) -> UVChip:
    kind = TRIANGLE_KIND[tri]
    pos = y0 + n - 1 if kind in ("U", "U'") else y0 + n
    lam_index = y0 + 1 if kind in ("V", "V'") else None
    mu_index = x0 + 1 if kind in ("V", "U'") else None
    return UVChip(kind, pos, _triangle_vertices(tri, x0, y0), lam_index, mu_index, (x0, y0), tri)


def _lane_slots(flavor: str, chip: UVChip) -> dict[int, Fraction]:
    """Horizontal position of the chip inside each of its two lanes.

    Lane ``p`` is the horizontal strip ``p - n <= y <= p - n + 1``. A chip occupies
    its own grey triangle in one lane and, across its horizontal edge, the
    neighbouring white triangle in the other.
    """
    x0, y0 = chip.square
    own = x0 + _CENTROID[chip.triangle]
    if chip.kind in ("U", "U'"):
        partner = "UR" if _cut(flavor, x0, y0 - 1) == "anti" else "UL"
        return {chip.position + 1: own, chip.position: x0 + _CENTROID[partner]}
    partner = "LL" if _cut(flavor, x0, y0 + 1) == "anti" else "LR"
    return {chip.position: own, chip.position + 1: x0 + _CENTROID[partner]}


def build_plan(flavor: str, n: int) -> ChipPlan:
    """Chip sequence for ``theta_min`` or ``theta_max`` of size ``n``, in product order."""
    if flavor not in ("theta_min", "theta_max"):
        raise ValueError(f"unknown flavor {flavor!r}")
    chips = []
    for x0 in range(-n, n + 1):
        for y0 in range(-n, n + 1):
            for tri in _grey_triangles(flavor, n, x0, y0):
                if _in_diamond(n, _triangle_vertices(tri, x0, y0)):
                    chips.append(_make_chip(n, tri, x0, y0))
    slots = [_lane_slots(flavor, c) for c in chips]
    # chips sharing a lane must appear in left-to-right order along it
    preds: list[set[int]] = [set() for _ in chips]
    lanes: dict[int, list[tuple[Fraction, int]]] = {}
    for idx, s in enumerate(slots):
        for lane, x in s.items():
            lanes.setdefault(lane, []).append((x, idx))
    for entries in lanes.values():
        entries.sort()
        for (_, a), (_, b) in zip(entries, entries[1:]):
            preds[b].add(a)
    own_x = [c.square[0] + _CENTROID[c.triangle] for c in chips]
    done: list[int] = []
    placed: set[int] = set()
    while len(done) < len(chips):
        ready = [i for i in range(len(chips)) if i not in placed and preds[i] <= placed]
        if not ready:
            raise RuntimeError("cyclic chip constraints")
        nxt = min(ready, key=lambda i: (own_x[i], chips[i].position))
        done.append(nxt)
        placed.add(nxt)
    return ChipPlan(n, flavor, [chips[i] for i in done])


def _right_multiply(M: list[list], chip_m: list[list], pos: int) -> None:
    p, q = pos - 1, pos
    (e11, e12), (e21, e22) = chip_m
    for row in M:
        x, y = row[p], row[q]
        row[p] = x * e11 + y * e21
        row[q] = x * e12 + y * e22


def build_theta(flavor: str, values: Mapping[tuple[int, int], Any], coeffs: CoeffWindow, n: int) -> list[list]:
    """Product of the embedded chips; ``values[(i, j)]`` is attached to vertex ``(x, y) = (j, i)``."""
    plan = build_plan(flavor, n)
    M = identity(plan.matrix_size)
    getter = lambda i, j: values[(i, j)]
    for chip in plan.chips:
        _right_multiply(M, chip.matrix(getter, coeffs), chip.position)
    return M


def u_values(frame: TSystemFrame) -> dict[tuple[int, int], Any]:
    n = frame.n
    return {(i, j): frame[(i, j, n - abs(i) - abs(j))] for i, j in diamond(n)}


def soltsys_value(a_min, init: InitialData):
    """``T[0,0,n]`` recovered from the leading minor of the first chip product."""
    n = init.n
    t = init.t
    out = a_min
    for i in range(2 - n, 0):
        out = exact_div(out, t[(i, 1 - n - i)])
    for i in range(2 - n, 1):
        out = out * t[(i, n - 1 + i)]
    return out


@dataclass
class ThetaReport:
    n: int
    theta_equal: bool
    minors_equal: bool
    soltsys_ok: bool
    a_min: Any
    a_max: Any
    central: Any

    @property
    def ok(self) -> bool:
        return self.theta_equal and self.minors_equal and self.soltsys_ok


def theta_identity_check(n: int, init: InitialData, coeffs: CoeffWindow, raise_on_mismatch: bool = True) -> ThetaReport:
    if n < 2:
        raise ValueError("the chip identity needs n >= 2")
    frame = solve_frame(init, coeffs)
    tmin = build_theta("theta_min", init.t, coeffs, n)
    tmax = build_theta("theta_max", u_values(frame), coeffs, n)
    theta_equal = True
    for r in range(len(tmin)):
        for c in range(len(tmin)):
            if tmin[r][c] != tmax[r][c]:
                theta_equal = False
                if raise_on_mismatch:
                    raise MismatchAt((r + 1, c + 1), tmin[r][c], tmax[r][c])
    a_min = determinant(leading_minor(tmin, n - 1))
    a_max = determinant(leading_minor(tmax, n - 1))
    central = frame[(0, 0, n)]
    sol = soltsys_value(a_min, init)
    if raise_on_mismatch and a_min != a_max:
        raise MismatchAt("leading minor", a_min, a_max)
    if raise_on_mismatch and sol != central:
        raise MismatchAt("central value", sol, central)
    return ThetaReport(n, theta_equal, a_min == a_max, sol == central, a_min, a_max, central)


def soltsys_check(n: int, init: InitialData, coeffs: CoeffWindow) -> bool:
    tmin = build_theta("theta_min", init.t, coeffs, n)
    a_min = determinant(leading_minor(tmin, n - 1))
    return soltsys_value(a_min, init) == evolve(init, coeffs, (0, 0, n))


def lambda_det_via_chips(A: Sequence[Sequence[Any]], coeffs: CoeffWindow):
    """Leading minor of the first chip product times the boundary entries of ``A``."""
    n = len(A)
    if n == 1:
        return A[0][0]
    init = InitialData.from_matrix(A)
    tmin = build_theta("theta_min", init.t, coeffs, n)
    out = determinant(leading_minor(tmin, n - 1))
    for i in range(2, n + 1):
        out = exact_div(out, A[i - 1][0])
    for j in range(1, n + 1):
        out = out * A[n - 1][j - 1]
    return out


# ---------------------------------------------------------------------------
# exchange matrix mutation
# ---------------------------------------------------------------------------

Vertex = tuple  # ("v", i, j) mutable, ("lam", a) or ("mu", b) frozen


@dataclass
class ExtendedExchangeMatrix:
    """Sparse skew-symmetric exchange data on a finite window ``|i|, |j| <= radius``."""

    radius: int
    entries: dict[tuple[Vertex, Vertex], int]
    mutable: list[Vertex]
    frozen: list[Vertex]

    def get(self, u: Vertex, v: Vertex) -> int:
        return self.entries.get((u, v), 0)

    def set(self, u: Vertex, v: Vertex, value: int) -> None:
        if value:
            self.entries[(u, v)] = value
            self.entries[(v, u)] = -value
        else:
            self.entries.pop((u, v), None)
            self.entries.pop((v, u), None)

    def copy(self) -> "ExtendedExchangeMatrix":
        return ExtendedExchangeMatrix(self.radius, dict(self.entries), list(self.mutable), list(self.frozen))

    def neighbours(self, k: Vertex) -> list[Vertex]:
        return [v for (u, v) in self.entries if u == k]

    @classmethod
    def initial(cls, radius: int) -> "ExtendedExchangeMatrix":
        R = radius
        mutable = [("v", i, j) for i in range(-R, R + 1) for j in range(-R, R + 1)]
        frozen = [("lam", a) for a in range(-R, R + 1)] + [("mu", b) for b in range(-R, R + 1)]
        m = cls(R, {}, mutable, frozen)
        for _, i, j in mutable:
            if (i + j) % 2 == 0:
                continue
            # filled vertex (i + j odd) against its open neighbours
            for di, dj, val in ((0, 1, 1), (0, -1, 1), (1, 0, -1), (-1, 0, -1)):
                i2, j2 = i + di, j + dj
                if abs(i2) <= R and abs(j2) <= R:
                    m.set(("v", i, j), ("v", i2, j2), val)
        for _, i, j in mutable:
            filled = (i + j) % 2 == 1
            m.set(("lam", i), ("v", i, j), 1 if filled else -1)
            m.set(("mu", j), ("v", i, j), -1 if filled else 1)
        return m

    def mutate(self, k: Vertex) -> None:
        """Standard matrix mutation at ``k`` (full skew-symmetric form)."""
        nb = self.neighbours(k)
        old = {v: self.get(k, v) for v in nb}
        updates = {}
        for u in nb:
            for v in nb:
                if u == v:
                    continue
                buk, bkv = -old[u], old[v]
                if buk * bkv > 0:
                    sgn = 1 if buk > 0 else -1
                    updates[(u, v)] = self.get(u, v) + sgn * buk * bkv
        for (u, v), val in updates.items():
            self.entries[(u, v)] = val
            if not val:
                del self.entries[(u, v)]
        for v in nb:
            self.set(k, v, -old[v])

    def distance_to_boundary(self, v: Vertex) -> int:
        if v[0] == "v":
            return self.radius - max(abs(v[1]), abs(v[2]))
        return self.radius - abs(v[1])


@dataclass
class MutationReport:
    radius: int
    order_independent: bool
    flipped: bool
    restored: bool
    compared_entries: int
    mismatches: list[str]

    @property
    def ok(self) -> bool:
        return self.order_independent and self.flipped and self.restored


def _compound(m: ExtendedExchangeMatrix, parity: int, reverse: bool = False) -> ExtendedExchangeMatrix:
    out = m.copy()
    targets = [v for v in out.mutable if (v[1] + v[2]) % 2 == parity]
    for a in targets:
        for b in targets:
            if a != b and out.get(a, b):
                raise OrderDependence(f"scheduled mutations at {a} and {b} are adjacent")
    for v in reversed(targets) if reverse else targets:
        out.mutate(v)
    return out


def _interior_compare(m: ExtendedExchangeMatrix, ref: ExtendedExchangeMatrix, sign: int, depth: int = 2):
    mism = []
    count = 0
    inner = [v for v in m.mutable if m.distance_to_boundary(v) >= depth]
    rows = [v for v in m.mutable + m.frozen if m.distance_to_boundary(v) >= depth]
    for u in rows:
        for v in inner:
            count += 1
            if m.get(u, v) != sign * ref.get(u, v):
                mism.append(f"{u}->{v}: {m.get(u, v)} vs {sign * ref.get(u, v)}")
    return count, mism


def cluster_mutation_check(radius: int) -> MutationReport:
    """Mutate every filled vertex (``i + j`` odd), then every open one.

    The first compound mutation should reverse every interior arrow, the second
    should restore the initial matrix.
    """
    if radius < 3:
        raise ValueError("radius must be at least 3")
    b0 = ExtendedExchangeMatrix.initial(radius)
    b1 = _compound(b0, 1)
    b1r = _compound(b0, 1, reverse=True)
    order_ok = b1.entries == b1r.entries
    if not order_ok:
        raise OrderDependence("compound mutation depends on the order")
    n1, mism1 = _interior_compare(b1, b0, -1)
    b2 = _compound(b1, 0)
    n2, mism2 = _interior_compare(b2, b0, 1, depth=3)
    return MutationReport(radius, order_ok, not mism1, not mism2, n1 + n2, mism1 + mism2)
