"""Alternating sign matrices and six-vertex configurations with domain wall boundaries.

Edge orientation convention used throughout (1-based ASM indices ``(i, j)``):

* the horizontal edge to the right of ``(i, j)`` points right iff the row partial
  sum ``b[i,1] + ... + b[i,j]`` is 0, and left iff it is 1;
* the vertical edge below ``(i, j)`` points up iff the column partial sum
  ``b[1,j] + ... + b[i,j]`` is 0, and down iff it is 1.

So external horizontal edges point into the grid and external vertical edges
point out of it. A zero entry is ``a1`` when both edges at it point right/up,
``a2`` when left/down, ``b1`` when right/down and ``b2`` when left/up; entries
1 and -1 are ``c1`` and ``c2``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import CapExceeded, InvalidGrid, NotASM

VERTEX_TYPES = ("a1", "a2", "b1", "b2", "c1", "c2")

# (left edge, right edge, top edge, bottom edge) for each vertex type;
# horizontal edges are "R"/"L", vertical edges "U"/"D".
EDGE_TABLE = {
    "a1": ("R", "R", "U", "U"),
    "a2": ("L", "L", "D", "D"),
    "b1": ("R", "R", "D", "D"),
    "b2": ("L", "L", "U", "U"),
    "c1": ("R", "L", "U", "D"),
    "c2": ("L", "R", "D", "U"),
}

SIGMA_TYPES = {"a1": "b2", "b1": "a1", "a2": "b1", "b2": "a2", "c1": "c1", "c2": "c2"}
TAU_TYPES = {"a1": "a1", "b1": "b2", "a2": "a2", "b2": "b1", "c1": "c1", "c2": "c2"}

DEFAULT_ENUM_CAP = 7


def enumeration_cap(default: int = DEFAULT_ENUM_CAP) -> int:
    env = os.environ.get("LAMBDADET_CAP")
    return int(env) if env else default


@dataclass(frozen=True)
class AlternatingSignMatrix:
    entries: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        """1-based access ``B[i, j]``."""
        i, j = ij
        return self.entries[i - 1][j - 1]

    def rows(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    @property
    def minus_positions(self) -> list[tuple[int, int]]:
        return [(i + 1, j + 1) for i, row in enumerate(self.entries) for j, v in enumerate(row) if v == -1]

    def __str__(self):
        return "\n".join(" ".join(f"{v:2d}" for v in row) for row in self.entries)


@dataclass(frozen=True)
class SixVertexGrid:
    types: tuple[tuple[str, ...], ...]

    @property
    def n(self) -> int:
        return len(self.types)

    def __getitem__(self, ij: tuple[int, int]) -> str:
        i, j = ij
        return self.types[i - 1][j - 1]

    def count(self, kind: str) -> int:
        return sum(row.count(kind) for row in self.types)


@dataclass
class AsmStatistics:
    inv: int
    minus_count: int
    counts: dict[str, int]
    I: dict[int, int]
    I_prime: dict[int, int]
    minus_positions: list[tuple[int, int]] = field(default_factory=list)


# ---------------------------------------------------------------------------
# validation / enumeration
# ---------------------------------------------------------------------------


def validate_asm(m: Sequence[Sequence[int]]) -> AlternatingSignMatrix:
    """Check the ASM rules and return the validated matrix.

    Raises :class:`NotASM` naming the first offending row or column.
    """
    rows = [tuple(int(v) for v in r) for r in m]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise NotASM("matrix", 0, "squareness")
    for i, r in enumerate(rows, 1):
        if any(v not in (-1, 0, 1) for v in r):
            raise NotASM("row", i, "entries in {-1,0,1}")
    for kind, lines in (("row", rows), ("column", list(zip(*rows)))):
        for idx, line in enumerate(lines, 1):
            s = 0
            for v in line:
                s += v
                if s < 0:
                    raise NotASM(kind, idx, "non-negative partial sums")
                if s > 1:
                    raise NotASM(kind, idx, "partial sums at most 1")
            if s != 1:
                raise NotASM(kind, idx, "sum equal to 1")
    return AlternatingSignMatrix(tuple(rows))


def _row_choices(n: int, colsum: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """All admissible next rows given the current column partial sums (each 0/1)."""
    row = [0] * n

    def rec(j: int, s: int):
        if j == n:
            if s == 1:
                yield tuple(row)
            return
        # values in increasing order keeps the output lexicographic
        for v in (-1, 0, 1):
            ns = s + v
            nc = colsum[j] + v
            if ns < 0 or ns > 1 or nc < 0 or nc > 1:
                continue
            row[j] = v
            yield from rec(j + 1, ns)
        row[j] = 0

    yield from rec(0, 0)


def enumerate_asm(n: int, cap: int | None = None) -> Iterator[AlternatingSignMatrix]:
    """Every ``n x n`` ASM exactly once, in lexicographic order of row-reading."""
    if n < 0:
        raise ValueError("n must be non-negative")
    cap = enumeration_cap() if cap is None else cap
    if n > cap:
        raise CapExceeded(f"ASM enumeration at n={n} exceeds the cap {cap}")
    if n == 0:
        yield AlternatingSignMatrix(())
        return

    def rec(rows: list, colsum: tuple[int, ...]):
        if len(rows) == n:
            if all(c == 1 for c in colsum):
                yield AlternatingSignMatrix(tuple(rows))
            return
        remaining = n - len(rows)
        for r in _row_choices(n, colsum):
            nc = tuple(c + v for c, v in zip(colsum, r))
            # every column still at 0 needs a future 1; there are at most `remaining-1` rows left
            if sum(1 for c in nc if c == 0) > (remaining - 1) * n:
                continue
            rows.append(r)
            yield from rec(rows, nc)
            rows.pop()

    yield from rec([], (0,) * n)


@lru_cache(maxsize=None)
def all_asms(n: int) -> tuple[AlternatingSignMatrix, ...]:
    """Cached tuple of :func:`enumerate_asm` (respects the cap)."""
    return tuple(enumerate_asm(n))


# ---------------------------------------------------------------------------
# six-vertex bijection
# ---------------------------------------------------------------------------


def asm_to_sixv(B: AlternatingSignMatrix) -> SixVertexGrid:
    n = B.n
    e = B.entries
    colsum = [0] * n
    out = []
    for i in range(n):
        r = 0
        row = []
        for j in range(n):
            v = e[i][j]
            r += v
            colsum[j] += v
            if v == 1:
                row.append("c1")
            elif v == -1:
                row.append("c2")
            else:
                row.append({(0, 0): "a1", (1, 1): "a2", (0, 1): "b1", (1, 0): "b2"}[(r, colsum[j])])
        out.append(tuple(row))
    return SixVertexGrid(tuple(out))


def check_grid(g: SixVertexGrid) -> None:
    """Edge consistency plus domain wall boundary conditions; raises :class:`InvalidGrid`."""
    n = g.n
    t = g.types
    for i in range(n):
        if len(t[i]) != n:
            raise InvalidGrid(f"row {i + 1} has length {len(t[i])}, expected {n}")
        for j in range(n):
            if t[i][j] not in EDGE_TABLE:
                raise InvalidGrid(f"unknown vertex type {t[i][j]!r} at ({i + 1},{j + 1})")
    for i in range(n):
        for j in range(n):
            left, right, top, bottom = EDGE_TABLE[t[i][j]]
            if j == 0 and left != "R":
                raise InvalidGrid(f"DWBC: left external edge of row {i + 1} must point into the grid")
            if j == n - 1 and right != "L":
                raise InvalidGrid(f"DWBC: right external edge of row {i + 1} must point into the grid")
            if i == 0 and top != "U":
                raise InvalidGrid(f"DWBC: top external edge of column {j + 1} must point out of the grid")
            if i == n - 1 and bottom != "D":
                raise InvalidGrid(f"DWBC: bottom external edge of column {j + 1} must point out of the grid")
            if j + 1 < n and right != EDGE_TABLE[t[i][j + 1]][0]:
                raise InvalidGrid(f"edge between ({i + 1},{j + 1}) and ({i + 1},{j + 2}) is inconsistent")
            if i + 1 < n and bottom != EDGE_TABLE[t[i + 1][j]][2]:
                raise InvalidGrid(f"edge between ({i + 1},{j + 1}) and ({i + 2},{j + 1}) is inconsistent")


def sixv_to_asm(g: SixVertexGrid) -> AlternatingSignMatrix:
    check_grid(g)
    m = [[1 if v == "c1" else -1 if v == "c2" else 0 for v in row] for row in g.types]
    return validate_asm(m)


# ---------------------------------------------------------------------------
# statistics
# ---------------------------------------------------------------------------


def inversion_number(B: AlternatingSignMatrix) -> int:
    """``Inv(B) = sum_{k<l, m<p} b[k,p] b[l,m]``."""
    n = B.n
    e = B.entries
    # suffix[l][m] = sum of b[l', m'] for l' > l, m' < m  (0-based, exclusive)
    total = 0
    for k in range(n):
        for p in range(n):
            if e[k][p]:
                s = 0
                for l in range(k + 1, n):
                    for m in range(p):
                        s += e[l][m]
                total += e[k][p] * s
    return total


def _first_nonzero(line: Sequence[int]) -> int:
    for v in line:
        if v:
            return v
    return 0


def statistics(B: AlternatingSignMatrix) -> AsmStatistics:
    n = B.n
    e = B.entries
    I = {a: 0 for a in range(2 - n, n - 1)}
    I_prime = {a: 0 for a in range(2 - n, n - 1)}
    for i in range(n):
        for j in range(n):
            if e[i][j]:
                continue
            right = _first_nonzero(e[i][j + 1:])
            below = _first_nonzero([e[r][j] for r in range(i + 1, n)])
            above = _first_nonzero([e[r][j] for r in range(i - 1, -1, -1)])
            if right == 1 and below == 1:
                I[j - i] = I.get(j - i, 0) + 1
            if right == 1 and above == 1:
                a = (i + 1) + (j + 1) - n - 1
                I_prime[a] = I_prime.get(a, 0) + 1
    g = asm_to_sixv(B)
    return AsmStatistics(
        inv=inversion_number(B),
        minus_count=len(B.minus_positions),
        counts={t: g.count(t) for t in VERTEX_TYPES},
        I=I,
        I_prime=I_prime,
        minus_positions=B.minus_positions,
    )


# ---------------------------------------------------------------------------
# symmetries
# ---------------------------------------------------------------------------


def symmetry_transform(B: AlternatingSignMatrix, phi: str) -> AlternatingSignMatrix:
    """``sigma(B)[i,j] = B[n+1-j, i]`` (quarter turn) or ``tau(B)[i,j] = B[j,i]`` (transpose)."""
    n = B.n
    e = B.entries
    if phi == "sigma":
        rows = [tuple(e[n - 1 - j][i] for j in range(n)) for i in range(n)]
    elif phi == "tau":
        rows = [tuple(e[j][i] for j in range(n)) for i in range(n)]
    else:
        raise ValueError(f"unknown symmetry {phi!r}")
    return AlternatingSignMatrix(tuple(rows))


def transform_grid(g: SixVertexGrid, phi: str) -> SixVertexGrid:
    """Move vertices as the matrix symmetry does and relabel types by the flip table."""
    n = g.n
    t = g.types
    if phi == "sigma":
        rows = [tuple(SIGMA_TYPES[t[n - 1 - j][i]] for j in range(n)) for i in range(n)]
    elif phi == "tau":
        rows = [tuple(TAU_TYPES[t[j][i]] for j in range(n)) for i in range(n)]
    else:
        raise ValueError(f"unknown symmetry {phi!r}")
    return SixVertexGrid(tuple(rows))


@dataclass
class BalanceReport:
    balanced: bool
    diagonal: dict[int, tuple[int, int]]
    antidiagonal: dict[int, tuple[int, int]]
    violations: list[str]


def diagonal_balance(g: SixVertexGrid) -> BalanceReport:
    """Count a1/a2 along each diagonal ``j - i = a`` and b1/b2 along each anti-diagonal ``i + j = s``."""
    n = g.n
    diag: dict[int, list[int]] = {a: [0, 0] for a in range(1 - n, n)}
    anti: dict[int, list[int]] = {s: [0, 0] for s in range(2, 2 * n + 1)}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            v = g[i, j]
            if v == "a1":
                diag[j - i][0] += 1
            elif v == "a2":
                diag[j - i][1] += 1
            elif v == "b1":
                anti[i + j][0] += 1
            elif v == "b2":
                anti[i + j][1] += 1
    violations = [f"diagonal {a}: a1={x} a2={y}" for a, (x, y) in diag.items() if x != y]
    violations += [f"anti-diagonal {s}: b1={x} b2={y}" for s, (x, y) in anti.items() if x != y]
    return BalanceReport(
        balanced=not violations,
        diagonal={a: tuple(v) for a, v in diag.items()},
        antidiagonal={s: tuple(v) for s, v in anti.items()},
        violations=violations,
    )
