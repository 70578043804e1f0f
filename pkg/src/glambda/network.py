"""Directed triangular-lattice networks and non-intersecting path families.

Vertices are the points ``(x, y)`` with ``x + y`` even and
``|x| + |y - n + 1| <= n - 1``. Every step increases ``x``:

* ``R``: ``(x, y) -> (x+1, y+1)``
* ``H``: ``(x, y) -> (x+2, y)``
* ``D``: ``(x, y) -> (x+1, y-1)``

Paths start at ``s_i = (1-i, i-1)`` and end at ``e_j = (j-1, j-1)``. The
down-pointing triangle hanging below ``(x-1, y+1)--(x+1, y+1)`` with bottom vertex
``(x, y)`` carries the matrix entry ``a[(x-y)/2 + n, (x+y)/2 + 1]``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Any, Iterator, Sequence

from .asm6v import AlternatingSignMatrix, SixVertexGrid, sixv_to_asm
from .errors import CapExceeded, UnclassifiableTriangle, WindowMiss, ZeroFaceLabel
from .exact import exact_div, is_zero
from .linalg import determinant
from .tsystem import CoeffWindow, InitialData

DEFAULT_FAMILY_CAP = 5

Point = tuple[int, int]


@dataclass(frozen=True)
class Edge:
    src: Point
    dst: Point
    kind: str  # "R", "H" or "D"
    weight: Any


@dataclass
class TriangularNetwork:
    n: int
    vertices: list[Point]
    out_edges: dict[Point, list[Edge]]
    exit_factors: list[Any]
    variant: str = "lambda_det"

    @property
    def sources(self) -> list[Point]:
        return [(1 - i, i - 1) for i in range(1, self.n + 1)]

    @property
    def exits(self) -> list[Point]:
        return [(j - 1, j - 1) for j in range(1, self.n + 1)]

    def edges(self) -> Iterator[Edge]:
        for v in self.vertices:
            yield from self.out_edges.get(v, [])

    def edge(self, src: Point, kind: str) -> Edge | None:
        for e in self.out_edges.get(src, []):
            if e.kind == kind:
                return e
        return None

    def is_acyclic(self) -> bool:
        return all(e.dst[0] > e.src[0] for e in self.edges())

    def to_dot(self) -> str:
        lines = ["digraph network {", "  rankdir=LR;"]
        for x, y in self.vertices:
            lines.append(f'  "{x},{y}" [pos="{x},{y}!"];')
        for e in self.edges():
            lines.append(f'  "{e.src[0]},{e.src[1]}" -> "{e.dst[0]},{e.dst[1]}" [label="{e.kind}: {e.weight}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def domain(n: int) -> list[Point]:
    pts = []
    for x in range(1 - n, n):
        for y in range(0, 2 * n - 1):
            if (x + y) % 2 == 0 and abs(x) + abs(y - n + 1) <= n - 1:
                pts.append((x, y))
    return sorted(pts)


def face_position(x: int, y: int, n: int) -> tuple[int, int]:
    """1-based matrix position of the down-triangle with bottom vertex ``(x, y)``."""
    return (x - y) // 2 + n, (x + y) // 2 + 1


def _alpha(A, n: int, x: int, y: int):
    i, j = face_position(x, y, n)
    if not (1 <= i <= n and 1 <= j <= n):
        raise AssertionError(f"face label outside the matrix at vertex {(x, y)}")
    return A[i - 1][j - 1]


def _boundary_coeff(get, idx: int, n: int):
    """Edges indexed outside ``[2-n, n-2]`` never carry a non-intersecting family, so a
    window that stops there is still enough; those edges then get weight 1."""
    if 2 - n <= idx <= n - 2:
        return get(idx)
    try:
        return get(idx)
    except WindowMiss:
        return 1


def build_network(A: Sequence[Sequence[Any]], coeffs: CoeffWindow) -> TriangularNetwork:
    """The network whose ``n x n`` path-determinant (with exit scaling) is ``|A|``."""
    n = len(A)
    pts = domain(n)
    inside = set(pts)
    out: dict[Point, list[Edge]] = {}
    for x, y in pts:
        es = []
        if (x + 1, y + 1) in inside:
            es.append(Edge((x, y), (x + 1, y + 1), "R", _boundary_coeff(coeffs.lam, y + 1 - n, n)))
        needs_ratio = (x + 2, y) in inside or (x + 1, y - 1) in inside
        if needs_ratio:
            den = _alpha(A, n, x + 1, y - 1)
            if is_zero(den):
                raise ZeroFaceLabel(*face_position(x + 1, y - 1, n))
            ratio = exact_div(_alpha(A, n, x, y), den)
            if (x + 2, y) in inside:
                es.append(Edge((x, y), (x + 2, y), "H", _boundary_coeff(coeffs.mu, x + 1, n) * ratio))
            if (x + 1, y - 1) in inside:
                es.append(Edge((x, y), (x + 1, y - 1), "D", ratio))
        out[(x, y)] = es
    exit_factors = [A[n - 1][j - 1] for j in range(1, n + 1)]
    return TriangularNetwork(n, pts, out, exit_factors, "lambda_det")


def build_general_network(init: InitialData, coeffs: CoeffWindow) -> TriangularNetwork:
    """Network for arbitrary initial data.

    Down-triangles carry the odd-layer values ``t[y+1-n, x]``; the up-triangle with
    base ``(x, y)--(x+2, y)`` carries the even-layer value ``t[y+1-n, x+1]``. Steps
    ``R`` and ``H`` leaving ``v`` are multiplied by the label of the up-triangle
    with apex ``v`` and divided by the one whose base starts at ``v``.
    """
    n = init.n
    t = init.t
    pts = domain(n)
    inside = set(pts)

    def down(x, y):
        return t[(y + 1 - n, x)]

    def up(x, y):
        return t.get((y + 1 - n, x + 1), 1)

    out: dict[Point, list[Edge]] = {}
    for x, y in pts:
        es = []
        up_factor = None
        if (x + 1, y + 1) in inside or (x + 2, y) in inside:
            base = up(x, y)
            if is_zero(base):
                raise ZeroFaceLabel(y + 1 - n, x + 1)
            up_factor = exact_div(up(x - 1, y - 1), base)
        if (x + 1, y + 1) in inside:
            es.append(Edge((x, y), (x + 1, y + 1), "R", _boundary_coeff(coeffs.lam, y + 1 - n, n) * up_factor))
        if (x + 2, y) in inside or (x + 1, y - 1) in inside:
            den = down(x + 1, y - 1)
            if is_zero(den):
                raise ZeroFaceLabel(y - n, x + 1)
            ratio = exact_div(down(x, y), den)
            if (x + 2, y) in inside:
                es.append(Edge((x, y), (x + 2, y), "H", _boundary_coeff(coeffs.mu, x + 1, n) * ratio * up_factor))
            if (x + 1, y - 1) in inside:
                es.append(Edge((x, y), (x + 1, y - 1), "D", ratio))
        out[(x, y)] = es
    exit_factors = [t[(j - n, j - 1)] for j in range(1, n + 1)]
    return TriangularNetwork(n, pts, out, exit_factors, "general")


# ---------------------------------------------------------------------------
# partition functions and determinant
# ---------------------------------------------------------------------------


def _paths_from(net: TriangularNetwork, src: Point) -> dict[Point, Any]:
    acc: dict[Point, Any] = {src: 1}
    for v in net.vertices:  # sorted by x, which every edge increases
        if v not in acc:
            continue
        for e in net.out_edges.get(v, []):
            acc[e.dst] = acc.get(e.dst, 0) + acc[v] * e.weight
    return acc


def path_partition(net: TriangularNetwork, i: int, j: int):
    """Weighted count of all paths ``s_i -> e_j`` (no exit scaling)."""
    return _paths_from(net, net.sources[i - 1]).get(net.exits[j - 1], 0)


def partition_matrix(net: TriangularNetwork, scaled: bool = True) -> list[list]:
    rows = []
    for s in net.sources:
        acc = _paths_from(net, s)
        row = []
        for j, e in enumerate(net.exits):
            z = acc.get(e, 0)
            row.append(z * net.exit_factors[j] if scaled else z)
        rows.append(row)
    return rows


def lgv_lambda_det(A: Sequence[Sequence[Any]], coeffs: CoeffWindow):
    if len(A) == 0:
        return 1
    return determinant(partition_matrix(build_network(A, coeffs)))


def lgv_general(init: InitialData, coeffs: CoeffWindow):
    """``T[0,0,n]`` as a path determinant on the general network."""
    return determinant(partition_matrix(build_general_network(init, coeffs)))


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------


@dataclass
class PathFamily:
    paths: list[list[Edge]]
    starts: list[Point]
    weight: Any
    permutation: tuple[int, ...] = field(default=())

    def vertices(self) -> set[Point]:
        occ = set(self.starts)
        for p in self.paths:
            for e in p:
                occ.add(e.dst)
        return occ

    def used_edges(self) -> set[tuple[Point, Point]]:
        return {(e.src, e.dst) for p in self.paths for e in p}


def family_cap(default: int = DEFAULT_FAMILY_CAP) -> int:
    env = os.environ.get("LAMBDADET_CAP")
    return int(env) if env else default


def enumerate_families(net: TriangularNetwork, cap: int | None = None) -> list[PathFamily]:
    """All vertex-disjoint families ``s_i -> e_i``, topmost path first, with exit scaling."""
    n = net.n
    cap = family_cap() if cap is None else cap
    if n > cap:
        raise CapExceeded(f"family enumeration at n={n} exceeds the cap {cap}")
    out: list[PathFamily] = []
    occupied: set[Point] = set()
    chosen: list[list[Edge]] = [[] for _ in range(n)]
    exits = net.exits
    sources = net.sources

    def paths(v: Point, target: Point, trail: list[Edge]):
        if v == target:
            yield list(trail)
            return
        if v[0] >= target[0]:
            return
        for e in net.out_edges.get(v, []):
            if e.dst in occupied:
                continue
            occupied.add(e.dst)
            trail.append(e)
            yield from paths(e.dst, target, trail)
            trail.pop()
            occupied.discard(e.dst)

    def rec(k: int):
        if k < 0:
            w = 1
            for idx, p in enumerate(chosen):
                for e in p:
                    w = w * e.weight
                w = w * net.exit_factors[idx]
            out.append(PathFamily([list(p) for p in chosen], list(sources), w, tuple(range(1, n + 1))))
            return
        s = sources[k]
        if s in occupied:
            return
        occupied.add(s)
        for p in paths(s, exits[k], []):
            added = [e.dst for e in p]
            occupied.update(added)
            chosen[k] = p
            rec(k - 1)
            occupied.difference_update(added)
        occupied.discard(s)

    rec(n - 1)
    return out


def family_to_sixv(net: TriangularNetwork, f: PathFamily) -> tuple[SixVertexGrid, int, dict]:
    """Classify every down-triangle; returns the grid, the number of ``c2`` triangles
    and which of the two ``c2`` patterns each one uses (``"lambda"`` or ``"mu"``)."""
    n = net.n
    occ = f.vertices()
    used = f.used_edges()
    grid = [[None] * n for _ in range(n)]
    alt = {}
    m = 0
    for x, y in net.vertices:
        left, right = (x - 1, y + 1), (x + 1, y + 1)
        L = (left, (x, y)) in used
        R = ((x, y), right) in used
        H = (left, right) in used
        v = (x, y) in occ
        if not v:
            if L or R:
                raise UnclassifiableTriangle(f"edge into an empty vertex at {(x, y)}")
            kind = "c2" if H else "b2"
            if H:
                alt[face_position(x, y, n)] = "mu"
        elif L and R:
            kind = "c2"
            alt[face_position(x, y, n)] = "lambda"
        elif L:
            kind = "a2"
        elif R:
            if H:
                raise UnclassifiableTriangle(f"crossing paths at {(x, y)}")
            kind = "a1"
        else:
            kind = "b1" if H else "c1"
        if kind == "c2":
            m += 1
        i, j = face_position(x, y, n)
        grid[i - 1][j - 1] = kind
    return SixVertexGrid(tuple(tuple(r) for r in grid)), m, alt


def family_to_asm(net: TriangularNetwork, f: PathFamily) -> AlternatingSignMatrix:
    return sixv_to_asm(family_to_sixv(net, f)[0])
