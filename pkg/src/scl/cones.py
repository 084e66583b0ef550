"""Integer polyhedral-cone kernel.

Every polytope in this package, Euclidean or spherical, is handled as a union
of salient simplicial cones in Z^m: Euclidean points are homogenized with
x0 = 1, spherical points are rays. A convex cell keeps both its extreme rays
and a (possibly redundant) list of inequality normals ``g`` with ``g.x >= 0``.
Cells are split by hyperplanes with the double-description update, using the
rank test for ray adjacency.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

Ray = tuple  # tuple[int, ...]


def canon(v: Sequence[int]) -> Ray:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero ray")
    return tuple(x // g for x in v)


def canon_hyperplane(n: Sequence[int]) -> Ray:
    """Hyperplane normal up to sign: first nonzero entry positive."""
    n = canon(n)
    for x in n:
        if x:
            return n if x > 0 else tuple(-y for y in n)
    raise ValueError("zero normal")


def dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def int_rank(rows: Iterable[Sequence[int]]) -> int:
    """Rank of a small integer matrix (fraction-free elimination)."""
    A = [list(r) for r in rows if any(r)]
    if not A:
        return 0
    n = len(A[0])
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        p = A[r][c]
        for i in range(r + 1, len(A)):
            if A[i][c]:
                f = A[i][c]
                A[i] = [p * x - f * y for x, y in zip(A[i], A[r])]
        r += 1
        if r == len(A):
            break
    return r


def _null_vector(rows: list[Sequence[int]], m: int) -> list[int]:
    """An integer vector spanning the kernel of an (m-1) x m integer matrix of rank m-1."""
    # cofactor expansion: component j = (-1)^j det(rows without column j)
    out = []
    for j in range(m):
        sub = [[r[k] for k in range(m) if k != j] for r in rows]
        out.append((-1) ** j * _int_det(sub))
    return out


def _int_det(M: list[list[int]]) -> int:
    n = len(M)
    if n == 0:
        return 1
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    A = [list(map(Fraction, r)) for r in M]
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            d = -d
        d *= A[c][c]
        for i in range(c + 1, n):
            if A[i][c]:
                f = A[i][c] / A[c][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return int(d)


def int_det(M: list[list[int]]) -> int:
    return _int_det(M)


@dataclass(frozen=True)
class Cell:
    """A pointed convex cone: extreme rays plus valid inequalities (normals)."""

    rays: tuple[Ray, ...]
    normals: tuple[Ray, ...]

    @property
    def m(self) -> int:
        return len(self.rays[0])

    @property
    def key(self) -> frozenset:
        return frozenset(self.rays)

    def interior_point(self) -> Ray:
        return tuple(sum(c) for c in zip(*self.rays))

    def contains_strictly(self, p: Sequence[int]) -> bool:
        return all(dot(g, p) > 0 for g in self.facet_normals())

    def contains(self, p: Sequence[int]) -> bool:
        return all(dot(g, p) >= 0 for g in self.normals)

    def facet_normals(self) -> tuple[Ray, ...]:
        return _facet_normals(self)


@lru_cache(maxsize=200_000)
def _facet_normals(cell: Cell) -> tuple[Ray, ...]:
    m = cell.m
    dim = int_rank(cell.rays)
    out = []
    seen = set()
    for g in cell.normals:
        tight = [r for r in cell.rays if dot(g, r) == 0]
        if len(tight) >= dim - 1 and int_rank(tight) == dim - 1:
            k = frozenset(tight)
            if k not in seen:
                seen.add(k)
                out.append(g)
    if dim < m:
        raise ValueError("cell is not full-dimensional")
    return tuple(out)


def simplex_cell(rays: Sequence[Sequence[int]]) -> Cell:
    """Full-dimensional simplicial cone; raises on degenerate input."""
    rays = [canon(r) for r in rays]
    m = len(rays[0])
    if len(rays) != m or any(len(r) != m for r in rays):
        raise ValueError(f"a simplicial cone in Z^{m} needs {m} rays")
    if int_rank(rays) != m:
        raise ValueError("degenerate simplex (rays linearly dependent)")
    normals = []
    for i in range(m):
        others = [r for k, r in enumerate(rays) if k != i]
        if m == 1:
            n = [1]
        else:
            n = _null_vector(others, m)
        n = canon(n)
        if dot(n, rays[i]) < 0:
            n = tuple(-x for x in n)
        normals.append(n)
    return Cell(tuple(sorted(set(rays))), tuple(normals))


def facet_hyperplanes(cell: Cell) -> set[Ray]:
    return {canon_hyperplane(g) for g in cell.facet_normals()}


def split(cell: Cell, h: Ray) -> tuple[Cell | None, Cell | None]:
    """Split a cell by the hyperplane h.x = 0; returns (h >= 0 part, h <= 0 part)."""
    vals = [dot(h, r) for r in cell.rays]
    if all(v >= 0 for v in vals):
        return cell, None
    if all(v <= 0 for v in vals):
        return None, cell
    m = cell.m
    pos = [(r, v) for r, v in zip(cell.rays, vals) if v > 0]
    neg = [(r, v) for r, v in zip(cell.rays, vals) if v < 0]
    zero = [r for r, v in zip(cell.rays, vals) if v == 0]
    tight = {r: frozenset(i for i, g in enumerate(cell.normals) if dot(g, r) == 0)
             for r in cell.rays}
    new = []
    for p, vp in pos:
        for q, vq in neg:
            common = tight[p] & tight[q]
            if m == 2:
                ok = True
            elif m == 3:
                ok = bool(common)
            else:
                ok = len(common) >= m - 2 and int_rank(cell.normals[i] for i in common) == m - 2
            if ok:
                new.append(canon(tuple(vp * b - vq * a for a, b in zip(p, q))))
    mh = tuple(-x for x in h)
    plus = Cell(tuple(sorted(set([r for r, _ in pos] + zero + new))), cell.normals + (tuple(h),))
    minus = Cell(tuple(sorted(set([r for r, _ in neg] + zero + new))), cell.normals + (mh,))
    return plus, minus


def split_all(cell: Cell, hyperplanes: Iterable[Ray]) -> list[Cell]:
    cells = [cell]
    for h in hyperplanes:
        nxt = []
        for c in cells:
            a, b = split(c, h)
            if a is not None:
                nxt.append(a)
            if b is not None:
                nxt.append(b)
        cells = nxt
    return cells


def interiors_overlap(a: Cell, b: Cell) -> bool:
    """Exact test whether two full-dimensional cones share interior points."""
    for g in a.facet_normals():
        if all(dot(g, r) <= 0 for r in b.rays):
            return False
    for g in b.facet_normals():
        if all(dot(g, r) <= 0 for r in a.rays):
            return False
    cells = split_all(a, b.facet_normals())
    return any(b.contains_strictly(c.interior_point()) for c in cells)


@dataclass
class Arrangement:
    """Cells partitioning the union of a family of simplicial cones.

    ``cells[k]`` is convex and, for every input simplex, lies inside it or
    meets it in a null set; ``inside[k]`` lists the input simplices containing
    it. In global mode every cell is a chamber of the arrangement of all facet
    hyperplanes, so adjacent cells share faces exactly.
    """

    simplices: list[Cell]
    cells: list[Cell] = field(default_factory=list)
    inside: list[frozenset[int]] = field(default_factory=list)
    hyperplanes: list[Ray] = field(default_factory=list)


def _candidate_pairs(simplices: Sequence[Cell]) -> Iterable[tuple[int, int]]:
    """Index pairs that may overlap.

    When every ray has positive first coordinate (an affine chart), pairs are
    pruned by a sweep over open bounding boxes; otherwise all pairs are listed.
    """
    n = len(simplices)
    if not all(r[0] > 0 for s in simplices for r in s.rays) or simplices[0].m < 2:
        return ((i, j) for i in range(n) for j in range(i + 1, n))
    boxes = []
    for s in simplices:
        pts = [[Fraction(x, r[0]) for x in r[1:]] for r in s.rays]
        boxes.append([(min(c), max(c)) for c in zip(*pts)])
    order = sorted(range(n), key=lambda i: boxes[i][0][0])
    out = []
    for a, i in enumerate(order):
        hi = boxes[i][0][1]
        for j in order[a + 1:]:
            if boxes[j][0][0] >= hi:
                break
            if all(lo1 < hi2 and lo2 < hi1 for (lo1, hi1), (lo2, hi2) in zip(boxes[i][1:], boxes[j][1:])):
                out.append((min(i, j), max(i, j)))
    return sorted(out)


def build_arrangement(simplices: Sequence[Cell], mode: str = "local") -> Arrangement:
    simplices = list(simplices)
    arr = Arrangement(simplices)
    if not simplices:
        return arr
    hp_of = [sorted(facet_hyperplanes(s)) for s in simplices]
    all_hp = sorted(set().union(*map(set, hp_of)))
    arr.hyperplanes = all_hp
    n = len(simplices)
    ident: dict[frozenset, int] = {}
    for i, s in enumerate(simplices):
        ident.setdefault(s.key, i)
    # overlap graph
    nbrs: list[list[int]] = [[] for _ in range(n)]
    for i, j in _candidate_pairs(simplices):
        if simplices[i].key == simplices[j].key or interiors_overlap(simplices[i], simplices[j]):
            nbrs[i].append(j)
            nbrs[j].append(i)
    for nb in nbrs:
        nb.sort()
    for i, s in enumerate(simplices):
        if ident[s.key] != i:
            continue  # duplicate simplex; cells already produced
        if mode == "global":
            own = set(hp_of[i])
            for c in split_all(s, [h for h in all_hp if h not in own]):
                p = c.interior_point()
                ins = frozenset([i] + [j for j in nbrs[i] if simplices[j].contains_strictly(p)])
                if not any(j < i for j in ins):
                    arr.cells.append(c)
                    arr.inside.append(ins)
            continue
        for c, ins in _overlay(s, i, [(j, simplices[j]) for j in nbrs[i]]):
            if not any(j < i for j in ins):
                arr.cells.append(c)
                arr.inside.append(ins)
    return arr


def _separated(a: Cell, b: Cell) -> bool:
    """A facet of one cone weakly separates the other (sufficient for disjoint interiors)."""
    for g in a.facet_normals():
        if all(dot(g, r) <= 0 for r in b.rays):
            return True
    for g in b.facet_normals():
        if all(dot(g, r) <= 0 for r in a.rays):
            return True
    return False


@lru_cache(maxsize=200_000)
def _fbox(c: Cell) -> tuple[tuple[float, float], ...]:
    pts = [[x / r[0] for x in r[1:]] for r in c.rays]
    return tuple((min(v), max(v)) for v in zip(*pts))


def _fbox_apart(a, b) -> bool:
    """Boxes clearly disjoint; the margin absorbs float rounding, so this never errs toward 'apart'."""
    for (lo1, hi1), (lo2, hi2) in zip(a, b):
        eps = 1e-9 * (1.0 + abs(lo1) + abs(hi1) + abs(lo2) + abs(hi2))
        if hi1 < lo2 - eps or hi2 < lo1 - eps:
            return True
    return False


def _overlay(s: Cell, i: int, others: Sequence[tuple[int, Cell]]) -> list[tuple[Cell, frozenset]]:
    """Cut s by the simplices in ``others`` one at a time.

    Only cells meeting the current simplex are cut, by its facet hyperplanes;
    the part on the inner side of all of them is inside it, the rest is not.
    """
    cells: list[tuple[Cell, frozenset]] = [(s, frozenset([i]))]
    chart = all(r[0] > 0 for r in s.rays)
    for j, t in others:
        tb = _fbox(t) if chart and all(r[0] > 0 for r in t.rays) else None
        nxt = []
        for c, ins in cells:
            if c.key == t.key:
                nxt.append((c, ins | {j}))
                continue
            if (tb is not None and _fbox_apart(_fbox(c), tb)) or _separated(c, t):
                nxt.append((c, ins))
                continue
            rest = c
            for g in t.facet_normals():
                plus, minus = split(rest, g)
                if minus is not None and plus is not None:
                    nxt.append((minus, ins))
                elif plus is None:
                    nxt.append((minus, ins))
                    rest = None
                    break
                rest = plus
            if rest is not None:
                nxt.append((rest, ins | {j}))
        cells = nxt
    return cells


def faces(cell: Cell) -> dict[int, set[frozenset]]:
    """All faces of a pointed cone, by dimension, as frozensets of extreme rays."""
    dim = int_rank(cell.rays)
    out: dict[int, set[frozenset]] = {dim: {frozenset(cell.rays)}}
    frontier = {frozenset(cell.rays)}
    d = dim
    while d > 1:
        nxt = set()
        for F in frontier:
            for g in cell.normals:
                sub = frozenset(r for r in F if dot(g, r) == 0)
                if len(sub) >= d - 1 and sub != F and int_rank(sub) == d - 1:
                    nxt.add(sub)
        d -= 1
        out[d] = nxt
        frontier = nxt
    return out


def pulling_triangulation(cell: Cell) -> list[tuple[Ray, ...]]:
    """Triangulate a pointed cone into simplicial cones using only its own rays."""
    m = cell.m

    def rec(F: frozenset, d: int) -> list[tuple]:
        if len(F) == d:
            return [tuple(sorted(F))]
        v0 = min(F)
        out = []
        seen = set()
        for g in cell.normals:
            if dot(g, v0) == 0:
                continue
            sub = frozenset(r for r in F if dot(g, r) == 0)
            if len(sub) >= d - 1 and int_rank(sub) == d - 1 and sub not in seen:
                seen.add(sub)
                for s in rec(sub, d - 1):
                    out.append(tuple(sorted(s + (v0,))))
        return out

    return rec(frozenset(cell.rays), m)


def coning_triangulation(cells: Sequence[Cell]) -> tuple[set[tuple], dict[frozenset, list[tuple]]]:
    """Consistent triangulation of a family of chambers that share faces exactly.

    Each face that is not already simplicial is coned from the sum of its
    rays (an interior point), after its boundary has been triangulated.
    Returns the set of all simplices (closed under faces) and, per cell,
    its top simplices.
    """
    memo: dict[frozenset, list[tuple]] = {}

    def tri(F: frozenset, d: int, normals) -> list[tuple]:
        if F in memo:
            return memo[F]
        if len(F) == d:
            res = [tuple(sorted(F))]
        else:
            apex = canon(tuple(sum(c) for c in zip(*F)))
            res = []
            seen = set()
            for g in normals:
                sub = frozenset(r for r in F if dot(g, r) == 0)
                if sub != F and len(sub) >= d - 1 and sub not in seen and int_rank(sub) == d - 1:
                    seen.add(sub)
                    for s in tri(sub, d - 1, normals):
                        res.append(tuple(sorted(s + (apex,))))
        memo[F] = res
        return res

    per_cell = {}
    for c in cells:
        per_cell[c.key] = tri(c.key, c.m, c.normals)
    simplices: set[tuple] = set()
    for tops in per_cell.values():
        for s in tops:
            _add_faces(s, simplices)
    return simplices, per_cell


def _add_faces(s: tuple, acc: set) -> None:
    if s in acc:
        return
    acc.add(s)
    if len(s) > 1:
        for i in range(len(s)):
            _add_faces(s[:i] + s[i + 1:], acc)
