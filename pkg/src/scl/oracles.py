"""Independent reference computations and seeded random generators.

The slab oracle measures unions and intersections of planar triangles with
interval arithmetic on vertical slabs, sharing no code with the cone
engine. Generators build covers, chains and scattered dissections whose
correctness holds by construction.
"""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations
from typing import Callable, Sequence

from . import cones
from .geometry import (
    Cover,
    Euclidean,
    Polytope,
    Subspace,
    polytope_from_cells,
    to_ray,
)

Tri = tuple  # three (x, y) points


# -- slab oracle ---------------------------------------------------------------------

def _seg_x_crossings(a, b, c, d) -> list[Fraction]:
    """x-coordinates where segment ab meets segment cd (proper or collinear-free)."""
    den = (b[0] - a[0]) * (d[1] - c[1]) - (b[1] - a[1]) * (d[0] - c[0])
    if den == 0:
        return []
    t = ((c[0] - a[0]) * (d[1] - c[1]) - (c[1] - a[1]) * (d[0] - c[0])) / den
    s = ((c[0] - a[0]) * (b[1] - a[1]) - (c[1] - a[1]) * (b[0] - a[0])) / den
    if 0 <= t <= 1 and 0 <= s <= 1:
        return [a[0] + t * (b[0] - a[0])]
    return []


def _section(tri: Tri, x: Fraction) -> tuple[Fraction, Fraction] | None:
    """The vertical cross-section of a triangle at x (x strictly inside a slab)."""
    ys = []
    for k in range(3):
        p, q = tri[k], tri[(k + 1) % 3]
        if p[0] == q[0]:
            continue
        lo, hi = min(p[0], q[0]), max(p[0], q[0])
        if lo <= x <= hi:
            ys.append(p[1] + (x - p[0]) * (q[1] - p[1]) / (q[0] - p[0]))
    if len(ys) < 2:
        return None
    return min(ys), max(ys)


def _measure(intervals: list[tuple[Fraction, Fraction]]) -> Fraction:
    total = Fraction(0)
    end = None
    for a, b in sorted(intervals):
        if end is None or a > end:
            total += b - a
            end = b
        elif b > end:
            total += b - end
            end = b
    return total


def slab_area(groups: Sequence[Sequence[Tri]], mode: Callable[[list[bool]], bool] = any) -> Fraction:
    """Area of the set of points whose membership vector in the groups satisfies ``mode``.

    Each group is a union of triangles. Within a slab between consecutive
    breakpoints every cross-section is linear in x, so the midpoint rule is exact.
    """
    tris = [[tuple(tuple(Fraction(c) for c in v) for v in t) for t in g] for g in groups]
    flat = [t for g in tris for t in g]
    xs = {v[0] for t in flat for v in t}
    edges = [(t[k], t[(k + 1) % 3]) for t in flat for k in range(3)]
    for (a, b), (c, d) in combinations(edges, 2):
        xs.update(_seg_x_crossings(a, b, c, d))
    xs = sorted(xs)
    area = Fraction(0)
    for x0, x1 in zip(xs, xs[1:]):
        xm = (x0 + x1) / 2
        secs = [[s for s in (_section(t, xm) for t in g) if s] for g in tris]
        # elementary y-intervals at the midpoint
        ys = sorted({y for g in secs for s in g for y in s})
        length = Fraction(0)
        for y0, y1 in zip(ys, ys[1:]):
            ym = (y0 + y1) / 2
            member = [any(a <= ym <= b for a, b in g) for g in secs]
            if mode(member):
                length += y1 - y0
        area += length * (x1 - x0)
    return area


def union_area_inclusion_exclusion(groups: Sequence[Sequence[Tri]]) -> Fraction:
    """Area of a union of polygons by inclusion-exclusion over their intersections."""
    total = Fraction(0)
    for k in range(1, len(groups) + 1):
        for S in combinations(range(len(groups)), k):
            total += (-1) ** (k + 1) * slab_area([groups[i] for i in S], all)
    return total


def interval_union_length(intervals: Sequence[tuple]) -> Fraction:
    return _measure([(Fraction(min(a, b)), Fraction(max(a, b))) for a, b in intervals])


# -- random generators ---------------------------------------------------------------

def rand_q(rng: random.Random, bound: int = 8) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_triangle(rng: random.Random, bound: int = 8) -> Tri:
    while True:
        t = tuple((rand_q(rng, bound), rand_q(rng, bound)) for _ in range(3))
        (a, b), (c, d), (e, f) = t
        if (c - a) * (f - b) - (d - b) * (e - a):
            return t


def random_polygon(rng: random.Random, max_triangles: int = 3, bound: int = 8) -> Polytope:
    return Polytope.make("E2", [random_triangle(rng, bound) for _ in range(rng.randint(1, max_triangles))])


def _random_line(rng: random.Random, P: Polytope) -> tuple[int, ...]:
    """A random homogeneous line a0 + a1 x + a2 y = 0 through a point near P."""
    verts = P.vertex_set()
    p = rng.choice(verts)
    qv = rng.choice(verts)
    mid = tuple((x + y) / 2 + Fraction(rng.randint(-2, 2), 7) for x, y in zip(p, qv))
    a1, a2 = rng.randint(-4, 4), rng.randint(-4, 4)
    if a1 == a2 == 0:
        a1 = 1
    a0 = -(a1 * mid[0] + a2 * mid[1])
    den = a0.denominator
    return cones.canon([int(a0 * den), a1 * den, a2 * den])


def random_cover(rng: random.Random, P: Polytope, cuts: int = 2, max_pieces: int = 4) -> Cover:
    """A weak subdivision of P: cut its cells by random lines, then group cells at random."""
    arr = cones.build_arrangement(P.cells())
    cells = list(arr.cells)
    lines = [_random_line(rng, P) for _ in range(cuts)]
    fine = [c for cell in cells for c in cones.split_all(cell, lines)]
    k = rng.randint(1, min(max_pieces, len(fine)))
    rng.shuffle(fine)
    groups = [fine[i::k] for i in range(k)]
    return Cover(P, [polytope_from_cells(P.geometry, g) for g in groups])


def random_interval_stage(rng: random.Random, count: int = 3) -> list[Polytope]:
    """Almost-disjoint intervals of E1."""
    pts = sorted({Fraction(rng.randint(0, 40), rng.randint(1, 4)) for _ in range(2 * count + 2)})
    out = []
    for k in range(0, len(pts) - 1, 2):
        out.append(Polytope.make("E1", [[(pts[k],), (pts[k + 1],)]]))
    return out[:count] or [Polytope.make("E1", [[(0,), (1,)]])]


def _subdivide_simplex(rng: random.Random, S: Polytope) -> list[Polytope]:
    cell = S.cells()[0]
    if S.geometry == Euclidean(1):
        a, b = sorted(v[0] for v in S.simplices[0].vertices)
        cut = a + (b - a) * Fraction(rng.randint(1, 4), 5)
        return [Polytope.make("E1", [[(a,), (cut,)]]), Polytope.make("E1", [[(cut,), (b,)]])]
    line = _random_line(rng, S)
    out = []
    for c in cones.split_all(cell, [line]):
        for s in cones.pulling_triangulation(c):
            out.append(polytope_from_cells(S.geometry, [cones.simplex_cell(s)]))
    return out


def random_chain(rng: random.Random, geometry: str, stages: int = 3) -> list[list[Polytope]]:
    """A chain of subdivision moves: refine some simplices and add disjoint new ones."""
    if geometry == "E1":
        stage = random_interval_stage(rng)
    else:
        P = random_polygon(rng, 2, 6)
        stage = [polytope_from_cells(P.geometry, [c]) for c in _normal_cells(P)]
    chain = [stage]
    for k in range(stages - 1):
        nxt = []
        for S in stage:
            nxt += _subdivide_simplex(rng, S) if rng.random() < 0.6 else [S]
        shift = Fraction(100 * (k + 1))
        extra = stage[0].simplices[0].vertices
        nxt.append(Polytope.make(geometry, [[tuple(x + shift for x in v) for v in extra]]))
        chain.append(nxt)
        stage = nxt
    return chain


def _normal_cells(P: Polytope) -> list:
    arr = cones.build_arrangement(P.cells())
    return [cones.simplex_cell(s) for c in arr.cells for s in cones.pulling_triangulation(c)]


def scattered_copy(rng: random.Random, P: Polytope, cuts: int = 1) -> Polytope:
    """Cut P by random lines and move each piece by its own translation or point reflection."""
    cover = random_cover(rng, P, cuts=cuts, max_pieces=3)
    out = []
    for i, piece in enumerate(cover.pieces):
        s = rng.choice((1, -1))
        t = (Fraction(40 * (i + 1) + rng.randint(0, 5)), rand_q(rng, 6))
        for simp in piece.simplices:
            out.append([tuple(s * x + tt for x, tt in zip(v, t)) for v in simp.vertices])
    return Polytope.make("E2", out)


def random_subspace_pair(rng: random.Random, n: int = 4) -> tuple[Subspace, Subspace]:
    """V < W <= Q^n with dim V >= 1 and dim W >= dim V + 1."""
    while True:
        dw = rng.randint(2, n)
        W = Subspace.span([[rng.randint(-2, 2) for _ in range(n)] for _ in range(dw)], ambient=n)
        if W.dim < 2:
            continue
        dv = rng.randint(1, W.dim - 1)
        coeffs = [[rng.randint(-2, 2) for _ in range(W.dim)] for _ in range(dv)]
        V = Subspace.span([[sum(c * b[j] for c, b in zip(row, W.basis)) for j in range(n)] for row in coeffs],
                          ambient=n)
        if 1 <= V.dim < W.dim:
            return V, W


def ray_of(P: Polytope, v) -> tuple[int, ...]:
    return to_ray(P.geometry, v)
