from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from conftest import interval, square, triangle
from scl import oracles
from scl.geometry import (
    Cover,
    Isometry,
    Polytope,
    Simplex,
    Spherical,
    Subspace,
    apply_isometry,
    common_refinement,
    full_sphere,
    is_weak_subdivision,
    join_with_sphere,
    polytope_volume,
    refines,
    simplex_volume,
    span,
    triangulate,
)
from scl.pt_steinberg import pt_class, pt_equal

seeds = st.integers(0, 10**6)


def test_span_examples():
    assert span(interval(0, 1)) == Subspace.full(2)
    assert span(triangle((0, 0), (1, 0), (0, 1))).dim == 3
    assert span(Simplex(Spherical(1), ((1, 0), (-1, 0)))) == Subspace.span([[1, 0]])


def test_weak_subdivision_examples():
    sq = square()
    halves = [triangle((0, 0), (1, 0), (1, 1)), triangle((0, 0), (1, 1), (0, 1))]
    assert is_weak_subdivision(Cover(sq, halves)).ok
    rect = Polytope.make("E2", [[(0, 0), (1, 0), (1, Fraction(3, 2))], [(0, 0), (1, Fraction(3, 2)), (0, Fraction(3, 2))]])
    r = is_weak_subdivision(Cover(rect, [square(), square(0, Fraction(1, 2))]))
    assert not r.ok and r.overlaps and not r.uncovered
    r = is_weak_subdivision(Cover(sq, [triangle((0, 0), (1, 0), (0, 1))]))
    assert not r.ok and r.uncovered


def test_common_refinement_examples():
    sq = square()
    d1 = Cover(sq, [triangle((0, 0), (1, 0), (1, 1)), triangle((0, 0), (1, 1), (0, 1))])
    d2 = Cover(sq, [triangle((0, 0), (1, 0), (0, 1)), triangle((1, 0), (1, 1), (0, 1))])
    R = common_refinement(d1, d2)
    assert len(R.pieces) == 4 and all(polytope_volume(P) == Fraction(1, 4) for P in R.pieces)
    same = common_refinement(d1, d1)
    assert len(same.pieces) == 2
    for P, Q in zip(same.pieces, d1.pieces):
        assert pt_equal(pt_class([(1, P)]), pt_class([(1, Q)]))
    I = interval(0, 2)
    a = Cover(I, [interval(0, 1), interval(1, 2)])
    b = Cover(I, [interval(0, Fraction(1, 2)), interval(Fraction(1, 2), 2)])
    got = sorted(tuple(sorted(v[0] for v in P.simplices[0].vertices)) for P in common_refinement(a, b).pieces)
    assert got == [(0, Fraction(1, 2)), (Fraction(1, 2), 1), (1, 2)]


def test_triangulate_simplex():
    T = triangulate([triangle((0, 0), (1, 0), (0, 1))])
    assert len(T.top) == 1 and len(T.simplices) == 7


def test_triangulate_shared_half_edge():
    a, b = square(), square(1, Fraction(1, 2))
    T = triangulate([a, b])
    verts = {v for s in T.faces_of_dim(0) for v in s}
    assert all(v in verts for P in (a, b) for v in P.vertex_set())
    for P, mem in zip((a, b), T.members):
        assert pt_equal(pt_class([(1, P)]), pt_class([(1, Polytope.make("E2", [T.top[i] for i in mem]))]))


def test_triangulate_l_shape():
    L = [square(0, 0), square(1, 0), square(0, 1)]
    T = triangulate([Polytope.make("E2", [s.vertices for P in L for s in P.simplices])])
    assert sum(simplex_volume(s) for s in T.top) == Fraction(3, 4) * 4


def test_volumes():
    assert simplex_volume([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]) == Fraction(1, 6)
    assert simplex_volume([(0, 0), (1, 1), (2, 2)]) == 0
    assert simplex_volume([(0, 0), (2, 0), (0, 3)]) == 3


def test_join_examples():
    W = Subspace.full(3)
    plane = Subspace.span([[1, 0, 0], [0, 1, 0]])
    arc = Polytope.make("S1", [[(1, 0, 0), (0, 1, 0)]], frame=plane)
    lune = join_with_sphere(arc, plane, W)
    assert pt_equal(pt_class([(1, lune)]), pt_class([(1, Polytope.make(
        "S2", [[(1, 0, 0), (0, 1, 0), (0, 0, 1)], [(1, 0, 0), (0, 1, 0), (0, 0, -1)]]))]))
    whole = full_sphere(W)
    assert pt_class([(1, whole)]).value_at((1, 2, 3)) == 1
    e1 = Subspace.span([[1, 0]])
    half = join_with_sphere(Polytope.make("S0", [[(1, 0)]], frame=e1), e1)
    assert pt_equal(pt_class([(1, half)]), pt_class([(1, Polytope.make("S1", [[(1, 0), (0, 1)], [(1, 0), (0, -1)]]))]))


def test_isometry_examples():
    P, s = apply_isometry(Isometry.translate((1, 0)), square())
    assert s == 1 and pt_equal(pt_class([(1, P)]), pt_class([(1, square(1, 0))]))
    P, s = apply_isometry(Isometry.euclidean([[-1]], [0]), interval(2, 3))
    assert s == -1 and sorted(v[0] for v in P.simplices[0].vertices) == [-3, -2]
    R = Isometry.euclidean([[Fraction(3, 5), Fraction(4, 5)], [Fraction(-4, 5), Fraction(3, 5)]], [0, 0])
    P, s = apply_isometry(R, triangle((0, 0), (5, 0), (0, 5)))
    assert s == 1 and P.simplices[0].vertices == ((0, 0), (3, -4), (4, 3))


@settings(max_examples=25)
@given(seeds)
def test_refinement_refines_both(seed):
    rng = random.Random(seed)
    P = oracles.random_polygon(rng, 2)
    c1, c2 = oracles.random_cover(rng, P, 1, 3), oracles.random_cover(rng, P, 1, 3)
    R = common_refinement(c1, c2)
    assert is_weak_subdivision(R) and refines(R, c1) and refines(R, c2)


@settings(max_examples=25)
@given(seeds)
def test_volume_matches_slab_oracle(seed):
    rng = random.Random(seed)
    P = oracles.random_polygon(rng, 3, 6)
    assert polytope_volume(P) == oracles.slab_area([[s.vertices for s in P.simplices]])


@settings(max_examples=15)
@given(seeds)
def test_union_triangulation_volume(seed):
    rng = random.Random(seed)
    polys = [oracles.random_polygon(rng, 2, 5) for _ in range(rng.randint(1, 3))]
    T = triangulate(polys)
    groups = [[s.vertices for s in P.simplices] for P in polys]
    assert sum(simplex_volume(s) for s in T.top) == oracles.union_area_inclusion_exclusion(groups)


@settings(max_examples=20)
@given(seeds)
def test_random_cover_is_weak_subdivision(seed):
    rng = random.Random(seed)
    P = oracles.random_polygon(rng, 2)
    c = oracles.random_cover(rng, P, 2)
    assert is_weak_subdivision(c)
    assert sum(polytope_volume(Q) for Q in c.pieces) == polytope_volume(P)


@given(st.integers(-5, 5), st.integers(-5, 5), st.sampled_from([1, -1]))
def test_isometry_preserves_volume(tx, ty, s):
    g = Isometry.euclidean([[s, 0], [0, s]], [tx, ty])
    P = triangle((0, 0), (3, 1), (1, 2))
    Q, sign = apply_isometry(g, P)
    assert sign == 1 and polytope_volume(Q) == polytope_volume(P)
