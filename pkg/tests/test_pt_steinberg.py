from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import interval, square, triangle
from scl import oracles
from scl.geometry import (
    Isometry,
    Polytope,
    Subspace,
    apply_isometry,
    common_refinement,
    full_sphere,
    join_with_sphere,
)
from scl.pt_steinberg import (
    g_act,
    make_desk,
    minimal_suspension_subspace,
    pt_class,
    pt_equal,
    steinberg_class,
    steinberg_quotient,
    verify_colimit_presentation,
    zero_element,
)
from scl.geometry import GeometryError

seeds = st.integers(0, 10**6)


def test_square_minus_halves_is_zero():
    rel = pt_class([(1, square()), (-1, triangle((0, 0), (1, 0), (1, 1))), (-1, triangle((0, 0), (1, 1), (0, 1)))])
    assert rel.is_zero()


def test_empty_and_doubled():
    assert pt_class([(1, interval(0, 1)), (-1, interval(0, 1))]).is_zero()
    two = pt_class([(2, interval(0, 1))])
    assert two.labels == (2,) and len(two.simplices) == 1


def test_subdivision_relation_in_e1():
    assert pt_equal(pt_class([(1, interval(0, 2))]), pt_class([(1, interval(0, 1)), (1, interval(1, 2))]))


def test_translate_is_different_element():
    assert not pt_equal(pt_class([(1, square())]), pt_class([(1, square(1, 0))]))


def test_reflection_twist():
    r = Isometry.euclidean([[-1]], [0])
    got = g_act(r, pt_class([(1, interval(0, 1))]))
    assert pt_equal(got, pt_class([(-1, interval(-1, 0))]))
    untwisted = g_act(r, pt_class([(1, interval(0, 1))]), twisted=False)
    assert pt_equal(untwisted, pt_class([(1, interval(-1, 0))]))


def test_identity_and_rotation_action():
    a = pt_class([(1, triangle((0, 0), (5, 0), (0, 5)))])
    assert pt_equal(g_act(Isometry.identity(a.geometry), a), a)
    R = Isometry.euclidean([[Fraction(3, 5), Fraction(4, 5)], [Fraction(-4, 5), Fraction(3, 5)]], [0, 0])
    img = g_act(R, a)
    assert set(img.labels) == {1}
    assert pt_equal(img, pt_class([(1, apply_isometry(R, triangle((0, 0), (5, 0), (0, 5)))[0])]))


def test_colimit_examples():
    halves = [interval(0, Fraction(1, 2)), interval(Fraction(1, 2), 1)]
    assert verify_colimit_presentation([[interval(0, 1)], halves]).ok
    assert verify_colimit_presentation([[interval(0, 1)], halves, halves + [interval(3, 4)]]).ok


def test_minimal_suspension_examples():
    W = Subspace.full(3)
    assert minimal_suspension_subspace(full_sphere(W)).U == Subspace.zero(3)
    e1 = Subspace.span([[1, 0, 0]])
    hemi = join_with_sphere(Polytope.make("S0", [[(1, 0, 0)]], frame=e1), e1)
    s = minimal_suspension_subspace(hemi)
    assert s.U == e1 and s.resuspension_ok
    tri = Polytope.make("S2", [[(1, 0, 0), (0, 1, 0), (1, 1, 3)]])
    assert minimal_suspension_subspace(tri).U == W


def test_euclidean_input_rejected():
    with pytest.raises(GeometryError):
        minimal_suspension_subspace(square())


def test_s0_desk_ranks():
    q = steinberg_quotient(make_desk([(1,), (-1,)]))
    assert (q.pt_rank, q.suspension_rank, q.st_rank) == (2, 1, 1)


def test_steinberg_class_examples():
    d = make_desk([(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)])
    half = Polytope.make("S1", [[(1, 0), (0, 1)], [(1, 0), (0, -1)]])
    assert steinberg_class(pt_class([(1, half)]), d).is_zero
    assert steinberg_class(zero_element(half.geometry), d).is_zero
    arc = Polytope.make("S1", [[(1, 0), (1, 1)]])
    assert not steinberg_class(pt_class([(1, arc)]), d).is_zero


def test_desk_rejects_non_antipodal():
    with pytest.raises(GeometryError):
        make_desk([(1, 0), (0, 1)])


@settings(max_examples=20)
@given(seeds)
def test_cover_relation_killed(seed):
    rng = random.Random(seed)
    P = oracles.random_polygon(rng, 2, 6)
    c = oracles.random_cover(rng, P, rng.randint(1, 2))
    assert pt_class([(1, P)] + [(-1, Q) for Q in c.pieces]).is_zero()


@settings(max_examples=10)
@given(seeds)
def test_refinement_invariance(seed):
    rng = random.Random(seed)
    P = oracles.random_polygon(rng, 2, 6)
    c1, c2 = oracles.random_cover(rng, P, 1), oracles.random_cover(rng, P, 1)
    R = common_refinement(c1, c2)
    assert pt_equal(pt_class([(1, Q) for Q in c1.pieces]), pt_class([(1, Q) for Q in R.pieces]))


@settings(max_examples=15)
@given(seeds)
def test_action_is_additive(seed):
    rng = random.Random(seed)
    P, Q = oracles.random_polygon(rng, 1, 5), oracles.random_polygon(rng, 1, 5)
    g = Isometry.point_reflection((oracles.rand_q(rng), oracles.rand_q(rng)))
    a, b = pt_class([(1, P)]), pt_class([(1, Q)])
    assert pt_equal(g_act(g, a + b), g_act(g, a) + g_act(g, b))


@settings(max_examples=10)
@given(seeds)
def test_colimit_random_chain(seed):
    rng = random.Random(seed)
    assert verify_colimit_presentation(oracles.random_chain(rng, rng.choice(["E1", "E2"]), 3)).ok


@settings(max_examples=20)
@given(seeds)
def test_suspension_recovers_subspace(seed):
    rng = random.Random(seed)
    V, W = oracles.random_subspace_pair(rng, 4)
    from scl.suite import _in_sphere, _random_simplex_in

    P = _in_sphere(V, [_random_simplex_in(rng, V)])
    s = minimal_suspension_subspace(join_with_sphere(P, V, W))
    assert s.U == V and s.resuspension_ok
