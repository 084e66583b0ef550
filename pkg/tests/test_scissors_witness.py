from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import interval, square, triangle
from scl import oracles, serialization as ser
from scl.geometry import Isometry, Polytope
from scl.scissors_witness import (
    AngleRelationSet,
    DecompositionWitness,
    InconsistentRelations,
    InequalityCertificate,
    MeasuredPolytope,
    box_measured,
    decide_area_e2,
    decide_length_e1,
    dehn_invariant,
    pi_multiple,
    regular_tetrahedron,
    translation_invariants_e2,
    verify_witness,
)

seeds = st.integers(0, 10**6)
TRI = triangle((0, 0), (2, 0), (0, 1))


def e1(*pairs):
    return Polytope.make("E1", [[(a,), (b,)] for a, b in pairs])


def test_e1_examples():
    w = decide_length_e1(e1((0, 1), (2, 3)), e1((5, 7)))
    assert isinstance(w, DecompositionWitness) and len(w.pieces) == 2 and verify_witness(w).ok
    w = decide_length_e1(interval(0, 1), interval(0, 1))
    assert len(w.pieces) == 1 and w.pieces[0][1].translation == (0,)
    c = decide_length_e1(interval(0, 1), interval(0, 2))
    assert isinstance(c, InequalityCertificate) and (c.source_value, c.target_value) == (1, 2)


def test_e2_examples():
    w = decide_area_e2(TRI, square())
    assert isinstance(w, DecompositionWitness) and verify_witness(w).ok
    w = decide_area_e2(TRI, triangle((5, 5), (7, 5), (5, 6)))
    assert len(w.pieces) == 1 and w.group == "translations"
    rect = Polytope.make("E2", [[(0, 0), (1, 0), (1, 2)], [(0, 0), (1, 2), (0, 2)]])
    c = decide_area_e2(square(), rect)
    assert isinstance(c, InequalityCertificate) and (c.source_value, c.target_value) == (1, 2)


def test_verifier_rejects_bad_witnesses():
    w = decide_area_e2(TRI, square())
    assert verify_witness(ser.witness_from_json(ser.witness_to_json(w))).ok
    P, g = w.pieces[0]
    bad = DecompositionWitness(w.source, w.target,
                               [(P, Isometry.translate((Fraction(1, 7), 0)) @ g)] + w.pieces[1:], w.group)
    r = verify_witness(bad)
    assert not r.ok and (r.target["overlaps"] or r.target["uncovered"] or r.target["outside"])
    rot = Isometry.euclidean([[0, -1], [1, 0]], [1, 0])
    sq = square()
    r = verify_witness(DecompositionWitness(sq, sq, [(sq, rot)], "translations"))
    assert not r.ok and r.group_violations


def test_invariant_examples():
    r = translation_invariants_e2(square())
    assert r.area == 1 and r.directions == {}
    t = translation_invariants_e2(triangle((0, 0), (1, 0), (0, 1)))
    assert t.directions.get((1, -1), 0) != 0
    assert translation_invariants_e2(TRI) != translation_invariants_e2(square())


@given(st.fractions(-5, 5, max_denominator=4), st.fractions(-5, 5, max_denominator=4), seeds)
def test_invariants_translation_invariant(tx, ty, seed):
    P = oracles.random_polygon(random.Random(seed), 2, 5)
    moved = Polytope.make("E2", [[(x + tx, y + ty) for x, y in s.vertices] for s in P.simplices])
    assert translation_invariants_e2(P) == translation_invariants_e2(moved)


@settings(max_examples=10)
@given(seeds)
def test_scattered_copies_are_congruent(seed):
    rng = random.Random(seed)
    P = oracles.random_polygon(rng, 1, 3)
    Q = oracles.scattered_copy(rng, P)
    w = decide_area_e2(P, Q)
    assert isinstance(w, DecompositionWitness) and verify_witness(w).ok


@settings(max_examples=20)
@given(seeds)
def test_unequal_area_gives_certificate(seed):
    rng = random.Random(seed)
    P = oracles.random_polygon(rng, 1, 4)
    Q = Polytope.make("E2", [[(2 * x, 2 * y) for x, y in s.vertices] for s in P.simplices])
    c = decide_area_e2(P, Q)
    assert isinstance(c, InequalityCertificate) and c.target_value == 4 * c.source_value


@settings(max_examples=20)
@given(seeds)
def test_e1_random(seed):
    rng = random.Random(seed)
    pieces = oracles.random_interval_stage(rng, 3)
    total = sum(max(v[0] for v in I.simplices[0].vertices) - min(v[0] for v in I.simplices[0].vertices)
                for I in pieces)
    target = interval(100, 100 + total)
    w = decide_length_e1(Polytope.make("E1", [I.simplices[0].vertices for I in pieces]), target)
    assert verify_witness(w).ok


def test_pi_multiples():
    assert pi_multiple("pi") == 1
    assert pi_multiple("pi/2") == Fraction(1, 2)
    assert pi_multiple("2pi/3") == Fraction(2, 3)
    assert pi_multiple("pi*3/4") == Fraction(3, 4)
    assert pi_multiple("arccos(1/3)") is None


def test_dehn_examples():
    assert dehn_invariant(box_measured(1, 1, 1)).is_zero()
    prism = MeasuredPolytope([("a", "pi/3", 3), ("b", "pi/2", 6), ("c", "pi/2", 3)])
    assert dehn_invariant(prism).is_zero()
    D = dehn_invariant(*regular_tetrahedron())
    assert not D.is_zero() and D.terms() == [("l", "arccos(1/3)", Fraction(6))]


def test_dehn_relations():
    mp = MeasuredPolytope([("l", "t", 2), ("l", "s", 2)])
    rel = AngleRelationSet(angle_relations=[({"t": 1, "s": 1}, Fraction(1))])
    assert dehn_invariant(mp, rel).is_zero()
    bad = AngleRelationSet(angle_relations=[({"t": 1}, Fraction(1, 3))], independent=["t"])
    with pytest.raises(InconsistentRelations):
        dehn_invariant(mp, bad)


@given(st.fractions(1, 9, max_denominator=5), st.fractions(1, 9, max_denominator=5), st.fractions(1, 9, max_denominator=5))
def test_every_box_has_zero_dehn(a, b, c):
    assert dehn_invariant(box_measured(a, b, c)).is_zero()
