from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from scl.k_calculator import (
    DeskReals,
    KError,
    dupont_eigenspace_check,
    dupont_general,
    dupont_splitting_e2,
    dupont_total,
    exterior_power_matrix,
    k_circle,
    k_line_full,
    k_line_translation,
    k_s0,
    koszul_oracle,
    lines_poset,
    reduced_s1_table,
    vector_group_homology,
)
from scl.qlinalg import det

V = DeskReals.of_dim


def test_exterior_powers():
    assert vector_group_homology(V(3), 2).dim == 3
    assert vector_group_homology(V(4), 0).dim == 1
    assert vector_group_homology(V(2), 3).dim == 0


def test_koszul_examples():
    assert koszul_oracle(3, 2) == 3
    assert koszul_oracle(1, 0) == 1
    assert koszul_oracle(2, 2) == 1


@given(st.integers(1, 5), st.integers(0, 5))
def test_koszul_matches_exterior_power(d, i):
    assert koszul_oracle(d, i) == vector_group_homology(V(d), i).dim == comb(d, i)


def test_translation_table():
    assert k_line_translation(V(3), 4).dims() == [3, 3, 1, 0, 0]
    assert k_line_translation(V(1), 3).dims() == [1, 0, 0, 0]
    for d in range(1, 5):
        assert k_line_translation(V(d), d).dims()[d] == 0


def test_full_isometry_table():
    assert k_line_full(V(3), 3).dims() == [3, 0, 1, 0]
    for d in range(1, 5):
        assert k_line_full(V(d), 4).dims()[1] == 0
    assert k_line_full(V(3), 3, twisted=False).dims()[0] == 0


def test_circle_tables():
    assert k_circle(V(3), "SO2", 2).dims()[1] == 3
    assert all(x == 0 for x in k_circle(V(3), "O2", 5).dims()[1::2])
    assert k_circle(V(1), "SO2", 0).dims() == [1]
    with pytest.raises(KError):
        k_circle(V(2), "SO3", 2)


def test_s0_tables():
    assert k_s0("1", reduced=False).degrees[0]["dim"] == 2
    r = k_s0("O1", reduced=True, max_degree=5)
    assert [r.degrees[k]["torsion"] for k in range(6)] == [[2], [], [2], [], [2], []]
    assert all(r.degrees[k]["dim"] == 0 and r.degrees[k]["rational_dim"] == 0 for k in range(6))


def test_dupont_examples():
    for m in range(3):
        assert dupont_splitting_e2([(1, 0)], V(2), m).kernel_dim == 0
    e = dupont_splitting_e2([(1, 0), (0, 1), (1, 1)], V(1), 0)
    assert (e.kernel_dim, e.cokernel_dim, e.total) == (1, 1, 2)
    e = dupont_splitting_e2([(1, 0), (0, 1)], V(1), 0)
    assert (e.kernel_dim, e.cokernel_dim) == (0, 1)


def test_eigen_examples():
    r = dupont_eigenspace_check(2, 0, 1, [(1, 0), (0, 1), (1, 1)], V(1))
    assert r.ok and r.scalar == 2
    r = dupont_eigenspace_check(2, 1, 2, [(1, 0), (0, 1), (1, 1)], V(2))
    assert r.ok and r.scalar == 8
    with pytest.raises(KError):
        dupont_eigenspace_check(1, 0, 1, [(1, 0)], V(1))


def test_dupont_general_examples():
    _, H = dupont_general(lines_poset([(1, 0), (0, 1), (1, 1)]), V(1), 1)
    assert H.get(1, 0) == 1 and H.get(2, 0) == 0
    _, H0 = dupont_general(lines_poset([(1, 0), (0, 1), (1, 1)]), V(1), 0)
    assert H0.get(1, 0) == 2
    _, H2 = dupont_general(lines_poset([(1, 0), (0, 1)]), V(2), 2)
    # two 1-dim images inside the 6-dim top space leave a 4-dim cokernel in degree 0
    assert H2.get(0, 0) == 4


@given(st.integers(1, 2), st.integers(1, 5), st.integers(0, 2))
def test_splitting_agrees_with_general(d, nl, m):
    L = [(1, i) for i in range(nl - 1)] + [(0, 1)]
    e = dupont_splitting_e2(L, V(d), m)
    g = dupont_total(lines_poset(L), V(d), m)
    assert (e.kernel_dim, e.cokernel_dim) == (g.get(1, 0), g.get(2, 0))


@given(st.sampled_from([Fraction(2), Fraction(3), Fraction(1, 2)]), st.integers(0, 2), st.sampled_from([1, 2]))
def test_eigenvalue(a, m, q):
    r = dupont_eigenspace_check(a, m, q, [(1, 0), (0, 1), (1, 1)], V(2))
    assert r.ok and r.scalar == a ** (m + q)


def test_reduced_s1_rows():
    for d in (1, 2, 3):
        for N in (2, 4, 6):
            r = reduced_s1_table(N, V(d), 5)
            assert r.reduced_k[0]["Rbar_dim"] == d
            assert r.reduced_k[0]["torsion"] == ([N // 2] if N > 2 else [])
            assert r.reduced_k[1]["Rbar_dim"] == comb(d, 2) and r.reduced_k[1]["torsion"] == []
            assert all(r.rational_o2[k] == 0 for k in (1, 3, 5))
    with pytest.raises(KError):
        reduced_s1_table(3, V(1), 2)


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3))
def test_top_exterior_power_is_determinant(A):
    assert exterior_power_matrix(A, 3) == [[det(A)]]


def test_desk_validation():
    with pytest.raises(KError):
        DeskReals.of_dim(0)
    with pytest.raises(KError):
        DeskReals(("a", "a"))
