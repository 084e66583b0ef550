from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd

import pytest
from hypothesis import given, strategies as st

from scl.qlinalg import (
    Subspace,
    det,
    hermite_normal_form,
    identity,
    intersect,
    invariant_factors,
    matmul,
    nullspace,
    orthogonal_complement,
    primitive,
    rank,
    rref,
    smith_normal_form,
    subspace_sum,
)

sympy = pytest.importorskip("sympy")

small_int = st.integers(-6, 6)


def int_matrix(max_r=4, max_c=4):
    return st.integers(1, max_r).flatmap(
        lambda r: st.integers(1, max_c).flatmap(
            lambda c: st.lists(st.lists(small_int, min_size=c, max_size=c), min_size=r, max_size=r)))


def determinantal_invariants(M):
    """Invariant factors from gcds of k x k minors, computed with sympy."""
    r, c = len(M), len(M[0])
    S = sympy.Matrix(M)
    divisors = [1]
    for k in range(1, min(r, c) + 1):
        g = 0
        for rows in combinations(range(r), k):
            for cols in combinations(range(c), k):
                g = gcd(g, int(S.extract(list(rows), list(cols)).det()))
        if g == 0:
            break
        divisors.append(g)
    return [divisors[k] // divisors[k - 1] for k in range(1, len(divisors))]


def test_rref_identity():
    R, r = rref(identity(3))
    assert R == identity(3) and r == 3


def test_rref_zero():
    R, r = rref([[0] * 4, [0] * 4])
    assert r == 0 and all(x == 0 for row in R for x in row)


def test_rref_rank_one():
    R, r = rref([[1, 2], [2, 4]])
    assert R == [[1, 2], [0, 0]] and r == 1


def test_snf_examples():
    assert smith_normal_form([[2, 0], [0, 3]]).diagonal == (1, 6)
    assert smith_normal_form([[1, 0], [0, 1]]).diagonal == (1, 1)
    assert smith_normal_form([[2, 0], [0, 2]]).diagonal == (2, 2)


def test_subspace_examples():
    x, y = Subspace.span([[1, 0]]), Subspace.span([[0, 1]])
    assert intersect(x, y) == Subspace.zero(2)
    assert subspace_sum(x, y) == Subspace.full(2)
    assert orthogonal_complement(Subspace.span([[1, 1]])) == Subspace.span([[1, -1]])


@given(int_matrix())
def test_snf_matches_determinantal_divisors(M):
    S = smith_normal_form(M)
    nonzero = [d for d in S.diagonal if d]
    assert nonzero == determinantal_invariants(M)
    assert matmul(matmul([list(r) for r in S.U], M), [list(r) for r in S.V]) == S.D()
    assert abs(det(S.U)) == 1 and abs(det(S.V)) == 1


@given(int_matrix())
def test_rank_matches_sympy(M):
    assert rank(M) == sympy.Matrix(M).rank()
    assert rref(M)[0] == [[Fraction(int(x.p), int(x.q)) for x in row] for row in sympy.Matrix(M).rref()[0].tolist()]


@given(int_matrix())
def test_nullspace_is_kernel(M):
    N = nullspace(M, len(M[0]))
    assert len(N) == len(M[0]) - rank(M)
    for v in N:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in M)


@given(int_matrix())
def test_invariant_factors_sparse(M):
    rows = [{j: x for j, x in enumerate(r) if x} for r in M]
    assert [d for d in invariant_factors(rows, len(M[0])) if d] == determinantal_invariants(M)


@given(int_matrix())
def test_hnf_same_lattice(M):
    H = [r for r in hermite_normal_form(M) if any(r)]
    assert len(H) == rank(M)
    assert Subspace.span(H, len(M[0])) == Subspace.span(M, len(M[0]))


@given(int_matrix(3, 4), int_matrix(3, 4))
def test_dimension_formula(A, B):
    n = 4
    A = [r + [0] * (n - len(r)) for r in A]
    B = [r + [0] * (n - len(r)) for r in B]
    U, V = Subspace.span(A, n), Subspace.span(B, n)
    assert subspace_sum(U, V).dim + intersect(U, V).dim == U.dim + V.dim
    assert intersect(U, V) <= U and U <= subspace_sum(U, V)


@given(st.lists(small_int, min_size=1, max_size=5).filter(any))
def test_primitive(v):
    p = primitive(v)
    g = 0
    for x in p:
        g = gcd(g, x)
    assert g == 1
    assert Subspace.span([p]) == Subspace.span([v])
