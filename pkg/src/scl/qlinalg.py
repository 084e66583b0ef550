"""Exact linear algebra over Q and Z.

Rationals are :class:`fractions.Fraction`; matrices are lists of rows.
Everything here is pure and returns fresh objects.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Matrix = list  # list[list[Fraction | int]]


class DimensionMismatch(ValueError):
    pass


# -- rationals -------------------------------------------------------------

def Q(x) -> Fraction:
    """Coerce ints, strings like ``"3/4"`` and Fractions to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an exact rational")
    return Fraction(x)


def qstr(x) -> str:
    # Fraction's str already omits a unit denominator
    return str(Q(x))


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b if a and b else 0


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector by a positive factor to a content-1 integer vector."""
    v = [Q(x) for x in v]
    den = 1
    for x in v:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


# -- dense matrices ----------------------------------------------------------

def to_q(M: Iterable[Iterable]) -> Matrix:
    return [[Q(x) for x in row] for row in M]


def zeros(r: int, c: int) -> Matrix:
    return [[Fraction(0)] * c for _ in range(r)]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if not A:
        return []
    if len(A[0]) != len(B):
        raise DimensionMismatch(f"cannot multiply {len(A)}x{len(A[0])} by {len(B)}x?")
    Bt = list(zip(*B)) if B else []
    ncols = len(B[0]) if B else 0
    if not Bt:
        return [[0] * ncols for _ in A]
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Matrix, v: Sequence) -> list:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def transpose(A: Matrix) -> Matrix:
    return [list(col) for col in zip(*A)]


def rref(M: Matrix) -> tuple[Matrix, int]:
    """Reduced row echelon form and rank. Zero rows are kept at the bottom."""
    A = to_q(M)
    rows = len(A)
    cols = len(A[0]) if rows else 0
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        r += 1
    return A, r


def pivots(R: Matrix) -> list[int]:
    out = []
    for row in R:
        for j, x in enumerate(row):
            if x != 0:
                out.append(j)
                break
    return out


def rank(M: Matrix) -> int:
    """Rank over Q using sparse elimination (fast for boundary-like matrices)."""
    rows = []
    for row in M:
        d = {j: Q(x) for j, x in enumerate(row) if x != 0}
        if d:
            rows.append(d)
    return sparse_rank(rows)


def sparse_rank(rows: list[dict]) -> int:
    """Rank over Q of a matrix given as a list of ``{col: value}`` rows."""
    pivot_rows: dict[int, dict] = {}
    r = 0
    for d in rows:
        d = {j: Fraction(x) for j, x in d.items() if x != 0}
        while d:
            j = min(d)
            p = pivot_rows.get(j)
            if p is None:
                inv = 1 / d[j]
                pivot_rows[j] = {k: v * inv for k, v in d.items()}
                r += 1
                break
            f = d[j]
            for k, v in p.items():
                nv = d.get(k, 0) - f * v
                if nv:
                    d[k] = nv
                else:
                    d.pop(k, None)
    return r


def nullspace(M: Matrix, ncols: int | None = None) -> Matrix:
    """Basis (as rows) of {x : M x = 0}."""
    if ncols is None:
        ncols = len(M[0]) if M else 0
    if not M:
        return identity(ncols)
    R, r = rref(M)
    piv = pivots(R[:r])
    free = [j for j in range(ncols) if j not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, p in enumerate(piv):
            v[p] = -R[i][f]
        basis.append(v)
    return basis


def det(M: Matrix) -> Fraction:
    A = to_q(M)
    n = len(A)
    if any(len(row) != n for row in A):
        raise DimensionMismatch("determinant of a non-square matrix")
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            d = -d
        d *= A[c][c]
        for i in range(c + 1, n):
            if A[i][c] != 0:
                f = A[i][c] / A[c][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return d


def inverse(M: Matrix) -> Matrix:
    n = len(M)
    aug = [list(row) + e for row, e in zip(to_q(M), identity(n))]
    R, r = rref(aug)
    if r < n or any(R[i][i] != 1 for i in range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R]


def solve_in_span(basis: Matrix, v: Sequence) -> list[Fraction] | None:
    """Coefficients c with sum c_i basis_i == v, or None if v is not in the span."""
    if not basis:
        return [] if all(x == 0 for x in v) else None
    A = transpose(to_q(basis))
    aug = [row + [Q(x)] for row, x in zip(A, v)]
    R, r = rref(aug)
    k = len(basis)
    for row in R:
        if all(x == 0 for x in row[:k]) and row[k] != 0:
            return None
    c = [Fraction(0)] * k
    for row in R:
        p = next((j for j in range(k) if row[j] != 0), None)
        if p is not None:
            c[p] = row[k]
    return c


# -- subspaces -------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """Linear subspace of Q^n, stored by its reduced row echelon basis.

    The representation is canonical, so ``==`` and ``hash`` compare subspaces.
    """

    ambient: int
    basis: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient: int | None = None) -> "Subspace":
        vecs = [list(map(Q, v)) for v in vectors]
        if ambient is None:
            if not vecs:
                raise ValueError("ambient dimension needed for an empty span")
            ambient = len(vecs[0])
        if any(len(v) != ambient for v in vecs):
            raise DimensionMismatch("vectors of different lengths")
        if not vecs:
            return cls(ambient, ())
        R, r = rref(vecs)
        return cls(ambient, tuple(tuple(row) for row in R[:r]))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, tuple(tuple(row) for row in identity(n)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def pivots(self) -> list[int]:
        return pivots([list(b) for b in self.basis])

    def contains_vector(self, v: Sequence) -> bool:
        return solve_in_span([list(b) for b in self.basis], v) is not None

    def __le__(self, other: "Subspace") -> bool:
        _check(self, other)
        return all(other.contains_vector(b) for b in self.basis)

    def __lt__(self, other: "Subspace") -> bool:
        return self.dim < other.dim and self <= other

    def annihilator(self) -> "Subspace":
        """{x : b.x = 0 for every basis vector b} under the plain dot pairing."""
        if not self.basis:
            return Subspace.full(self.ambient)
        return Subspace.span(nullspace([list(b) for b in self.basis], self.ambient), self.ambient)

    def coords(self, v: Sequence) -> list[Fraction]:
        """Coordinates of v in the echelon basis (read off at pivot columns)."""
        if not self.contains_vector(v):
            raise ValueError("vector not in subspace")
        return [Q(v[p]) for p in self.pivots()]

    def from_coords(self, c: Sequence) -> list[Fraction]:
        out = [Fraction(0)] * self.ambient
        for ci, b in zip(c, self.basis):
            if ci:
                for j, x in enumerate(b):
                    out[j] += ci * x
        return out

    def __repr__(self) -> str:
        rows = ", ".join("(" + ",".join(qstr(x) for x in b) + ")" for b in self.basis)
        return f"Subspace<{self.ambient}>[{rows}]"


def _check(A: Subspace, B: Subspace) -> None:
    if A.ambient != B.ambient:
        raise DimensionMismatch(f"ambient dimensions differ: {A.ambient} vs {B.ambient}")


def subspace_sum(A: Subspace, B: Subspace) -> Subspace:
    _check(A, B)
    return Subspace.span(list(A.basis) + list(B.basis), A.ambient)


def intersect(A: Subspace, B: Subspace) -> Subspace:
    _check(A, B)
    # A ∩ B = ann(ann A + ann B)
    return subspace_sum(A.annihilator(), B.annihilator()).annihilator()


def orthogonal_complement(A: Subspace, gram: Matrix | None = None) -> Subspace:
    """Complement of A for the inner product with Gram matrix ``gram`` (default: dot)."""
    n = A.ambient
    if gram is not None:
        G = to_q(gram)
        if len(G) != n or any(len(r) != n for r in G):
            raise DimensionMismatch("Gram matrix has the wrong size")
        check_positive_definite(G)
    if not A.basis:
        return Subspace.full(n)
    rows = [list(b) for b in A.basis]
    if gram is not None:
        rows = matmul(rows, G)
    return Subspace.span(nullspace(rows, n), n)


def check_positive_definite(G: Matrix) -> None:
    n = len(G)
    for i in range(n):
        for j in range(n):
            if G[i][j] != G[j][i]:
                raise ValueError("Gram matrix is not symmetric")
    for k in range(1, n + 1):
        if det([row[:k] for row in G[:k]]) <= 0:
            raise ValueError("Gram matrix is not positive definite")


# -- integer normal forms ----------------------------------------------------

def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


@dataclass(frozen=True)
class SmithForm:
    """U @ M @ V == D with U, V unimodular and D diagonal with d_i | d_{i+1}."""

    diagonal: tuple[int, ...]
    U: tuple[tuple[int, ...], ...]
    V: tuple[tuple[int, ...], ...]
    shape: tuple[int, int]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)

    def D(self) -> list[list[int]]:
        r, c = self.shape
        out = [[0] * c for _ in range(r)]
        for i, d in enumerate(self.diagonal):
            out[i][i] = d
        return out


def smith_normal_form(M: Sequence[Sequence[int]]) -> SmithForm:
    """Smith normal form with transformation matrices, over arbitrary-precision ints."""
    A = [[int(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_combine(i, j, a, b, c, d):
        # rows (i, j) <- (a*ri + b*rj, c*ri + d*rj), applied to A and U
        for T in (A, U):
            ri, rj = T[i], T[j]
            T[i] = [a * x + b * y for x, y in zip(ri, rj)]
            T[j] = [c * x + d * y for x, y in zip(ri, rj)]

    def col_combine(i, j, a, b, c, d):
        for T in (A, V):
            for row in T:
                x, y = row[i], row[j]
                row[i] = a * x + b * y
                row[j] = c * x + d * y

    t = 0
    while t < min(m, n):
        # smallest nonzero entry in the remaining block as pivot
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        if i != t:
            A[t], A[i] = A[i], A[t]
            U[t], U[i] = U[i], U[t]
        if j != t:
            col_combine(t, j, 0, 1, 1, 0)
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    a, b = A[t][t], A[i][t]
                    if b % a == 0:
                        q = b // a
                        row_combine(t, i, 1, 0, -q, 1)
                    else:
                        g, x, y = _xgcd(a, b)
                        row_combine(t, i, x, y, -b // g, a // g)
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    a, b = A[t][t], A[t][j]
                    if b % a == 0:
                        q = b // a
                        col_combine(t, j, 1, 0, -q, 1)
                    else:
                        g, x, y = _xgcd(a, b)
                        col_combine(t, j, x, y, -b // g, a // g)
                        done = False
            if done:
                # divisibility of the rest of the block
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if A[i][j] % A[t][t]), None)
                if bad is None:
                    break
                row_combine(t, bad[0], 1, 1, 0, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    diag = tuple(A[i][i] for i in range(min(m, n)))
    return SmithForm(diag, tuple(map(tuple, U)), tuple(map(tuple, V)), (m, n))


def invariant_factors(rows: list[dict], ncols: int | None = None) -> list[int]:
    """Nonzero Smith invariants of a sparse integer matrix (``{col: value}`` rows).

    Unit pivots are eliminated sparsely first; the leftover block goes through
    the dense algorithm. Result is sorted by divisibility.
    """
    R = [{j: int(v) for j, v in r.items() if v} for r in rows]
    R = [r for r in R if r]
    units = 0
    cols: dict[int, set[int]] = {}
    for i, r in enumerate(R):
        for j in r:
            cols.setdefault(j, set()).add(i)
    alive = set(range(len(R)))
    changed = True
    while changed:
        changed = False
        for i in sorted(alive):
            r = R[i]
            j = next((j for j, v in sorted(r.items(), key=lambda kv: len(cols[kv[0]]))
                      if v in (1, -1)), None)
            if j is None:
                continue
            u = r[j]
            for k in list(cols[j]):
                if k == i:
                    continue
                rk = R[k]
                f = rk[j] * u
                for jj, v in r.items():
                    nv = rk.get(jj, 0) - f * v
                    if nv:
                        if jj not in rk:
                            cols.setdefault(jj, set()).add(k)
                        rk[jj] = nv
                    else:
                        if jj in rk:
                            del rk[jj]
                            cols[jj].discard(k)
                if not rk:
                    alive.discard(k)
            for jj in r:
                cols[jj].discard(i)
            alive.discard(i)
            R[i] = {}
            units += 1
            changed = True
    rest = [R[i] for i in sorted(alive) if R[i]]
    if not rest:
        return [1] * units
    used = sorted({j for r in rest for j in r})
    idx = {j: k for k, j in enumerate(used)}
    dense = [[0] * len(used) for _ in rest]
    for a, r in enumerate(rest):
        for j, v in r.items():
            dense[a][idx[j]] = v
    snf = smith_normal_form(dense)
    return [1] * units + [d for d in snf.diagonal if d]


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form (positive pivots, entries above pivots reduced).

    Zero rows are dropped, so the result is a basis of the row lattice.
    """
    A = [[int(x) for x in r] for r in rows if any(r)]
    if not A:
        return []
    n = len(A[0])
    out: list[list[int]] = []
    r = 0
    for c in range(n):
        piv_rows = [i for i in range(r, len(A)) if A[i][c]]
        if not piv_rows:
            continue
        # gcd-combine the column into row r
        for i in piv_rows:
            if i == r:
                continue
            if A[r][c] == 0:
                A[r], A[i] = A[i], A[r]
                continue
            a, b = A[r][c], A[i][c]
            g, x, y = _xgcd(a, b)
            ra, rb = A[r], A[i]
            A[r] = [x * p + y * q for p, q in zip(ra, rb)]
            A[i] = [(-b // g) * p + (a // g) * q for p, q in zip(ra, rb)]
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
        for i in range(r):
            q = A[i][c] // A[r][c]
            if q:
                A[i] = [p - q * s for p, s in zip(A[i], A[r])]
        r += 1
        if r == len(A):
            break
    out = [row for row in A[:r]]
    # final reduction above pivots (later pivots may have disturbed earlier rows)
    piv = pivots(out)
    for k, c in enumerate(piv):
        for i in range(k):
            q = out[i][c] // out[k][c]
            if q:
                out[i] = [p - q * s for p, s in zip(out[i], out[k])]
    return out


def hnf_reduce(hnf: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    """Canonical representative of v modulo the row lattice of an HNF basis."""
    w = [int(x) for x in v]
    for row in hnf:
        c = next(j for j, x in enumerate(row) if x)
        q = w[c] // row[c]
        if q:
            w = [a - q * b for a, b in zip(w, row)]
    return w
