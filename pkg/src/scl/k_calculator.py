"""Group homology with exterior-algebra coefficients at desk scale.

The reals are replaced by a finite-dimensional Q-vector space with formal
basis labels (:class:`DeskReals`). Every formula below is then an exact
statement about binomial dimensions and ranks of integer/rational matrices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Sequence

from .chain import ChainComplex, homology, tensor_product
from .flag_complexes import SubspacePoset, generate_poset
from .qlinalg import (
    Q,
    Subspace,
    det,
    identity,
    invariant_factors,
    nullspace,
    rank,
    solve_in_span,
    to_q,
)


class KError(ValueError):
    pass


@dataclass(frozen=True)
class DeskReals:
    """Q^d with formal basis labels standing for Q-independent reals."""

    labels: tuple[str, ...]

    def __post_init__(self):
        if not self.labels:
            raise KError("desk dimension must be at least 1")
        if len(set(self.labels)) != len(self.labels):
            raise KError("basis labels must be distinct")

    @classmethod
    def of_dim(cls, d: int) -> "DeskReals":
        if d < 1:
            raise KError("desk dimension must be at least 1")
        defaults = ["1", "√2", "√3", "√5", "√7", "π", "e", "ln2"]
        labels = defaults[:d] + [f"r{k}" for k in range(len(defaults), d)]
        return cls(tuple(labels))

    @property
    def d(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class ExteriorPower:
    base_dim: int
    q: int
    base_labels: tuple[str, ...] = ()

    @property
    def basis(self) -> list[tuple[int, ...]]:
        return list(combinations(range(self.base_dim), self.q))

    @property
    def dim(self) -> int:
        return comb(self.base_dim, self.q)

    def monomials(self) -> list[str]:
        labs = self.base_labels or tuple(f"x{k}" for k in range(self.base_dim))
        return ["∧".join(labs[i] for i in t) if t else "1" for t in self.basis]


def exterior_power_matrix(A: Sequence[Sequence], q: int) -> list[list[Fraction]]:
    """Matrix of Λ^q(A) in wedge-monomial bases: entries are q x q minors."""
    A = to_q(A)
    rows = len(A)
    cols = len(A[0]) if A else 0
    R = list(combinations(range(rows), q))
    C = list(combinations(range(cols), q))
    if q == 0:
        return [[Fraction(1)]]
    return [[det([[A[i][j] for j in c] for i in r]) for c in C] for r in R]


# -- vector group homology and its oracle ------------------------------------

def vector_group_homology(V: DeskReals, i: int) -> ExteriorPower:
    """H_i(V; Q) of a Q-vector space regarded as a discrete group: Λ^i V."""
    if i < 0:
        raise KError("degree must be nonnegative")
    return ExteriorPower(V.d, i, V.labels)


def _circle() -> ChainComplex:
    # two vertices, two edges
    C = ChainComplex()
    C.add("a", 0)
    C.add("b", 0)
    C.add("e", 1, {"b": 1, "a": -1})
    C.add("f", 1, {"a": 1, "b": -1})
    return C


KOSZUL_CAP = 6


def koszul_oracle(d: int, i: int) -> int:
    """dim_Q H_i(Z^d; Q), from the cellular chains of the torus (S^1)^d = B(Z^d).

    The torus complex is the d-fold tensor product (Koszul sign rule) of a
    two-cell circle; its homology is computed by exact elimination.
    """
    if d > KOSZUL_CAP or d < 0:
        raise KError(f"koszul_oracle is capped at d <= {KOSZUL_CAP}")
    if i < 0:
        raise KError("degree must be nonnegative")
    if i > d:
        return 0
    if d == 0:
        return 1 if i == 0 else 0
    return _torus_betti(d)[i]


@lru_cache(maxsize=None)
def _torus_betti(d: int) -> tuple[int, ...]:
    T = _circle()
    for _ in range(d - 1):
        T = tensor_product(T, _circle())
    H = homology(T, "Q")
    return tuple(H.rank(i) for i in range(d + 1))


# -- reports ---------------------------------------------------------------------

@dataclass
class KGroupReport:
    geometry: str
    group: str
    desk_dim: int | None
    degrees: dict[int, dict]
    provenance: str
    integral: bool
    desk_restriction: bool = True
    notes: list[str] = field(default_factory=list)

    def dims(self) -> list[int]:
        return [self.degrees[k]["dim"] for k in sorted(self.degrees)]

    def to_json(self) -> dict:
        return {
            "geometry": self.geometry,
            "group": self.group,
            "desk_dim": self.desk_dim,
            "integral": self.integral,
            "desk_restriction": self.desk_restriction,
            "provenance": self.provenance,
            "degrees": {str(k): v for k, v in sorted(self.degrees.items())},
            "notes": list(self.notes),
        }


def _wedge(k: int) -> str:
    return f"R^∧{k}"


def k_line_translation(V: DeskReals, max_degree: int) -> KGroupReport:
    if max_degree < 0:
        raise KError("max degree must be nonnegative")
    degs = {}
    for n in range(max_degree + 1):
        degs[n] = {"dim": vector_group_homology(V, n + 1).dim, "torsion": [], "formula": _wedge(n + 1)}
    return KGroupReport("E1", "T1", V.d, degs,
                        "1-dimensional translational case: K_n = R^∧(n+1) (homology of T(1) = R)", True)


def negation_sign(V: DeskReals, q: int) -> int:
    """The scalar by which Λ^q(-1_V) acts, computed from minors."""
    M = exterior_power_matrix([[-x for x in row] for row in identity(V.d)], q)
    if not M or not M[0]:
        return 1
    return int(M[0][0])


def coinvariant_dim(dim: int, scalar: int) -> int:
    """dim of the coinvariants of Z/2 acting on Q^dim by the scalar ±1: dim - rank(g - 1)."""
    if dim == 0:
        return 0
    g_minus_1 = [[Fraction(scalar - 1) if i == j else Fraction(0) for j in range(dim)] for i in range(dim)]
    return dim - rank(g_minus_1)


def k_line_full(V: DeskReals, max_degree: int, twisted: bool = True) -> KGroupReport:
    degs = {}
    for n in range(max_degree + 1):
        E = vector_group_homology(V, n + 1)
        s = negation_sign(V, n + 1) * (-1 if twisted else 1) if E.dim else 1
        degs[n] = {"dim": coinvariant_dim(E.dim, s), "torsion": [], "formula": _wedge(n + 1) if n % 2 == 0 else "0",
                   "action_sign": s}
    rep = KGroupReport("E1", "E1", V.d, degs,
                       "1-dimensional full isometry case: Z/2-coinvariants of R^∧(n+1); K_2n = R^∧(2n+1), K_2n+1 = 0",
                       False)
    if not twisted:
        rep.notes.append("diagnostic: orientation twist disabled")
        for n in degs:
            degs[n]["formula"] = "coinvariants without twist"
    return rep


def k_circle(V: DeskReals, group: str, max_degree: int) -> KGroupReport:
    group = group.upper()
    if group == "SO2":
        rep = k_line_translation(V, max_degree)
    elif group == "O2":
        rep = k_line_full(V, max_degree)
    else:
        raise KError("group must be SO2 or O2")
    rep.geometry = "S1"
    rep.group = group
    rep.integral = False
    rep.provenance = "S^1 case: PT(S^1) is the homotopy Z-orbits of PT(E^1), same answer as E^1 " + \
                     ("with T(1)" if group == "SO2" else "with E(1)")
    return rep


def _ring_element_to_twisted(a: int, b: int) -> int:
    # a + b g in Z[C2] acting on Z^t (g = -1)
    return a - b


def s0_resolution_complex(max_degree: int) -> ChainComplex:
    """Z[C2]-periodic resolution tensored with the sign module Z^t, degrees 0..max_degree+1.

    d_k is (g - 1) for odd k and the norm (g + 1) for even k.
    """
    C = ChainComplex()
    C.add(0, 0)
    for k in range(1, max_degree + 2):
        r = (-1, 1) if k % 2 == 1 else (1, 1)
        C.add(k, k, {k - 1: _ring_element_to_twisted(*r)})
    return C


def k_s0(group: str, reduced: bool, max_degree: int = 10) -> KGroupReport:
    group = group.upper()
    if group in ("1", "TRIVIAL"):
        if reduced:
            degs = {0: {"dim": 1, "torsion": [], "formula": "Z (π0 of S)"}}
            prov = "S^0, trivial group, reduced: the sphere spectrum"
        else:
            degs = {0: {"dim": 2, "torsion": [], "formula": "Z^2 (π0 of S ∨ S)"}}
            prov = "S^0, trivial group: S ∨ S"
        rep = KGroupReport("S0", "1", None, degs, prov, True)
        rep.notes.append("π0 of wedge only; higher stable homotopy out of scope")
        return rep
    if group != "O1":
        raise KError("group must be trivial or O1")
    if not reduced:
        rep = KGroupReport("S0", "O1", None, {0: {"dim": 1, "torsion": [], "formula": "Z (π0 of S)"}},
                           "S^0 with O(1): the sphere spectrum", True)
        rep.notes.append("π0 only")
        return rep
    C = s0_resolution_complex(max_degree)
    HZ = homology(C, "Z")
    HQ = homology(C, "Q")
    degs = {}
    for k in range(max_degree + 1):
        degs[k] = {"dim": HZ.rank(k), "torsion": HZ.tors(k), "rational_dim": HQ.rank(k),
                   "formula": "Z/2" if k % 2 == 0 else "0"}
    return KGroupReport("S0", "O1", None, degs,
                        "reduced S^0 with O(1): homology H_n(BO(1); Z^t), Z/2 in even degrees", False)


# -- Dupont splitting ---------------------------------------------------------------

def _line_inclusion(v: Sequence, d: int) -> list[list[Fraction]]:
    """Matrix of V -> V ⊗ Q^2, x -> x ⊗ v (basis of the target indexed a*2 + e)."""
    v = [Q(x) for x in v]
    M = [[Fraction(0)] * d for _ in range(2 * d)]
    for a in range(d):
        M[2 * a][a] = v[0]
        M[2 * a + 1][a] = v[1]
    return M


def _hstack(blocks: list[list[list[Fraction]]], nrows: int) -> list[list[Fraction]]:
    out = [[] for _ in range(nrows)]
    for B in blocks:
        for i in range(nrows):
            out[i].extend(B[i] if B else [])
    return out


@dataclass
class DupontReport:
    m: int
    kernel_dim: int
    cokernel_dim: int
    total: int
    source_dims: list[int]
    target_dims: list[int]

    def to_json(self) -> dict:
        return dict(self.__dict__)


def _check_lines(lines: Sequence[Sequence]) -> list[tuple[int, ...]]:
    from .qlinalg import primitive
    if len(lines) < 1:
        raise KError("need at least one line")
    out = []
    for v in lines:
        if len(v) != 2 or not any(Q(x) for x in v):
            raise KError("lines must be nonzero vectors of Q^2")
        p = primitive(v)
        p = p if (p[0] > 0 or (p[0] == 0 and p[1] > 0)) else tuple(-x for x in p)
        if p in out:
            raise KError("lines must be distinct")
        out.append(p)
    return out


def splitting_map(lines: Sequence[Sequence], d: int, k: int) -> list[list[Fraction]]:
    """⊕_j Λ^k(V·v_j) -> Λ^k(V ⊗ Q^2) as a C(2d,k) x (#lines * C(d,k)) matrix."""
    blocks = [exterior_power_matrix(_line_inclusion(v, d), k) for v in lines]
    return _hstack(blocks, comb(2 * d, k))


def dupont_splitting_e2(lines: Sequence[Sequence], V: DeskReals, m: int) -> DupontReport:
    lines = _check_lines(lines)
    if m < 0:
        raise KError("m must be nonnegative")
    d = V.d
    A = splitting_map(lines, d, m + 1)
    B = splitting_map(lines, d, m + 2)
    nA = len(lines) * comb(d, m + 1)
    rA = rank(A) if A and A[0] else 0
    rB = rank(B) if B and B[0] else 0
    ker = nA - rA
    coker = comb(2 * d, m + 2) - rB
    return DupontReport(m, ker, coker, ker + coker, [nA, len(lines) * comb(d, m + 2)],
                        [comb(2 * d, m + 1), comb(2 * d, m + 2)])


@dataclass
class EigenReport:
    a: Fraction
    m: int
    q: int
    scalar: Fraction
    summand_dim: int
    ok: bool


def _scale(M, s):
    return [[s * x for x in row] for row in M]


def _sub(A, B):
    return [[x - y for x, y in zip(r, s)] for r, s in zip(A, B)]


def _mul(A, B):
    from .qlinalg import matmul
    return matmul(A, B)


def dupont_eigenspace_check(a, m: int, q: int, lines: Sequence[Sequence], V: DeskReals) -> EigenReport:
    """Dilation by a on the line models acts on the q-th splitting summand as a^(m+q)."""
    a = Q(a)
    if a == 1:
        raise KError("dilation by 1 is the identity; choose a != 1")
    if a <= 0:
        raise KError("a must be a positive rational")
    if q not in (1, 2):
        raise KError("for n = 2 the splitting summands are q = 1, 2")
    lines = _check_lines(lines)
    d = V.d
    k = m + q
    target_dim = comb(2 * d, k)
    A = splitting_map(lines, d, k)
    src_dim = len(lines) * comb(d, k)
    # dilation on each line model, and on V ⊗ Q^2
    dil_line = exterior_power_matrix(_scale(identity(d), a), k)
    dil_src = [[Fraction(0)] * src_dim for _ in range(src_dim)]
    blk = comb(d, k)
    for j in range(len(lines)):
        for r in range(blk):
            for c in range(blk):
                dil_src[j * blk + r][j * blk + c] = dil_line[r][c] if dil_line else Fraction(0)
    dil_tgt = exterior_power_matrix(_scale(identity(2 * d), a), k)
    s = a ** k
    if q == 1:
        # kernel summand: (D - s) K = 0 and D preserves the kernel
        K = nullspace(A, src_dim) if src_dim else []
        ok = True
        for v in K:
            w = [sum(x * y for x, y in zip(row, v)) for row in dil_src]
            if any(x - s * y for x, y in zip(w, v)):
                ok = False
        # naturality: A D = D' A
        if src_dim and target_dim:
            ok = ok and _mul(A, dil_src) == _mul(dil_tgt, A)
        return EigenReport(a, m, q, s, len(K), ok)
    # cokernel summand: (D' - s) maps the target into the image
    img = [list(col) for col in zip(*A)] if A and A[0] else []
    ok = True
    E = _sub(dil_tgt, _scale(identity(target_dim), s)) if target_dim else []
    for col in zip(*E) if E else []:
        if any(col) and solve_in_span(img, list(col)) is None:
            ok = False
    coker = target_dim - (rank(A) if img else 0)
    return EigenReport(a, m, q, s, coker, ok)


def dupont_general(sp: SubspacePoset, V: DeskReals, q: int) -> tuple[ChainComplex, dict[int, int]]:
    """Relative flag complex of the poset (flags ending at the top) with coefficients Λ^q(V0 ⊗ V).

    Returns the complex and its rational homology ranks by degree.
    """
    if q < 0:
        raise KError("q must be nonnegative")
    P = sp.poset
    top = sp.top
    d = V.d
    E = sp.elements
    chains = [c for c in P.chains() if c[-1] == top]

    def lam_basis(i):
        return list(combinations(range(E[i].dim * d), q))

    incl_cache: dict[tuple[int, int], list[list[Fraction]]] = {}

    def incl(i, j):
        if (i, j) not in incl_cache:
            # coordinates of V_i's basis in V_j's basis, tensored with the identity on V
            cols = [E[j].coords(b) for b in E[i].basis]
            ei, ej = E[i].dim, E[j].dim
            M = [[Fraction(0)] * (ei * d) for _ in range(ej * d)]
            for s in range(ei):
                for t in range(ej):
                    c = cols[s][t]
                    if c:
                        for a in range(d):
                            M[t * d + a][s * d + a] = c
            incl_cache[(i, j)] = exterior_power_matrix(M, q)
        return incl_cache[(i, j)]

    C = ChainComplex()
    for ch in chains:
        k = len(ch) - 1
        nb = len(lam_basis(ch[0]))
        for b in range(nb):
            bd: dict = {}
            if k >= 1:
                L = incl(ch[0], ch[1])
                for r, row in enumerate(L):
                    if row[b]:
                        bd[(ch[1:], r)] = bd.get((ch[1:], r), 0) + row[b]
                for j in range(1, k):  # deleting the top (j = k) lands in the discarded part
                    key = (ch[:j] + ch[j + 1:], b)
                    bd[key] = bd.get(key, 0) + (-1) ** j
            C.add((ch, b), k, bd)
    _integralize(C)
    C.check()
    H = homology(C, "Q")
    return C, {k: H.rank(k) for k in range(len(max(chains, key=len)))}


def _integralize(C: ChainComplex) -> None:
    # keep integers as ints; genuine fractions only occur over Q and are fine there
    for b in C.bd.values():
        for j, v in list(b.items()):
            if isinstance(v, Fraction) and v.denominator == 1:
                b[j] = int(v)


def dupont_total(sp: SubspacePoset, V: DeskReals, m: int) -> dict[int, int]:
    """Splitting summands: q -> dim H~_{n-q}(ST; Λ^{m+q}) for q = 1..n."""
    n = sp.elements[sp.top].dim
    out = {}
    for q in range(1, n + 1):
        _, H = dupont_general(sp, V, m + q)
        out[q] = H.get(n - q, 0)
    return out


def lines_poset(lines: Sequence[Sequence]) -> SubspacePoset:
    return generate_poset([Subspace.span([v]) for v in _check_lines(lines)], Subspace.full(2))


# -- reduced S^1 table -----------------------------------------------------------

@dataclass
class ReducedS1Report:
    N: int
    d: int
    circle_group: dict[int, dict]
    reduced_k: dict[int, dict]
    rational_o2: dict[int, int]
    notes: list[str]

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "d": self.d,
            "H_*(circle group)": {str(k): v for k, v in self.circle_group.items()},
            "H_*(reduced K, SO2)": {str(k): v for k, v in self.reduced_k.items()},
            "rational reduced K, O2": {str(k): v for k, v in self.rational_o2.items()},
            "notes": self.notes,
            "desk_restriction": True,
        }


def _cyclic_homology(n: int, k: int) -> list[int]:
    """H_k(Z/n; Z) as a list of cyclic orders (Z is encoded as 0)."""
    if k == 0:
        return [0]
    return [n] if k % 2 == 1 and n > 1 else []


def _coker_kernel_cyclic(a: int, b: int, image_of_one: int) -> tuple[list[int], int]:
    """For Z/a -> Z/b sending 1 to image_of_one: (cokernel cyclic orders, kernel order)."""
    inv = invariant_factors([{0: b}, {0: image_of_one}], 1)
    coker = [x for x in inv if x > 1]
    if not inv:
        coker = [0]
    kernel = sum(1 for x in range(a) if (x * image_of_one) % b == 0)
    return coker, kernel


def reduced_s1_table(N: int, V: DeskReals, max_degree: int) -> ReducedS1Report:
    if N % 2:
        raise KError("torsion modulus N must be even")
    if N < 2:
        raise KError("torsion modulus N must be at least 2")
    if max_degree > 6 or max_degree < 0:
        raise KError("max degree must be in 0..6")
    d = V.d
    circ = {}
    for k in range(max_degree + 2):
        lam = 1 if k == 0 else comb(d, k)
        circ[k] = {"free_Z" if k == 0 else "Rbar_dim": lam, "torsion": [x for x in _cyclic_homology(N, k) if x]}
    # fiber sequence K~ -> B(Z/2)_+ -> B(circle)_+ ; f_j : H_j(Z/2) -> H_j(circle)
    red = {}
    for k in range(max_degree + 1):
        # cokernel of f_{k+1}
        rbar = comb(d, k + 1)
        tors: list[int] = []
        if (k + 1) % 2 == 1:
            coker, _ = _coker_kernel_cyclic(2, N, N // 2)
            tors = [x for x in coker if x > 1]
        # kernel of f_k
        if k == 0:
            ker = 0  # Z -> Z is the identity on H_0
        elif k % 2 == 1:
            _, korder = _coker_kernel_cyclic(2, N, N // 2)
            ker = korder - 1
        else:
            ker = 0
        if ker:
            tors.append(2)
        red[k] = {"Rbar_dim": rbar, "torsion": sorted(tors),
                  "formula": f"(R/Q)^∧{k + 1}" + (" ⊕ Q/(1/2)Z" if k % 2 == 0 else "")}
    rat = {}
    for n in range(max_degree + 1):
        s = negation_sign(V, n + 1) * -1
        rat[n] = coinvariant_dim(comb(d, n + 1), s)
    notes = [
        "R/Q is modelled by a d-dimensional Q-space; Q/Z by Z/N; Q/(1/2)Z by Z/(N/2)",
        "odd-degree maps H(Z/2) -> H(Z/N) taken as the inclusion 1 -> N/2 (injective)",
    ]
    return ReducedS1Report(N, d, circ, red, rat, notes)
