"""Flag complexes of finite subspace posets and homotopy-colimit chain models.

Everything is a cellular chain complex: order complexes of posets, the
Bousfield-Kan style homotopy colimit of a poset-shaped diagram of chain
complexes, total cofibers, and the cube model indexed by dimension sets.
All computations are desk restrictions: finite intersection-closed posets
stand in for the full (infinite) posets of subspaces.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Callable, Hashable, Sequence

from .chain import (
    ChainComplex,
    ChainMap,
    HomologyResult,
    cone_map,
    direct_sum,
    homology,
    mapping_cone,
    point,
    quotient,
    reduced_homology,
    simplicial_chains,
)
from .qlinalg import Q, Subspace, intersect, primitive


class PosetError(ValueError):
    pass


# -- finite posets --------------------------------------------------------------

@dataclass
class FinitePoset:
    """Elements 0..n-1; ``above[i]`` is the set of j with i < j (transitively closed)."""

    n: int
    above: list[frozenset[int]]
    labels: list = field(default_factory=list)

    @classmethod
    def from_relation(cls, n: int, less: Callable[[int, int], bool], labels=None) -> "FinitePoset":
        above = [frozenset(j for j in range(n) if j != i and less(i, j)) for i in range(n)]
        P = cls(n, above, list(labels) if labels is not None else list(range(n)))
        P.validate()
        return P

    @classmethod
    def from_covers(cls, n: int, edges: Sequence[tuple[int, int]], labels=None) -> "FinitePoset":
        up = [set() for _ in range(n)]
        for a, b in edges:
            up[a].add(b)
        # transitive closure
        changed = True
        while changed:
            changed = False
            for i in range(n):
                extra = set()
                for j in up[i]:
                    extra |= up[j]
                if not extra <= up[i]:
                    up[i] |= extra
                    changed = True
        P = cls(n, [frozenset(u) for u in up], list(labels) if labels is not None else list(range(n)))
        P.validate()
        return P

    def validate(self) -> None:
        for i in range(self.n):
            if i in self.above[i]:
                raise PosetError("relation is not irreflexive (cycle)")
            for j in self.above[i]:
                if not self.above[j] <= self.above[i]:
                    raise PosetError("relation is not transitive")

    def less(self, i: int, j: int) -> bool:
        return j in self.above[i]

    def leq(self, i: int, j: int) -> bool:
        return i == j or j in self.above[i]

    def chains(self, among: Sequence[int] | None = None) -> list[tuple[int, ...]]:
        """All nonempty strict chains, as increasing tuples."""
        elems = sorted(range(self.n) if among is None else among)
        allowed = set(elems)
        out: list[tuple[int, ...]] = []

        def ext(ch):
            out.append(ch)
            for j in sorted(self.above[ch[-1]] & allowed):
                ext(ch + (j,))

        for i in elems:
            ext((i,))
        return sorted(out, key=lambda c: (len(c), c))

    def terminal(self) -> int | None:
        for i in range(self.n):
            if all(j == i or self.less(j, i) for j in range(self.n)):
                return i
        return None

    def height(self) -> int:
        return max((len(c) for c in self.chains()), default=0)

    def chain_poset(self) -> tuple["FinitePoset", list[tuple[int, ...]]]:
        """Poset of nonempty strict chains, c <= c' iff c contains c'."""
        chs = self.chains()
        idx = {c: k for k, c in enumerate(chs)}
        sets = [frozenset(c) for c in chs]
        above = [frozenset(idx[d] for d, s in zip(chs, sets) if s < sets[k]) for k, c in enumerate(chs)]
        return FinitePoset(len(chs), above, chs), chs


# -- diagrams ---------------------------------------------------------------------

@dataclass
class Diagram:
    """A functor from a finite poset to chain complexes."""

    poset: FinitePoset
    objects: list[ChainComplex]
    arrow: Callable[[int, int], ChainMap]  # chain map F(i) -> F(j) for i <= j

    def map(self, i: int, j: int) -> ChainMap:
        if i == j:
            return {k: {k: 1} for k in self.objects[i].degree}
        return self.arrow(i, j)


def constant_diagram(P: FinitePoset, model: Callable[[], ChainComplex]) -> Diagram:
    objs = [model() for _ in range(P.n)]
    return Diagram(P, objs, lambda i, j: {k: {k: 1} for k in objs[i].degree})


def point_diagram(P: FinitePoset) -> Diagram:
    return constant_diagram(P, point)


def interval() -> ChainComplex:
    return simplicial_chains([(0,), (1,), (0, 1)])


def interval_diagram(P: FinitePoset) -> Diagram:
    return constant_diagram(P, interval)


def downset_diagram(P: FinitePoset) -> Diagram:
    """F(i) = order complex of the strict down-set of i; inclusions as maps."""
    objs = []
    for i in range(P.n):
        below = [j for j in range(P.n) if P.less(j, i)]
        objs.append(simplicial_chains(P.chains(below)))
    return Diagram(P, objs, lambda i, j: {k: {k: 1} for k in objs[i].degree})


def hocolim(D: Diagram, chains: Sequence[tuple[int, ...]] | None = None) -> ChainComplex:
    """Cellular chains of the homotopy colimit: cells (chain i0<...<ik) x (cell of F(i0)).

    d(s x c) = sum_j (-1)^j d_j s x c' + (-1)^k s x dc, where the 0th face
    transports c along F(i0 -> i1).
    """
    P = D.poset
    chs = P.chains() if chains is None else chains
    C = ChainComplex()
    for s in chs:
        k = len(s) - 1
        F0 = D.objects[s[0]]
        push = D.map(s[0], s[1]) if k >= 1 else None
        for c, q in F0.degree.items():
            bd: dict = {}
            if k >= 1:
                for x, e in push[c].items():
                    key = (s[1:], x)
                    bd[key] = bd.get(key, 0) + e
                for j in range(1, k + 1):
                    key = (s[:j] + s[j + 1:], c)
                    bd[key] = bd.get(key, 0) + (-1) ** j
            sgn = (-1) ** k
            for x, e in F0.bd[c].items():
                key = (s, x)
                bd[key] = bd.get(key, 0) + sgn * e
            C.add((s, c), k + q, bd)
    return C


def tcofib(D: Diagram) -> ChainComplex:
    """Total cofiber: hocolim over P modulo hocolim over P minus its terminal object."""
    t = D.poset.terminal()
    if t is None:
        raise PosetError("poset has no terminal object")
    H = hocolim(D)
    return quotient(H, lambda key: t in key[0])


def barycentric_diagram(D: Diagram) -> Diagram:
    """F o min on the chain poset C(P)."""
    CP, chs = D.poset.chain_poset()
    objs = [D.objects[c[0]] for c in chs]
    return Diagram(CP, objs, lambda a, b: D.map(chs[a][0], chs[b][0]))


# -- cube models ------------------------------------------------------------------

@dataclass
class CubeDiagram:
    """S subset of {0..n-1} -> direct sum over flags with dimension set S of F(first)."""

    n: int
    vertices: dict[frozenset, ChainComplex]
    flags: dict[frozenset, list[tuple[int, ...]]]
    base: Diagram
    terminal: int

    dims: list[int] = field(default_factory=list)


def cube_model(D: Diagram, dims: Sequence[int]) -> CubeDiagram:
    P = D.poset
    t = P.terminal()
    if t is None:
        raise PosetError("poset has no terminal object")
    n = dims[t]
    validate_dimension_map(P, dims)
    flags: dict[frozenset, list[tuple[int, ...]]] = {}
    proper = [i for i in range(P.n) if i != t]
    for ch in P.chains(proper):
        flags.setdefault(frozenset(dims[i] for i in ch), []).append(ch)
    verts: dict[frozenset, ChainComplex] = {}
    for r in range(n + 1):
        for S in combinations(range(n), r):
            S = frozenset(S)
            if not S:
                X = ChainComplex()
                F = D.objects[t]
                for k, d in F.degree.items():
                    X.add(("X", k), d, {("X", j): c for j, c in F.bd[k].items()})
                verts[S] = X
                continue
            X = ChainComplex()
            for phi in flags.get(S, []):
                F = D.objects[phi[0]]
                for k, d in F.degree.items():
                    X.add(((phi,), k), d, {((phi,), j): c for j, c in F.bd[k].items()})
            verts[S] = X
            flags.setdefault(S, [])
    cube = CubeDiagram(n, verts, flags, D, t, list(dims))
    return cube


def _cube_map(cube: CubeDiagram, S: frozenset, T: frozenset) -> ChainMap:
    D = cube.base
    if S == T:
        return {k: {k: 1} for k in cube.vertices[S].degree}
    out: ChainMap = {}
    for phi in cube.flags[S]:
        sub = tuple(i for i in phi if cube.dims[i] in T)
        first = sub[0] if sub else cube.terminal
        f = D.map(phi[0], first)
        for c in D.objects[phi[0]].degree:
            if sub:
                out[((phi,), c)] = {((sub,), x): e for x, e in f[c].items()}
            else:
                out[((phi,), c)] = {("X", x): e for x, e in f[c].items()}
    return out


def validate_dimension_map(P: FinitePoset, dims: Sequence[int]) -> None:
    t = P.terminal()
    if t is None:
        raise PosetError("poset has no terminal object")
    n = dims[t]
    for i in range(P.n):
        if not 0 <= dims[i] <= n:
            raise PosetError("dimension out of range")
        if i != t and dims[i] == n:
            raise PosetError("invalid dimension map: only the terminal object may have top dimension")
        for j in P.above[i]:
            if dims[j] <= dims[i]:
                raise PosetError("invalid dimension map: a nontrivial morphism is not sent to a nontrivial one")


def cube_as_diagram(cube: CubeDiagram) -> Diagram:
    """The cube as a diagram on the poset of subsets ordered by reverse inclusion."""
    subsets = sorted(cube.vertices, key=lambda S: (-len(S), sorted(S)))
    idx = {S: k for k, S in enumerate(subsets)}
    J = FinitePoset.from_relation(len(subsets), lambda a, b: subsets[b] < subsets[a], subsets)
    objs = [cube.vertices[S] for S in subsets]
    return Diagram(J, objs, lambda a, b: _cube_map(cube, subsets[a], subsets[b]))


def cube_tcofib(cube: CubeDiagram) -> ChainComplex:
    return tcofib(cube_as_diagram(cube))


def iterated_cone(cube: CubeDiagram, order: Sequence[int] | None = None) -> ChainComplex:
    """Total cofiber as iterated algebraic mapping cones, one cube direction at a time."""
    order = list(range(cube.n)) if order is None else list(order)
    verts = dict(cube.vertices)

    def mp(S, T):
        return _cube_map(cube, S, T)

    dirs = list(order)
    while dirs:
        k = dirs.pop(0)
        new: dict[frozenset, ChainComplex] = {}
        for S in verts:
            if k in S:
                continue
            new[S] = mapping_cone(mp(S | {k}, S), verts[S | {k}], verts[S])
        old_mp = mp

        def mp(S, T, old_mp=old_mp, k=k):
            return cone_map(old_mp(S | {k}, T | {k}), old_mp(S, T))

        verts = new
    return verts[frozenset()]


# -- subspace posets -----------------------------------------------------------

@dataclass
class SubspacePoset:
    elements: list[Subspace]
    top: int
    euclidean: bool = False

    @property
    def poset(self) -> FinitePoset:
        E = self.elements
        return FinitePoset.from_relation(len(E), lambda i, j: E[i] < E[j], E)

    @property
    def dims(self) -> list[int]:
        return [U.dim - 1 for U in self.elements]

    @property
    def n(self) -> int:
        return self.elements[self.top].dim - 1

    def proper(self) -> list[int]:
        return [i for i in range(len(self.elements)) if i != self.top]


def generate_poset(generators: Sequence[Subspace], ambient: Subspace, euclidean: bool = False) -> SubspacePoset:
    """Intersection closure of the generators (dropping empty geometric subspaces) plus the ambient."""
    for G in generators:
        if G.ambient != ambient.ambient or not G <= ambient:
            raise PosetError("generator not contained in ambient")
        if G == ambient:
            raise PosetError("generators must be proper subspaces")
    N = ambient.ambient
    infinity = Subspace.span([[1 if k == j + 1 else 0 for k in range(N)] for j in range(N - 1)], N) \
        if euclidean else None

    def nonempty(U: Subspace) -> bool:
        if U.dim == 0:
            return False
        if euclidean and U <= infinity:
            return False
        return True

    S = {G for G in generators if nonempty(G)}
    frontier = set(S)
    while frontier:
        new = set()
        for A in frontier:
            for B in list(S):
                C = intersect(A, B)
                if nonempty(C) and C not in S and C not in new:
                    new.add(C)
        S |= new
        frontier = new
    elems = sorted(S, key=lambda U: (U.dim, U.basis)) + [ambient]
    return SubspacePoset(elems, len(elems) - 1, euclidean)


def tits_and_st(sp: SubspacePoset) -> tuple[ChainComplex, ChainComplex]:
    P = sp.poset
    proper = sp.proper()
    T = simplicial_chains(P.chains(proper))
    simps = [tuple(("v", i) for i in c) for c in P.chains(proper)]
    cone_pts = []
    for s in simps:
        cone_pts.append(s + (("~N",),))
        cone_pts.append(s + (("~S",),))
    allsimp = simps + cone_pts + [(("~N",),), (("~S",),)]
    ST = simplicial_chains(allsimp)
    return T.check(), ST.check()


def st_relative(sp: SubspacePoset) -> ChainComplex:
    """Chains of the whole poset containing the top, modulo the rest (same homology as reduced ST)."""
    return tcofib(point_diagram(sp.poset))


# -- sphere and point models for polytope complexes -------------------------------

def _angle_key(u: Sequence[Fraction]):
    """Exact sort key for a nonzero vector of Q^2 by angle in [0, 2pi)."""
    x, y = u
    half = 0 if (y > 0 or (y == 0 and x > 0)) else 1
    return half


def _sort_by_angle(vecs: list[tuple[Fraction, Fraction]]) -> list[int]:
    from functools import cmp_to_key

    def cmp(a, b):
        ha, hb = _angle_key(vecs[a]), _angle_key(vecs[b])
        if ha != hb:
            return ha - hb
        cr = vecs[a][0] * vecs[b][1] - vecs[a][1] * vecs[b][0]
        return -1 if cr > 0 else (1 if cr < 0 else 0)

    return sorted(range(len(vecs)), key=cmp_to_key(cmp))


def sphere_model(U: Subspace, rays: Sequence[Sequence[int]]) -> ChainComplex:
    """Simplicial model of S(U) whose vertices are the declared rays lying in U.

    dim U = 1: two points; dim U = 2: the cycle of rays in angular order;
    dim U >= 3: the boundary of the cross-polytope, which needs U to be a
    coordinate subspace whose rays are exactly the signed unit vectors.
    """
    inside = sorted({primitive(r) for r in rays if U.contains_vector(r)})
    rs = set(inside)
    if any(tuple(-x for x in r) not in rs for r in inside):
        raise PosetError("ray set not antipode-closed")
    d = U.dim
    if d == 1:
        if len(inside) != 2:
            raise PosetError("a 1-dimensional subspace must contain exactly one antipodal pair")
        return simplicial_chains([(r,) for r in inside])
    if d == 2:
        if len(inside) < 4:
            raise PosetError("a plane needs at least two antipodal pairs for a simplicial circle")
        coords = [tuple(U.coords(r)) for r in inside]
        order = _sort_by_angle(coords)
        cyc = [inside[k] for k in order]
        simps = [(r,) for r in cyc]
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            simps.append(tuple(sorted((a, b))))
        return simplicial_chains(simps)
    support = [j for j in range(U.ambient) if any(b[j] for b in U.basis)]
    if len(support) != d:
        raise PosetError("cross-polytope models need coordinate subspaces")
    unit = {tuple((s if k == j else 0) for k in range(U.ambient)) for j in support for s in (1, -1)}
    if rs != unit:
        raise PosetError("cross-polytope models need exactly the signed unit vectors as rays")
    simps = set()
    for r in range(1, d + 1):
        for sub in combinations(support, r):
            for signs in product((1, -1), repeat=r):
                verts = tuple(sorted(tuple((s if k == j else 0) for k in range(U.ambient)) for j, s in zip(sub, signs)))
                simps.add(verts)
    return simplicial_chains(simps)


def _inclusion(A: ChainComplex, B: ChainComplex) -> ChainMap:
    f = {}
    for k in A.degree:
        if k not in B.degree:
            raise PosetError("sphere models are not compatible under inclusion")
        f[k] = {k: 1}
    return f


def model_diagram(sp: SubspacePoset, rays: Sequence[Sequence[int]] | None = None) -> Diagram:
    """Points for Euclidean posets, sphere models from ``rays`` for spherical ones."""
    P = sp.poset
    if sp.euclidean or rays is None:
        return point_diagram(P)
    objs = [sphere_model(U, rays) for U in sp.elements]
    return Diagram(P, objs, lambda i, j: _inclusion(objs[i], objs[j]))


@dataclass
class PtDeskResult:
    cube: CubeDiagram
    tcofib: ChainComplex
    homology: HomologyResult
    cube_homology: HomologyResult
    desk_restriction: bool = True


def pt_complex_desk(sp: SubspacePoset, rays: Sequence[Sequence[int]] | None = None) -> PtDeskResult:
    D = model_diagram(sp, rays)
    dims = sp.dims
    cube = cube_model(D, dims)
    tc = tcofib(D).check()
    H = homology(tc)
    Hc = homology(iterated_cone(cube).check())
    return PtDeskResult(cube, tc, H, Hc)


# -- comparisons and checks ----------------------------------------------------------

@dataclass
class CompareReport:
    equal: bool
    left: dict
    right: dict
    extra: dict = field(default_factory=dict)


def barycentric_compare(D: Diagram) -> CompareReport:
    H1 = homology(hocolim(D).check())
    H2 = homology(hocolim(barycentric_diagram(D)).check())
    return CompareReport(H1.signature() == H2.signature(), H1.to_json(), H2.to_json())


def cube_model_compare(D: Diagram, dims: Sequence[int], orders: int = 2) -> CompareReport:
    """Total cofiber over the poset vs over the flag cube (hocolim model and iterated cones)."""
    cube = cube_model(D, dims)
    H1 = homology(tcofib(D).check())
    H2 = homology(cube_tcofib(cube).check())
    sigs = {}
    perms = list(permutations(range(cube.n)))
    step = max(1, len(perms) // orders) if orders else 1
    for p in perms[::step]:
        sigs[p] = homology(iterated_cone(cube, p).check()).signature()
    cones_agree = len({tuple(sorted(s.items())) for s in sigs.values()}) == 1
    Hit = next(iter(sigs.values()))
    equal = H1.signature() == H2.signature() == Hit and cones_agree
    return CompareReport(equal, H1.to_json(), H2.to_json(),
                         {"iterated_cone_orders": [list(p) for p in sigs], "order_independent": cones_agree})


@dataclass
class SolomonTitsReport:
    n: int
    homology: dict
    concentrated: bool
    free: bool
    rank: int
    hypothesis: bool
    verdict: str  # "pass" | "fail" | "no judgment"


def solomon_tits_check(sp: SubspacePoset, n: int | None = None) -> SolomonTitsReport:
    T, ST = tits_and_st(sp)
    H = reduced_homology(ST)
    P = sp.poset
    proper = sp.proper()
    chs = P.chains(proper)
    if n is None:
        n = max((len(c) for c in chs), default=0)
    degs = H.nonzero_degrees()
    concentrated = all(d == n for d in degs)
    free = not any(H.tors(d) for d in degs)
    # hypothesis: graded proper part, connected order complex when it should be
    maximal = [c for c in chs if not any(set(c) < set(d) for d in chs)]
    graded = len({len(c) for c in maximal}) <= 1
    connected = True
    if n >= 2:
        connected = reduced_homology(T).rank(0) == 0
    hyp = graded and connected
    ok = concentrated and free
    verdict = "pass" if ok else ("fail" if hyp else "no judgment")
    return SolomonTitsReport(n, H.to_json(), concentrated, free, H.rank(n), hyp, verdict)


# -- random posets ------------------------------------------------------------------

def random_ranked_poset(rng: random.Random, max_elems: int = 10, max_height: int = 4,
                        density: float = 0.45) -> tuple[FinitePoset, list[int]]:
    """Random poset with a terminal object and a valid dimension map."""
    n = rng.randint(1, max_height)  # dimension of the terminal object
    k = rng.randint(0, max_elems - 1)
    levels = sorted(rng.randrange(n) for _ in range(k)) if n > 0 else []
    edges = []
    for a in range(k):
        for b in range(k):
            if levels[a] < levels[b] and rng.random() < density:
                edges.append((a, b))
    top = k
    edges += [(a, top) for a in range(k)]
    P = FinitePoset.from_covers(k + 1, edges)
    return P, levels + [n]
