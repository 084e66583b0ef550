"""The acceptance battery: fourteen seeded checks, each returning a pass/fail record."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable

from . import oracles
from .flag_complexes import (
    barycentric_compare,
    cube_model_compare,
    downset_diagram,
    generate_poset,
    interval_diagram,
    point_diagram,
    random_ranked_poset,
    solomon_tits_check,
)
from .geometry import (
    Cover,
    Polytope,
    Spherical,
    common_refinement,
    is_weak_subdivision,
    join_with_sphere,
    polytope_volume,
    refines,
    triangulate,
)
from .k_calculator import (
    DeskReals,
    dupont_eigenspace_check,
    dupont_splitting_e2,
    dupont_total,
    k_circle,
    k_line_full,
    k_line_translation,
    k_s0,
    koszul_oracle,
    lines_poset,
    reduced_s1_table,
    vector_group_homology,
)
from .pt_steinberg import (
    is_suspension_from,
    make_desk,
    minimal_suspension_subspace,
    pt_class,
    pt_equal,
    steinberg_quotient,
)
from .qlinalg import Subspace, intersect, primitive, subspace_sum
from .scissors_witness import (
    decide_area_e2,
    dehn_invariant,
    box_measured,
    regular_tetrahedron,
    translation_invariants_e2,
    verify_witness,
    DecompositionWitness,
)

SEED = 20240601


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0
    limit: float | None = None
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        lim = f" (limit {self.limit:.0f}s)" if self.limit else ""
        return f"[{status}] {self.number:2d}. {self.title}: {self.detail} [{self.seconds:.1f}s{lim}]"

    def to_json(self) -> dict:
        return {"number": self.number, "title": self.title, "passed": self.passed,
                "detail": self.detail, "seconds": round(self.seconds, 3), "limit": self.limit}


def _timed(number: int, title: str, limit: float | None = None):
    def wrap(fn: Callable[[int], tuple[bool, str]]):
        def run(seed: int = SEED) -> CriterionResult:
            t0 = time.perf_counter()
            ok, detail = fn(seed)
            dt = time.perf_counter() - t0
            if limit is not None and dt >= limit:
                ok = False
                detail += f"; exceeded time limit {limit:.0f}s"
            return CriterionResult(number, title, ok, detail, dt, limit)
        run.__name__ = fn.__name__
        run.number = number
        run.title = title
        return run
    return wrap


# 1 -------------------------------------------------------------------------------------

@_timed(1, "common refinement of random weak subdivisions", limit=60)
def refinement_property(seed: int, pairs: int = 200) -> tuple[bool, str]:
    rng = random.Random(seed)
    bad = 0
    for _ in range(pairs):
        P = oracles.random_polygon(rng, 2)
        c1 = oracles.random_cover(rng, P, cuts=1, max_pieces=3)
        c2 = oracles.random_cover(rng, P, cuts=1, max_pieces=3)
        R = common_refinement(c1, c2)
        if not (is_weak_subdivision(R) and refines(R, c1) and refines(R, c2)):
            bad += 1
    return bad == 0, f"{pairs - bad}/{pairs} refinements validated"


# 2 -------------------------------------------------------------------------------------

def _triangles_of(P: Polytope) -> list[tuple]:
    return [s.vertices for s in P.simplices]


def _is_planar_complex(tris: list[tuple]) -> bool:
    """Pairwise interiors disjoint and no vertex inside another triangle's edge (exact, by clipping)."""
    from bisect import bisect_left, bisect_right

    from .scissors_witness import _ccw, clip

    polys = [_ccw(t) for t in tris]
    boxes = [(min(p[0] for p in t), max(p[0] for p in t), min(p[1] for p in t), max(p[1] for p in t))
             for t in polys]
    verts = sorted({v for t in tris for v in t})
    for t in polys:
        for k in range(3):
            a, b = t[k], t[(k + 1) % 3]
            lo, hi = min(a[0], b[0]), max(a[0], b[0])
            for v in verts[bisect_left(verts, (lo,)):bisect_right(verts, (hi, float("inf")))]:
                if v in (a, b):
                    continue
                cr = (b[0] - a[0]) * (v[1] - a[1]) - (b[1] - a[1]) * (v[0] - a[0])
                if cr == 0 and min(a[1], b[1]) <= v[1] <= max(a[1], b[1]):
                    return False
    order = sorted(range(len(polys)), key=lambda i: boxes[i][0])
    for n, i in enumerate(order):
        for j in order[n + 1:]:
            if boxes[j][0] >= boxes[i][1]:
                break
            if boxes[j][2] >= boxes[i][3] or boxes[i][2] >= boxes[j][3]:
                continue
            if clip(polys[i], polys[j]):
                return False
    return True


@_timed(2, "triangulation of random polygon unions")
def triangulation_property(seed: int, cases: int = 100) -> tuple[bool, str]:
    rng = random.Random(seed + 2)
    bad = []
    for case in range(cases):
        polys = [oracles.random_polygon(rng, 2, 6) for _ in range(rng.randint(1, 4))]
        T = triangulate(polys)
        vol = sum(polytope_volume(Polytope.make("E2", [s])) for s in T.top)
        oracle = oracles.union_area_inclusion_exclusion([_triangles_of(P) for P in polys])
        ok = vol == oracle and _is_planar_complex(T.top)
        for P, mem in zip(polys, T.members):
            ok = ok and pt_equal(pt_class([(1, P)]), pt_class([(1, Polytope.make("E2", [T.top[i] for i in mem]))]))
        if not ok:
            bad.append(case)
    return not bad, f"{cases - len(bad)}/{cases} triangulations exact (volume vs inclusion-exclusion)"


# 3 -------------------------------------------------------------------------------------

@_timed(3, "pt normal form kills subdivision relations")
def pt_relations(seed: int, relations: int = 300) -> tuple[bool, str]:
    rng = random.Random(seed + 3)
    bad = 0
    for k in range(relations):
        if k % 3 == 0:
            a, b = sorted({Fraction(rng.randint(-20, 20), rng.randint(1, 5)) for _ in range(2)} | {Fraction(99)})[:2]
            P = Polytope.make("E1", [[(a,), (b,)]])
            cuts = sorted({a + (b - a) * Fraction(rng.randint(1, 9), 10) for _ in range(rng.randint(1, 3))})
            ends = [a] + cuts + [b]
            pieces = [Polytope.make("E1", [[(x,), (y,)]]) for x, y in zip(ends, ends[1:])]
            c = Cover(P, pieces)
        else:
            P = oracles.random_polygon(rng, 2, 6)
            c = oracles.random_cover(rng, P, cuts=rng.randint(1, 2))
        rel = pt_class([(1, c.target)] + [(-1, Q) for Q in c.pieces])
        if not rel.is_zero():
            bad += 1
        if k % 10 == 1 and c.target.geometry.n == 2:
            c2 = oracles.random_cover(rng, P, cuts=1)
            R = common_refinement(c, c2)
            lhs = pt_class([(1, Q) for Q in c.pieces])
            if not pt_equal(lhs, pt_class([(1, Q) for Q in R.pieces])):
                bad += 1
    return bad == 0, f"{relations} relations, {bad} failures"


# 4 -------------------------------------------------------------------------------------

@_timed(4, "colimit presentation on subdivision chains")
def colimit_chains(seed: int, chains: int = 50) -> tuple[bool, str]:
    from .pt_steinberg import verify_colimit_presentation

    rng = random.Random(seed + 4)
    bad = 0
    for k in range(chains):
        chain = oracles.random_chain(rng, "E1" if k % 2 == 0 else "E2", stages=3)
        if not verify_colimit_presentation(chain).ok:
            bad += 1
    return bad == 0, f"{chains - bad}/{chains} chains (E1 and E2) verified"


# 5 -------------------------------------------------------------------------------------

@_timed(5, "barycentric and cube models agree")
def model_equivalences(seed: int, posets: int = 100) -> tuple[bool, str]:
    rng = random.Random(seed + 5)
    bad = 0
    for _ in range(posets):
        P, dims = random_ranked_poset(rng, max_elems=10)
        for D in (point_diagram(P), interval_diagram(P), downset_diagram(P)):
            if not (barycentric_compare(D).equal and cube_model_compare(D, dims).equal):
                bad += 1
    return bad == 0, f"{posets} posets x 3 diagrams, {bad} disagreements"


# 6 -------------------------------------------------------------------------------------

def _random_planes_q3(rng: random.Random, k: int) -> list[Subspace]:
    out = []
    while len(out) < k:
        n = [rng.randint(-2, 2) for _ in range(3)]
        if not any(n):
            continue
        U = Subspace.span([n], 3).annihilator()
        if all(U != V for V in out):
            out.append(U)
    return out


@_timed(6, "Solomon-Tits on desk subspace posets")
def solomon_tits(seed: int) -> tuple[bool, str]:
    W2 = Subspace.full(2)
    notes = []
    ok = True
    for k in range(2, 9):
        lines = [Subspace.span([[1, i]], 2) for i in range(k - 1)] + [Subspace.span([[0, 1]], 2)]
        r = solomon_tits_check(generate_poset(lines, W2), 1)
        good = r.concentrated and r.free and r.rank == k - 1
        ok &= good
        notes.append(f"k={k}:{r.rank}")
    rng = random.Random(seed + 6)
    q3 = 0
    for _ in range(6):
        planes = _random_planes_q3(rng, rng.randint(2, 4))
        r = solomon_tits_check(generate_poset(planes, Subspace.full(3)), 2)
        if r.hypothesis:
            q3 += 1
            ok &= r.concentrated and r.free
    return ok and q3 > 0, "Q^2 ranks " + " ".join(notes) + f"; {q3} connected Q^3 posets free in degree 2"


# 7 -------------------------------------------------------------------------------------

def _s1_rays(k: int) -> list[tuple[int, int]]:
    base = [(1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1)][:k]
    return [r for b in base for r in (b, (-b[0], -b[1]))]


@_timed(7, "Steinberg exactness on S0 and S1 desks")
def steinberg_exactness(seed: int) -> tuple[bool, str]:
    out = []
    d = make_desk([(1,), (-1,)])
    q = steinberg_quotient(d)
    ok = (d.rank, q.suspension_rank, q.st_rank) == (2, 1, 1) and q.torsion_free
    out.append(f"S0 {d.rank}={q.suspension_rank}+{q.st_rank}")
    for k in range(2, 7):
        d = make_desk(_s1_rays(k))
        q = steinberg_quotient(d)
        ok &= d.rank == q.suspension_rank + q.st_rank and q.torsion_free
        out.append(f"S1/{k} {d.rank}={q.suspension_rank}+{q.st_rank}")
    return ok, ", ".join(out)


# 8 -------------------------------------------------------------------------------------

def _random_simplex_in(rng: random.Random, V: Subspace) -> list[tuple[int, ...]]:
    while True:
        rays = [tuple(primitive(V.from_coords([rng.randint(-3, 3) for _ in range(V.dim)]))) for _ in range(V.dim)]
        if all(any(r) for r in rays) and Subspace.span(rays, V.ambient).dim == V.dim:
            return rays


def _in_sphere(V: Subspace, simplices) -> Polytope:
    return Polytope.make(Spherical(V.dim - 1), simplices, frame=V if V.dim < V.ambient else None)


@_timed(8, "minimal suspension subspace recovery")
def suspension_analysis(seed: int, cases: int = 100) -> tuple[bool, str]:
    rng = random.Random(seed + 8)
    bad = 0
    for _ in range(cases):
        V, W = oracles.random_subspace_pair(rng, 4)
        P = _in_sphere(V, [_random_simplex_in(rng, V)])
        a = minimal_suspension_subspace(join_with_sphere(P, V, W))
        if not (a.U == V and a.resuspension_ok):
            bad += 1
    fam = 0
    for _ in range(10):
        # intersection: a suspension from V1 and V2 is one from V1 meet V2
        V, _ = oracles.random_subspace_pair(rng, 4)
        if V.dim > 2:
            continue
        extra = [[rng.randint(-2, 2) for _ in range(4)] for _ in range(2)]
        V1 = subspace_sum(V, Subspace.span([extra[0]], 4))
        V2 = subspace_sum(V, Subspace.span([extra[1]], 4))
        Q = join_with_sphere(_in_sphere(V, [_random_simplex_in(rng, V)]), V)
        if not (is_suspension_from(Q, V1) and is_suspension_from(Q, V2)
                and is_suspension_from(Q, intersect(V1, V2))):
            bad += 1
        # monotonicity: pieces suspended from V cover a polytope suspended from V
        s1 = _random_simplex_in(rng, V)
        P = _in_sphere(V, [s1])
        if V.dim >= 2:
            mid = tuple(a + b for a, b in zip(s1[0], s1[1]))
            halves = [[mid if i == 0 else r for i, r in enumerate(s1)],
                      [mid if i == 1 else r for i, r in enumerate(s1)]]
            pieces = [join_with_sphere(_in_sphere(V, [h]), V) for h in halves]
            whole = join_with_sphere(P, V)
            same = pt_equal(pt_class([(1, whole)]), pt_class([(1, x) for x in pieces]))
            if not (same and minimal_suspension_subspace(whole).U <= V):
                bad += 1
        fam += 1
    return bad == 0, f"{cases} recoveries + {fam} intersection/monotonicity families, {bad} failures"


# 9 -------------------------------------------------------------------------------------

@_timed(9, "K-group tables and Koszul oracle", limit=10)
def k_tables(seed: int) -> tuple[bool, str]:
    ok = True
    for d in range(1, 5):
        V = DeskReals.of_dim(d)
        top = 5
        ok &= k_line_translation(V, top).dims() == [comb(d, n + 1) for n in range(top + 1)]
        ok &= k_circle(V, "SO2", top).dims() == [comb(d, n + 1) for n in range(top + 1)]
        alt = [comb(d, n + 1) if n % 2 == 0 else 0 for n in range(top + 1)]
        ok &= k_line_full(V, top).dims() == alt
        ok &= k_circle(V, "O2", top).dims() == alt
    checked = 0
    for d in range(0, 6):
        for i in range(0, 6):
            if d >= 1:
                ok &= vector_group_homology(DeskReals.of_dim(d), i).dim == koszul_oracle(d, i)
                checked += 1
    return ok, f"d=1..4 tables match binomials; {checked} Koszul cross-checks"


# 10 ------------------------------------------------------------------------------------

@_timed(10, "reduced S0 table")
def s0_table(seed: int) -> tuple[bool, str]:
    r = k_s0("O1", reduced=True, max_degree=10)
    ok = True
    for k in range(11):
        e = r.degrees[k]
        want = [2] if k % 2 == 0 else []
        ok &= e["dim"] == 0 and e["torsion"] == want and e["rational_dim"] == 0
    return ok, "Z/2 in even degrees 0..10, zero in odd, zero rationally"


# 11 ------------------------------------------------------------------------------------

def _lines(n: int) -> list[tuple[int, int]]:
    return [(1, i) for i in range(n - 1)] + [(0, 1)]


@_timed(11, "Dupont splitting and dilation eigenspaces")
def dupont(seed: int) -> tuple[bool, str]:
    ok = True
    cases = 0
    for d in (1, 2):
        V = DeskReals.of_dim(d)
        for nl in range(1, 6):
            L = _lines(nl)
            for m in range(3):
                e = dupont_splitting_e2(L, V, m)
                g = dupont_total(lines_poset(L), V, m)
                ok &= (e.kernel_dim, e.cokernel_dim) == (g.get(1, 0), g.get(2, 0))
                cases += 1
    eig = 0
    for a in (Fraction(2), Fraction(3), Fraction(1, 2)):
        for m in range(2):
            for q in (1, 2):
                r = dupont_eigenspace_check(a, m, q, _lines(3), DeskReals.of_dim(2))
                ok &= r.ok and r.scalar == a ** (m + q)
                eig += 1
    return ok, f"{cases} splitting comparisons, {eig} eigenspace checks"


# 12 ------------------------------------------------------------------------------------

@_timed(12, "reduced S1 table shape")
def reduced_s1(seed: int) -> tuple[bool, str]:
    ok = True
    for d in (1, 2, 3):
        for N in (2, 4, 6):
            r = reduced_s1_table(N, DeskReals.of_dim(d), 5)
            for k in range(6):
                e = r.reduced_k[k]
                want = [N // 2] if (k % 2 == 0 and N // 2 > 1) else []
                ok &= e["Rbar_dim"] == comb(d, k + 1) and e["torsion"] == want
                if k % 2 == 1:
                    ok &= r.rational_o2[k] == 0
    return ok, "d in 1..3, N in {2,4,6}: (R/Q)^k+1 ranks, Z/(N/2) in even degrees, odd O2 rational part 0"


# 13 ------------------------------------------------------------------------------------

@_timed(13, "K0 witnesses and Dehn invariant")
def k0_witnesses(seed: int) -> tuple[bool, str]:
    tri = Polytope.make("E2", [[(0, 0), (2, 0), (0, 1)]])
    sq = Polytope.make("E2", [[(0, 0), (1, 0), (1, 1)], [(0, 0), (1, 1), (0, 1)]])
    w = decide_area_e2(tri, sq)
    witness_ok = isinstance(w, DecompositionWitness) and verify_witness(w).ok
    inv_differ = translation_invariants_e2(tri) != translation_invariants_e2(sq)
    cube_zero = dehn_invariant(box_measured(1, 1, 1)).is_zero()
    tet = dehn_invariant(*regular_tetrahedron())
    tet_nonzero = not tet.is_zero() and tet.terms() == [("l", "arccos(1/3)", Fraction(6))]
    ok = witness_ok and inv_differ and cube_zero and tet_nonzero
    npieces = len(w.pieces) if isinstance(w, DecompositionWitness) else 0
    return ok, (f"witness {npieces} pieces verified={witness_ok}; translation invariants differ={inv_differ}; "
                f"Dehn(cube)=0 {cube_zero}; Dehn(tetrahedron)=6 l(x)theta {tet_nonzero}")


CRITERIA = [refinement_property, triangulation_property, pt_relations, colimit_chains,
            model_equivalences, solomon_tits, steinberg_exactness, suspension_analysis,
            k_tables, s0_table, dupont, reduced_s1, k0_witnesses]

SUITE_LIMIT = 300.0


def run_suite(seed: int = SEED, only: list[int] | None = None) -> list[CriterionResult]:
    """Run every criterion; the last record times the whole battery."""
    t0 = time.perf_counter()
    out = [c(seed) for c in CRITERIA if only is None or c.number in only]
    dt = time.perf_counter() - t0
    if only is None or 14 in only:
        full = only is None
        ok = full and dt < SUITE_LIMIT
        out.append(CriterionResult(14, "full battery in one process", ok,
                                   f"{len(out)} criteria in {dt:.1f}s" if full else "partial run, not timed",
                                   dt, SUITE_LIMIT))
    return out
