"""Polytope groups Pt(X): normal forms, the twisted isometry action,
spherical suspensions and the desk-scale Steinberg quotient.

An element of Pt(X) is an integer-valued step function on X modulo
measure-zero changes. We store it as a list of almost-disjoint simplicial
cones with nonzero integer labels; equality is decided on a common
arrangement.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

from . import cones
from .cones import Cell, canon, dot
from .geometry import (
    GeometryError,
    GeometryId,
    Isometry,
    Polytope,
    Spherical,
    join_with_sphere,
    is_weak_subdivision,
    Cover,
    polytope_from_cells,
    ray_to_point,
)
from .qlinalg import (
    Q,
    Subspace,
    hermite_normal_form,
    hnf_reduce,
    intersect,
    inverse,
    invariant_factors,
    matmul,
    matvec,
    orthogonal_complement,
    primitive,
    to_q,
    transpose,
)


@dataclass(frozen=True)
class PtElement:
    geometry: GeometryId
    simplices: tuple[tuple[tuple[int, ...], ...], ...]  # rays in cone coordinates
    labels: tuple[int, ...]
    frame: Subspace | None = None

    def cells(self) -> list[Cell]:
        return [cones.simplex_cell(s) for s in self.simplices]

    def is_zero(self) -> bool:
        return not self.simplices

    def __neg__(self) -> "PtElement":
        return PtElement(self.geometry, self.simplices, tuple(-x for x in self.labels), self.frame)

    def __add__(self, other: "PtElement") -> "PtElement":
        return pt_sum([(1, self), (1, other)])

    def __sub__(self, other: "PtElement") -> "PtElement":
        return pt_sum([(1, self), (-1, other)])

    def value_at(self, p: Sequence[int]) -> int:
        """Label at a point that lies off every simplex boundary."""
        total = 0
        for c, lab in zip(self.cells(), self.labels):
            if c.contains_strictly(p):
                total += lab
        return total

    def to_json(self) -> dict:
        return {
            "geometry": str(self.geometry),
            "arrangement": [[[str(x) for x in ray_to_point(self.geometry, r, self.frame)] for r in s]
                            for s in self.simplices],
            "labels": list(self.labels),
            **({"frame": [[str(x) for x in b] for b in self.frame.basis]} if self.frame is not None else {}),
        }


def zero_element(geometry: GeometryId, frame: Subspace | None = None) -> PtElement:
    return PtElement(geometry, (), (), frame)


def _labelled_arrangement(parts: Sequence[tuple[int, list[Cell]]]) -> tuple[list[Cell], list[int]]:
    """Cells of a common arrangement with label = sum of coefficients of the parts containing them."""
    simplices, owner = [], []
    for k, (_, cells) in enumerate(parts):
        for c in cells:
            simplices.append(c)
            owner.append(k)
    arr = cones.build_arrangement(simplices)
    out_cells, out_labels = [], []
    for c, ins in zip(arr.cells, arr.inside):
        lab = sum(parts[k][0] for k in {owner[i] for i in ins})
        if lab:
            out_cells.append(c)
            out_labels.append(lab)
    return out_cells, out_labels


def _from_cells(geom, frame, cells, labels) -> PtElement:
    simps, labs = [], []
    for c, lab in zip(cells, labels):
        for s in cones.pulling_triangulation(c):
            simps.append(s)
            labs.append(lab)
    return PtElement(geom, tuple(simps), tuple(labs), frame)


def pt_class(terms: Iterable[tuple[int, Polytope]]) -> PtElement:
    """Normal form of a formal sum of polytopes: each polytope contributes its indicator."""
    terms = [(int(c), P) for c, P in terms if c]
    if not terms:
        raise GeometryError("empty sum has no geometry; use zero_element")
    geom, frame = terms[0][1].geometry, terms[0][1].frame
    for _, P in terms:
        if P.geometry != geom or P.frame != frame:
            raise GeometryError(f"geometry mismatch: {geom} vs {P.geometry}")
    cells, labels = _labelled_arrangement([(c, P.cells()) for c, P in terms])
    return _from_cells(geom, frame, cells, labels)


def pt_sum(terms: Iterable[tuple[int, PtElement]]) -> PtElement:
    terms = list(terms)
    geom, frame = terms[0][1].geometry, terms[0][1].frame
    parts = []
    for c, a in terms:
        if a.geometry != geom or a.frame != frame:
            raise GeometryError("geometry mismatch")
        # the simplices of an element are almost disjoint, so each is its own part
        for s, lab in zip(a.cells(), a.labels):
            parts.append((c * lab, [s]))
    parts = [p for p in parts if p[0]]
    if not parts:
        return zero_element(geom, frame)
    cells, labels = _labelled_arrangement(parts)
    return _from_cells(geom, frame, cells, labels)


def pt_equal(a: PtElement, b: PtElement) -> bool:
    if a.geometry != b.geometry or a.frame != b.frame:
        raise GeometryError("geometry mismatch")
    return pt_sum([(1, a), (-1, b)]).is_zero()


def g_act(g: Isometry, a: PtElement, twisted: bool = True) -> PtElement:
    if g.geometry != a.geometry or a.frame is not None:
        raise GeometryError("isometry and element live in different geometries")
    s = g.sign if twisted else 1
    simps = tuple(tuple(canon(g.apply_ray(r)) for r in simp) for simp in a.simplices)
    return PtElement(a.geometry, simps, tuple(s * x for x in a.labels), a.frame)


# -- colimit presentation -------------------------------------------------------

@dataclass
class ColimitReport:
    ok: bool
    steps: int
    generators_checked: int
    mismatches: list[dict] = field(default_factory=list)


def verify_colimit_presentation(chain: Sequence[Sequence[Polytope]]) -> ColimitReport:
    """Check the transition maps of a chain in the subdivision category.

    Each stage is a tuple of almost-disjoint simplices; stage k+1 must be
    obtained from stage k by weakly subdividing simplices and adding new
    simplices. Old simplices map to the sum of the new ones inside them, new
    simplices are hit by zero. The check confirms each generator class equals
    the class of its image, and the same for the total class.
    """
    if len(chain) < 1:
        raise GeometryError("empty chain")
    for stage in chain:
        for P in stage:
            if len(P.simplices) != 1:
                raise GeometryError("chain objects are tuples of single simplices")
        _check_almost_disjoint(stage)
    rep = ColimitReport(True, len(chain) - 1, 0)
    for k in range(len(chain) - 1):
        a, b = chain[k], chain[k + 1]
        images: dict[int, list[int]] = {i: [] for i in range(len(a))}
        for j, Bj in enumerate(b):
            hosts = _hosts(Bj, a)
            if len(hosts) > 1:
                raise GeometryError(f"stage {k + 1} simplex {j} is not inside a single simplex")
            if hosts:
                images[hosts[0]].append(j)
        for i, Ai in enumerate(a):
            pieces = [b[j] for j in images[i]]
            if not pieces or not is_weak_subdivision(Cover(Ai, pieces)):
                raise GeometryError(f"stage {k} simplex {i} is not subdivided by its image")
            rep.generators_checked += 1
            lhs = pt_class([(1, Ai)])
            rhs = pt_class([(1, P) for P in pieces])
            if not pt_equal(lhs, rhs):
                rep.ok = False
                rep.mismatches.append({"step": k, "generator": i})
        total_a = pt_class([(1, P) for P in a])
        total_img = pt_class([(1, b[j]) for i in images for j in images[i]])
        if not pt_equal(total_a, total_img):
            rep.ok = False
            rep.mismatches.append({"step": k, "generator": "total"})
    return rep


def _check_almost_disjoint(stage: Sequence[Polytope]) -> None:
    cells = [P.cells()[0] for P in stage]
    for i, j in combinations(range(len(cells)), 2):
        if cells[i].key == cells[j].key or cones.interiors_overlap(cells[i], cells[j]):
            raise GeometryError(f"simplices {i} and {j} overlap")


def _hosts(B: Polytope, stage: Sequence[Polytope]) -> list[int]:
    cb = B.cells()[0]
    out = []
    for i, A in enumerate(stage):
        ca = A.cells()[0]
        if cb.key == ca.key or cones.interiors_overlap(cb, ca):
            out.append(i)
    return out


# -- suspensions ------------------------------------------------------------------

@dataclass
class SuspensionAnalysis:
    U: Subspace
    compressed: Polytope | None  # None when U = 0 (Q is the whole sphere)
    essential_normals: list[tuple[int, ...]]
    resuspension_ok: bool


def _essential_hyperplanes(Q_: Polytope) -> list[tuple[int, ...]]:
    """Hyperplanes across which the indicator of Q jumps."""
    arr = cones.build_arrangement(Q_.cells(), mode="global")
    seen: dict[frozenset, int] = {}
    facet_plane: dict[frozenset, tuple] = {}
    for c in arr.cells:
        for g in c.facet_normals():
            F = frozenset(r for r in c.rays if dot(g, r) == 0)
            seen[F] = seen.get(F, 0) + 1
            facet_plane[F] = cones.canon_hyperplane(g)
    ess = sorted({facet_plane[F] for F, k in seen.items() if k == 1})
    return ess


def _generic_point(cell: Cell, avoid: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """A point strictly inside ``cell`` lying on none of the hyperplanes in ``avoid``."""
    x = cell.interior_point()
    m = len(x)
    fn = cell.facet_normals()
    for t in range(1, 10_000):
        v = tuple(t ** k for k in range(m))
        K = 1
        for g in fn:
            gx, gv = dot(g, x), dot(g, v)
            K = max(K, 2 * abs(gv) // gx + 2)
        p = tuple(K * a + b for a, b in zip(x, v))
        if all(dot(h, p) != 0 for h in avoid) and cell.contains_strictly(p):
            return p
    raise RuntimeError("no generic point found")


def minimal_suspension_subspace(Q_: Polytope, gram=None) -> SuspensionAnalysis:
    if Q_.geometry.euclidean:
        raise GeometryError("minimal suspension needs a spherical polytope")
    if Q_.frame is not None:
        return _framed_suspension(Q_, gram)
    N = Q_.geometry.m
    ess = _essential_hyperplanes(Q_)
    if gram is not None:
        Ginv = inverse(to_q(gram))
        dirs = [matvec(Ginv, h) for h in ess]
    else:
        dirs = [list(h) for h in ess]
    U = Subspace.span(dirs, N)
    qcells = Q_.cells()
    qplanes = sorted({cones.canon_hyperplane(g) for c in qcells for g in c.facet_normals()})

    def member(p) -> bool:
        return any(c.contains_strictly(p) for c in qcells)

    if U.dim == 0:
        P = None
        ok = _is_whole_sphere(Q_)
        return SuspensionAnalysis(U, None, ess, ok)
    # chambers of S(U) cut by the essential hyperplanes, in U-coordinates
    d = U.dim
    basis = [list(b) for b in U.basis]
    restricted = []
    for h in ess:
        r = [sum(a * b for a, b in zip(h, u)) for u in basis]
        r = primitive(r)
        if any(r):
            restricted.append(cones.canon_hyperplane(r))
    restricted = sorted(set(restricted))
    keep = []
    for signs in product((1, -1), repeat=d):
        orth = cones.simplex_cell([tuple(s if i == k else 0 for i in range(d)) for k, s in enumerate(signs)])
        for c in cones.split_all(orth, restricted):
            x = primitive(U.from_coords(c.interior_point()))
            p = _lift_generic(x, ess, qplanes, N)
            if member(p):
                keep.append(c)
    frame = None if d == N else U
    geom = Spherical(d - 1)
    P = polytope_from_cells(geom, keep, frame) if keep else None
    ok = False
    if P is not None:
        if d == N:
            ok = pt_equal(pt_class([(1, P)]), pt_class([(1, Q_)]))
        else:
            J = join_with_sphere(P, U, gram=gram)
            ok = pt_equal(pt_class([(1, J)]), pt_class([(1, Q_)]))
    return SuspensionAnalysis(U, P, ess, ok)


def _framed_suspension(Q_: Polytope, gram=None) -> SuspensionAnalysis:
    """Work in coordinates of the frame W with the induced form, then map back."""
    W = Q_.frame
    B = [list(b) for b in W.basis]
    G = to_q(gram) if gram is not None else [[Fraction(int(i == j)) for j in range(W.ambient)]
                                             for i in range(W.ambient)]
    GW = [[sum(B[i][a] * G[a][b] * B[j][b] for a in range(W.ambient) for b in range(W.ambient))
           for j in range(W.dim)] for i in range(W.dim)]
    local = Polytope.make(Q_.geometry, [[primitive(W.coords(v)) for v in s_.vertices] for s_ in Q_.simplices])
    inner = minimal_suspension_subspace(local, GW)
    U = Subspace.span([W.from_coords(u) for u in inner.U.basis], W.ambient)
    P = None
    if inner.compressed is not None:
        P = Polytope.make(inner.compressed.geometry,
                          [[primitive(W.from_coords(v)) for v in s_.vertices] for s_ in inner.compressed.simplices],
                          frame=U)
    # a functional f on W-coordinates is g = B^T (B B^T)^{-1} f on the ambient space
    BBt_inv = inverse(matmul(B, transpose(B)))
    ess = [tuple(primitive(matvec(transpose(B), matvec(BBt_inv, list(h))))) for h in inner.essential_normals]
    ok = inner.resuspension_ok
    if P is not None and U != W:
        J = join_with_sphere(P, U, W, gram=gram)
        ok = ok and pt_equal(pt_class([(1, J)]), pt_class([(1, Q_)]))
    return SuspensionAnalysis(U, P, ess, ok)


def _lift_generic(x, ess, planes, N) -> tuple[int, ...]:
    """Perturb x (off every essential hyperplane) to a point off every hyperplane of Q
    without changing its side of any essential hyperplane."""
    for t in range(1, 10_000):
        v = tuple(t ** k + (k == 0) for k in range(N))
        K = 1
        for h in ess:
            hx, hv = dot(h, x), dot(h, v)
            K = max(K, 2 * abs(hv) // abs(hx) + 2)
        p = tuple(K * a + b for a, b in zip(x, v))
        if all(dot(h, p) != 0 for h in planes):
            return p
    raise RuntimeError("no generic lift found")


def _is_whole_sphere(Q_: Polytope) -> bool:
    N = Q_.geometry.m
    return pt_equal(pt_class([(1, Q_)]), pt_class([(1, join_with_sphere(None, Subspace.zero(N)))]))


def is_suspension_from(Q_: Polytope, V: Subspace, gram=None) -> bool:
    return minimal_suspension_subspace(Q_, gram).U <= V


# -- desk-scale Steinberg quotient ----------------------------------------------

@dataclass
class Desk:
    """Finite model of Pt(S(W)) generated by a declared antipode-closed ray set."""

    N: int
    rays: list[tuple[int, ...]]
    hyperplanes: list[tuple[int, ...]]
    chambers: list[tuple[int, ...]]  # sign vectors
    pieces: list[list[Cell]]  # salient pieces of each chamber

    @property
    def rank(self) -> int:
        return len(self.chambers)


def _chambers_of(d: int, functionals: Sequence[Sequence[int]]):
    """Chambers (sign vectors) of a central arrangement in Q^d with their salient pieces."""
    fs = sorted({cones.canon_hyperplane(f) for f in functionals if any(f)})
    if d == 1 and not fs:
        fs = [(1,)]
    found: dict[tuple, list[Cell]] = {}
    for signs in product((1, -1), repeat=d):
        orth = cones.simplex_cell([tuple(s if i == k else 0 for i in range(d)) for k, s in enumerate(signs)])
        for c in cones.split_all(orth, fs):
            p = c.interior_point()
            sv = tuple(1 if dot(f, p) > 0 else -1 for f in fs)
            found.setdefault(sv, []).append(c)
    keys = sorted(found)
    return fs, keys, [found[k] for k in keys]


def make_desk(rays: Sequence[Sequence[int]]) -> Desk:
    rays = sorted({canon(primitive(r)) for r in rays})
    if not rays:
        raise GeometryError("empty ray set")
    N = len(rays[0])
    rs = set(rays)
    for r in rays:
        if tuple(-x for x in r) not in rs:
            raise GeometryError(f"ray set is not antipode-closed: missing {tuple(-x for x in r)}")
    hps = set()
    if N >= 2:
        for sub in combinations(rays, N - 1):
            if cones.int_rank(sub) == N - 1:
                hps.add(cones.canon_hyperplane(cones._null_vector(list(sub), N)))
    fs, keys, pieces = _chambers_of(N, sorted(hps))
    return Desk(N, rays, fs, keys, pieces)


def default_subspaces(desk: Desk) -> list[Subspace]:
    """0 together with the orthogonal complements of the declared rays."""
    out = {Subspace.zero(desk.N)}
    for r in desk.rays:
        out.add(orthogonal_complement(Subspace.span([r])))
    return sorted(out, key=lambda V: (V.dim, V.basis))


def desk_vector(desk: Desk, a: PtElement) -> list[int]:
    if a.geometry.euclidean or a.geometry.m != desk.N or a.frame is not None:
        raise GeometryError("element does not live on the desk sphere")
    planes = sorted({cones.canon_hyperplane(g) for c in a.cells() for g in c.facet_normals()})
    vec = []
    for sv, pcs in zip(desk.chambers, desk.pieces):
        vals = {a.value_at(_generic_point(c, planes)) for c in pcs}
        if len(vals) != 1:
            raise GeometryError("element is not constant on desk chambers (vertices outside the ray set?)")
        vec.append(vals.pop())
    return vec


def suspension_vectors(desk: Desk, V: Subspace) -> list[list[int]]:
    """Desk vectors of the joins P * S(V^perp) for P ranging over the chambers of S(V)."""
    N = desk.N
    if V.dim == 0:
        return [[1] * desk.rank]
    if V.dim >= N:
        raise GeometryError("subspace must be proper")
    basis = [list(b) for b in V.basis]
    restricted = [primitive([sum(a * b for a, b in zip(h, u)) for u in basis]) for h in desk.hyperplanes]
    fs, keys, _ = _chambers_of(V.dim, restricted)
    # orthogonal projection onto V, then V-coordinates (pivot entries)
    Vperp = orthogonal_complement(V)
    proj_basis = basis + [list(b) for b in Vperp.basis]
    M = inverse([list(map(Q, col)) for col in zip(*proj_basis)])

    def vcoords(x):
        c = matvec(M, x)[: V.dim]
        return V.coords(V.from_coords(c))

    out = [[0] * desk.rank for _ in keys]
    for k, pcs in enumerate(desk.pieces):
        sv_all = set()
        for c in pcs:
            for r in c.rays:
                y = vcoords(r)
                sv_all.add(tuple((f_val > 0) - (f_val < 0) for f_val in (sum(Q(a) * b for a, b in zip(f, y)) for f in fs)))
            y = vcoords(c.interior_point())
            sv = tuple(1 if sum(Q(a) * b for a, b in zip(f, y)) > 0 else -1 for f in fs)
            if any(v == 0 for v in (sum(Q(a) * b for a, b in zip(f, y)) for f in fs)):
                raise GeometryError("ray set not closed under the needed operations")
            for s in sv_all:
                if any(x and x != e for x, e in zip(s, sv)):
                    raise GeometryError("ray set not closed under the needed operations "
                                        f"(join from {V} is not a union of desk chambers)")
            out[keys.index(sv)][k] = 1
    return out


@dataclass
class StElement:
    pt: PtElement
    subspaces: list[Subspace]
    vector: list[int]
    representative: list[int]
    pt_rank: int
    suspension_rank: int
    st_rank: int
    torsion_free: bool

    @property
    def is_zero(self) -> bool:
        return not any(self.representative)


@dataclass
class StQuotient:
    desk: Desk
    subspaces: list[Subspace]
    generators: list[list[int]]
    hnf: list[list[int]]
    suspension_rank: int
    torsion_free: bool

    @property
    def pt_rank(self) -> int:
        return self.desk.rank

    @property
    def st_rank(self) -> int:
        return self.pt_rank - self.suspension_rank


def steinberg_quotient(desk: Desk, subspaces: Sequence[Subspace] | None = None) -> StQuotient:
    subs = list(subspaces) if subspaces is not None else default_subspaces(desk)
    for A in subs:
        for B in subs:
            if intersect(A, B) not in subs:
                raise GeometryError("subspace list is not closed under intersection")
    gens = []
    for V in subs:
        gens.extend(suspension_vectors(desk, V))
    H = hermite_normal_form(gens) if gens else []
    H = [r for r in H if any(r)]
    inv = invariant_factors([{j: x for j, x in enumerate(r) if x} for r in gens], desk.rank) if gens else []
    torsion_free = all(x == 1 for x in inv if x)
    return StQuotient(desk, subs, gens, H, len(H), torsion_free)


def steinberg_class(a: PtElement, desk: Desk, subspaces: Sequence[Subspace] | None = None,
                    quotient: StQuotient | None = None) -> StElement:
    q = quotient or steinberg_quotient(desk, subspaces)
    vec = desk_vector(desk, a) if not a.is_zero() else [0] * desk.rank
    rep = hnf_reduce(q.hnf, vec) if q.hnf else list(vec)
    return StElement(a, q.subspaces, vec, list(rep), q.pt_rank, q.suspension_rank, q.st_rank, q.torsion_free)
