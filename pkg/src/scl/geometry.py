"""Exact polytopes in Euclidean space E^n and on spheres S(W).

A polytope is a finite union of top-dimensional simplices. Internally each
simplex becomes a simplicial cone of integer rays (Euclidean points are
homogenized as (1, x)), and every predicate is decided on a cell arrangement
built by :mod:`scl.cones`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Iterable, Sequence

from . import cones
from .cones import Cell, canon
from .qlinalg import (
    DimensionMismatch,
    Q,
    Subspace,
    det,
    identity,
    matmul,
    orthogonal_complement,
    primitive,
    to_q,
    transpose,
)


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class GeometryId:
    kind: str  # "E" or "S"
    n: int

    def __post_init__(self):
        if self.kind not in ("E", "S") or self.n < 0:
            raise GeometryError(f"bad geometry {self.kind}{self.n}")

    @classmethod
    def parse(cls, s: str) -> "GeometryId":
        s = s.strip().upper()
        if len(s) < 2 or s[0] not in "ES" or not s[1:].isdigit():
            raise GeometryError(f"cannot parse geometry {s!r}")
        return cls(s[0], int(s[1:]))

    @property
    def euclidean(self) -> bool:
        return self.kind == "E"

    @property
    def m(self) -> int:
        """Dimension of the cone space (homogeneous coordinates / ambient of the sphere)."""
        return self.n + 1

    @property
    def point_dim(self) -> int:
        return self.n if self.euclidean else self.n + 1

    def __str__(self) -> str:
        return f"{self.kind}{self.n}"


def Euclidean(n: int) -> GeometryId:
    return GeometryId("E", n)


def Spherical(n: int) -> GeometryId:
    """The sphere S^n = S(Q^{n+1})."""
    return GeometryId("S", n)


Point = tuple  # tuple[Fraction, ...] (Euclidean) or tuple[int, ...] (spherical ray)


def normalize_point(geom: GeometryId, p: Sequence) -> Point:
    if len(p) != geom.point_dim:
        raise DimensionMismatch(f"point {p} has wrong length for {geom}")
    if geom.euclidean:
        return tuple(Q(x) for x in p)
    r = primitive(p)
    if not any(r):
        raise GeometryError("zero vector is not a spherical point")
    return r


def to_ray(geom: GeometryId, p: Point) -> tuple[int, ...]:
    if geom.euclidean:
        return primitive((1,) + tuple(p))
    return canon(p)


def from_ray(geom: GeometryId, r: Sequence[int]) -> Point:
    if geom.euclidean:
        if r[0] <= 0:
            raise GeometryError("ray does not represent a Euclidean point")
        return tuple(Fraction(x, r[0]) for x in r[1:])
    return tuple(r)


@dataclass(frozen=True)
class Simplex:
    geometry: GeometryId
    vertices: tuple[Point, ...]

    def __post_init__(self):
        verts = tuple(normalize_point(self.geometry, v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)

    def cell(self) -> Cell:
        return cones.simplex_cell([to_ray(self.geometry, v) for v in self.vertices])


@dataclass(frozen=True)
class Polytope:
    """Union of top-dimensional simplices.

    For a spherical polytope inside a proper great subsphere S(V) of S(W), set
    ``frame = V``; the geometry is then S^{dim V - 1} and vertices are still
    written in the coordinates of W.
    """

    geometry: GeometryId
    simplices: tuple[Simplex, ...]
    frame: Subspace | None = None

    @classmethod
    def make(cls, geometry: GeometryId | str, simplices: Iterable[Sequence[Sequence]],
             frame: Subspace | None = None, check: bool = True) -> "Polytope":
        if isinstance(geometry, str):
            geometry = GeometryId.parse(geometry)
        if frame is not None and geometry.euclidean:
            raise GeometryError("frames are only meaningful for spherical polytopes")
        if frame is not None and frame.dim != geometry.m:
            raise DimensionMismatch("frame dimension does not match geometry")
        vgeom = geometry if frame is None else Spherical(frame.ambient - 1)
        simps = []
        for s in simplices:
            s = tuple(tuple(v) for v in s)
            if len(s) != geometry.n + 1:
                raise GeometryError(f"{geometry} simplices need {geometry.n + 1} vertices")
            sx = Simplex(vgeom, s)
            if frame is not None and not all(frame.contains_vector(v) for v in sx.vertices):
                raise GeometryError("vertex outside the frame subspace")
            simps.append(sx)
        if not simps:
            raise GeometryError("a polytope needs at least one simplex")
        P = cls(geometry, tuple(simps), frame)
        if check:
            P.cells()  # raises on degenerate simplices
        return P

    def local_ray(self, v: Point) -> tuple[int, ...]:
        if self.frame is None:
            return to_ray(self.geometry, v)
        return canon(primitive(self.frame.coords(v)))

    def cells(self) -> list[Cell]:
        out = []
        for s in self.simplices:
            try:
                out.append(cones.simplex_cell([self.local_ray(v) for v in s.vertices]))
            except ValueError as e:
                raise GeometryError(f"degenerate simplex {s.vertices}") from e
        return out

    def vertex_set(self) -> list[Point]:
        seen = []
        for s in self.simplices:
            for v in s.vertices:
                if v not in seen:
                    seen.append(v)
        return seen


def polytope_from_cells(geom: GeometryId, cells: Iterable[Cell], frame: Subspace | None = None) -> Polytope:
    """Pulling-triangulate convex cells into a Polytope (no degeneracy check needed)."""
    simps = []
    for c in cells:
        for s in cones.pulling_triangulation(c):
            simps.append(tuple(ray_to_point(geom, r, frame) for r in s))
    return Polytope.make(geom, simps, frame, check=False)


def ray_to_point(geom: GeometryId, r: Sequence[int], frame: Subspace | None = None) -> Point:
    if frame is None:
        return from_ray(geom, r)
    return primitive(frame.from_coords(r))


def _same_space(polys: Sequence[Polytope]) -> None:
    g = polys[0].geometry
    f = polys[0].frame
    for p in polys[1:]:
        if p.geometry != g or p.frame != f:
            raise DimensionMismatch(f"geometry mismatch: {g} vs {p.geometry}")


# -- span, volume ------------------------------------------------------------

def span(p: Polytope | Simplex) -> Subspace:
    if isinstance(p, Simplex):
        verts = p.vertices
        geom = p.geometry
    else:
        verts = p.vertex_set()
        geom = p.geometry if p.frame is None else Spherical(p.frame.ambient - 1)
    if not verts:
        raise GeometryError("empty input")
    if geom.euclidean:
        return Subspace.span([(1,) + tuple(v) for v in verts])
    return Subspace.span(verts)


def simplex_volume(s: Simplex | Sequence[Sequence]) -> Fraction:
    if isinstance(s, Simplex):
        if not s.geometry.euclidean:
            raise GeometryError("volume is only defined for Euclidean simplices")
        verts = s.vertices
    else:
        verts = [tuple(Q(x) for x in v) for v in s]
    n = len(verts) - 1
    if n == 0:
        return Fraction(1)
    edges = [[a - b for a, b in zip(v, verts[0])] for v in verts[1:]]
    return abs(det(edges)) / factorial(n)


def polytope_volume(P: Polytope) -> Fraction:
    """Volume of the union (overlaps counted once)."""
    arr = cones.build_arrangement(P.cells())
    total = Fraction(0)
    for c in arr.cells:
        for s in cones.pulling_triangulation(c):
            total += simplex_volume([from_ray(P.geometry, r) for r in s])
    return total


# -- covers and weak subdivisions ------------------------------------------

@dataclass
class Cover:
    target: Polytope
    pieces: list[Polytope]


@dataclass
class SubdivisionReport:
    ok: bool
    overlaps: list[dict] = field(default_factory=list)
    uncovered: list[dict] = field(default_factory=list)
    outside: list[dict] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def _owned_arrangement(groups: Sequence[Polytope], mode: str = "local"):
    """Arrangement over several polytopes; returns (arr, owner list of simplex index -> group)."""
    simplices, owner = [], []
    for k, P in enumerate(groups):
        for c in P.cells():
            simplices.append(c)
            owner.append(k)
    return cones.build_arrangement(simplices, mode), owner


def _cell_record(geom: GeometryId, c: Cell, frame, pieces) -> dict:
    return {
        "rays": [list(ray_to_point(geom, r, frame)) for r in c.rays],
        "pieces": sorted(pieces),
    }


def is_weak_subdivision(c: Cover) -> SubdivisionReport:
    if not c.pieces:
        return SubdivisionReport(False, uncovered=[{"rays": [], "pieces": []}])
    _same_space([c.target] + list(c.pieces))
    arr, owner = _owned_arrangement([c.target] + list(c.pieces))
    rep = SubdivisionReport(True)
    geom, frame = c.target.geometry, c.target.frame
    for cell, ins in zip(arr.cells, arr.inside):
        groups = {owner[i] for i in ins}
        in_target = 0 in groups
        pieces = {g - 1 for g in groups if g}
        if len(pieces) > 1:
            rep.overlaps.append(_cell_record(geom, cell, frame, pieces))
        if in_target and not pieces:
            rep.uncovered.append(_cell_record(geom, cell, frame, pieces))
        if not in_target and pieces:
            rep.outside.append(_cell_record(geom, cell, frame, pieces))
    rep.ok = not (rep.overlaps or rep.uncovered or rep.outside)
    return rep


def common_refinement(c1: Cover, c2: Cover) -> Cover:
    for c in (c1, c2):
        if not is_weak_subdivision(c):
            raise GeometryError("input cover is not a weak subdivision")
    groups = [c1.target, c2.target] + list(c1.pieces) + list(c2.pieces)
    _same_space(groups)
    arr, owner = _owned_arrangement(groups)
    n1 = len(c1.pieces)
    buckets: dict[tuple[int, int], list[Cell]] = {}
    for cell, ins in zip(arr.cells, arr.inside):
        gs = {owner[i] for i in ins}
        if (0 in gs) != (1 in gs):
            raise GeometryError("covers do not have a common target")
        i = [g - 2 for g in gs if 2 <= g < 2 + n1]
        j = [g - 2 - n1 for g in gs if g >= 2 + n1]
        if i and j:
            buckets.setdefault((i[0], j[0]), []).append(cell)
    geom, frame = c1.target.geometry, c1.target.frame
    pieces = [polytope_from_cells(geom, buckets[k], frame) for k in sorted(buckets)]
    return Cover(c1.target, pieces)


def refines(fine: Cover, coarse: Cover) -> bool:
    """Every piece of ``fine`` lies (up to measure zero) in a single piece of ``coarse``."""
    for P in fine.pieces:
        arr, owner = _owned_arrangement([P] + list(coarse.pieces))
        hosts = set()
        for ins in arr.inside:
            gs = {owner[i] for i in ins}
            if 0 in gs:
                h = gs - {0}
                if len(h) != 1:
                    return False
                hosts |= h
        if len(hosts) != 1:
            return False
    return True


# -- triangulation -----------------------------------------------------------

@dataclass
class Triangulation:
    geometry: GeometryId
    simplices: list[tuple[Point, ...]]  # all dimensions, closed under faces
    top: list[tuple[Point, ...]]
    members: list[list[int]]  # per input polytope: indices into ``top``
    frame: Subspace | None = None

    def faces_of_dim(self, k: int) -> list[tuple[Point, ...]]:
        return [s for s in self.simplices if len(s) == k + 1]


def triangulate(polytopes: Sequence[Polytope]) -> Triangulation:
    if not polytopes:
        raise GeometryError("nothing to triangulate")
    _same_space(polytopes)
    geom, frame = polytopes[0].geometry, polytopes[0].frame
    arr, owner = _owned_arrangement(polytopes, mode="global")
    allsimp, per_cell = cones.coning_triangulation(arr.cells)
    top_rays: list[tuple] = []
    index: dict[tuple, int] = {}
    members: list[list[int]] = [[] for _ in polytopes]
    for cell, ins in zip(arr.cells, arr.inside):
        gs = sorted({owner[i] for i in ins})
        for s in per_cell[cell.key]:
            if s not in index:
                index[s] = len(top_rays)
                top_rays.append(s)
            for g in gs:
                members[g].append(index[s])

    def pts(s):
        return tuple(ray_to_point(geom, r, frame) for r in s)

    ordered = sorted(allsimp, key=lambda s: (len(s), s))
    return Triangulation(geom, [pts(s) for s in ordered], [pts(s) for s in top_rays], members, frame)


# -- isometries ---------------------------------------------------------------

@dataclass(frozen=True)
class Isometry:
    """(n+1)x(n+1) rational matrix.

    Euclidean: [[1, 0], [t, A]] acting on (1, x), A orthogonal.
    Spherical: A with A^T G A = G for the Gram matrix G (identity by default).
    """

    geometry: GeometryId
    matrix: tuple[tuple[Fraction, ...], ...]
    gram: tuple[tuple[Fraction, ...], ...] | None = None

    def __post_init__(self):
        M = tuple(tuple(Q(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", M)
        m = self.geometry.m
        if len(M) != m or any(len(r) != m for r in M):
            raise DimensionMismatch(f"isometry of {self.geometry} must be {m}x{m}")
        if self.geometry.euclidean:
            if M[0] != (1,) + (0,) * (m - 1):
                raise GeometryError("first row of a Euclidean isometry must be (1, 0, ..., 0)")
            A = [list(r[1:]) for r in M[1:]]
            G = identity(m - 1)
        else:
            A = [list(r) for r in M]
            G = to_q(self.gram) if self.gram is not None else identity(m)
        if matmul(matmul(transpose(A), G), A) != G:
            raise GeometryError("matrix does not preserve the form")

    @property
    def linear(self) -> list[list[Fraction]]:
        if self.geometry.euclidean:
            return [list(r[1:]) for r in self.matrix[1:]]
        return [list(r) for r in self.matrix]

    @property
    def translation(self) -> tuple[Fraction, ...]:
        if not self.geometry.euclidean:
            return ()
        return tuple(r[0] for r in self.matrix[1:])

    @property
    def sign(self) -> int:
        return 1 if det(self.linear) > 0 else -1

    def __matmul__(self, other: "Isometry") -> "Isometry":
        if other.geometry != self.geometry:
            raise DimensionMismatch("composing isometries of different geometries")
        return Isometry(self.geometry, tuple(map(tuple, matmul([list(r) for r in self.matrix],
                                                                  [list(r) for r in other.matrix]))),
                        self.gram)

    def apply_point(self, p: Point) -> Point:
        if self.geometry.euclidean:
            h = (Fraction(1),) + tuple(p)
            return tuple(sum(a * b for a, b in zip(row, h)) for row in self.matrix[1:])
        return primitive([sum(a * b for a, b in zip(row, p)) for row in self.matrix])

    def apply_ray(self, r: Sequence[int]) -> tuple[int, ...]:
        return primitive([sum(a * b for a, b in zip(row, r)) for row in self.matrix])

    @classmethod
    def identity(cls, geom: GeometryId) -> "Isometry":
        return cls(geom, tuple(map(tuple, identity(geom.m))))

    @classmethod
    def euclidean(cls, A: Sequence[Sequence], t: Sequence) -> "Isometry":
        n = len(t)
        M = [[Fraction(1)] + [Fraction(0)] * n]
        for i in range(n):
            M.append([Q(t[i])] + [Q(x) for x in A[i]])
        return cls(Euclidean(n), tuple(map(tuple, M)))

    @classmethod
    def translate(cls, t: Sequence) -> "Isometry":
        n = len(t)
        return cls.euclidean(identity(n), t)

    @classmethod
    def point_reflection(cls, c: Sequence) -> "Isometry":
        """x -> 2c - x (rotation by 180 degrees in the plane)."""
        n = len(c)
        return cls.euclidean([[-x for x in row] for row in identity(n)], [2 * Q(x) for x in c])

    @classmethod
    def linear_map(cls, A: Sequence[Sequence], gram=None) -> "Isometry":
        return cls(Spherical(len(A) - 1), tuple(tuple(Q(x) for x in r) for r in A),
                   None if gram is None else tuple(tuple(Q(x) for x in r) for r in gram))


def apply_isometry(g: Isometry, P: Polytope) -> tuple[Polytope, int]:
    if g.geometry != P.geometry or P.frame is not None:
        raise DimensionMismatch("isometry and polytope live in different geometries")
    simps = [tuple(g.apply_point(v) for v in s.vertices) for s in P.simplices]
    return Polytope.make(P.geometry, simps, check=False), g.sign


# -- joins with spheres ------------------------------------------------------

def join_with_sphere(P: Polytope | None, V: Subspace, W: Subspace | None = None,
                     gram=None) -> Polytope:
    """The join P * S(V^perp) inside S(W), as a union of simplicial cones.

    ``P`` lives in S(V) (``P.frame == V`` when V is proper in the ambient
    space). With ``V = 0`` the result is all of S(W).
    """
    N = V.ambient
    if W is None:
        W = Subspace.full(N)
    if not V <= W:
        raise GeometryError("V must be contained in W")
    if V == W:
        raise GeometryError("V must be a proper subspace of W")
    comp = _complement_in(V, W, gram)
    comp_rays = [primitive(b) for b in comp.basis]
    if V.dim == 0:
        base_cones: list[list[tuple[int, ...]]] = [[]]
    else:
        if P is None:
            raise GeometryError("P is required when V is nonzero")
        if P.geometry.kind != "S" or P.geometry.m != V.dim:
            raise GeometryError("P is not a polytope of S(V)")
        if V.dim < N and P.frame != V:
            raise GeometryError("P is not contained in S(V)")
        base_cones = [[primitive(v) for v in s.vertices] for s in P.simplices]
    simps = []
    for base in base_cones:
        for signs in product((1, -1), repeat=len(comp_rays)):
            simps.append(tuple(base) + tuple(tuple(s * x for x in r) for s, r in zip(signs, comp_rays)))
    geom = Spherical(W.dim - 1)
    frame = None if W.dim == N else W
    return Polytope.make(geom, simps, frame)


def _complement_in(V: Subspace, W: Subspace, gram=None) -> Subspace:
    from .qlinalg import intersect
    return intersect(orthogonal_complement(V, gram), W)


def full_sphere(W: Subspace) -> Polytope:
    return join_with_sphere(None, Subspace.zero(W.ambient), W)
