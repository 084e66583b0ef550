"""Scissors-congruence certificates and classical invariants.

Witnesses are explicit: a list of pieces of the source, each with an
isometry, such that the moved pieces tile the target. ``verify_witness``
re-checks everything from scratch with the arrangement engine.

The planar construction sends every triangle of a triangulation to a
rectangle of height 1 inside a common strip ``[0, A] x [0, 1]``:

* triangle -> parallelogram by cutting at two edge midpoints and turning the
  small corner triangle by 180 degrees;
* parallelogram -> rectangle by a chain of elementary shears, each realised
  as one straight cut plus one translation.

Composing the two strip maps (for P and for Q) by convex clipping gives the
witness. All moves have the form ``x -> +-x + t``.
"""
from __future__ import annotations

import re
from bisect import bisect_left
from math import floor, sqrt
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .geometry import (
    Cover,
    Euclidean,
    GeometryError,
    Isometry,
    Polytope,
    apply_isometry,
    is_weak_subdivision,
    polytope_volume,
)
from .pt_steinberg import pt_class, pt_equal
from .qlinalg import Q, Subspace, identity, intersect, rref

GROUPS = ("translations", "translations+point-reflections", "full")

Vec = tuple  # tuple[Fraction, Fraction]


@dataclass
class DecompositionWitness:
    source: Polytope
    target: Polytope
    pieces: list[tuple[Polytope, Isometry]]
    group: str = "translations+point-reflections"

    def moved(self) -> list[Polytope]:
        return [apply_isometry(g, P)[0] for P, g in self.pieces]


@dataclass
class InequalityCertificate:
    """Both measures, so a 'no' answer can be checked by recomputing them."""

    invariant: str
    source_value: Fraction
    target_value: Fraction


@dataclass
class WitnessReport:
    ok: bool
    group_violations: list[int] = field(default_factory=list)
    source: dict = field(default_factory=dict)
    target: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


# -- verification ------------------------------------------------------------

def in_group(g: Isometry, group: str) -> bool:
    if group not in GROUPS:
        raise ValueError(f"unknown group tag {group!r}")
    if not g.geometry.euclidean:
        return False
    if group == "full":
        return True
    A = g.linear
    n = len(A)
    if A == identity(n):
        return True
    return group == "translations+point-reflections" and A == [[-x for x in r] for r in identity(n)]


def _report_dict(rep) -> dict:
    return {"ok": rep.ok, "overlaps": rep.overlaps, "uncovered": rep.uncovered, "outside": rep.outside}


def verify_witness(w: DecompositionWitness) -> WitnessReport:
    """Re-check group membership and both weak subdivisions."""
    bad = [i for i, (_, g) in enumerate(w.pieces) if not in_group(g, w.group)]
    if not w.pieces:
        return WitnessReport(False, bad, {"ok": False}, {"ok": False})
    src = is_weak_subdivision(Cover(w.source, [P for P, _ in w.pieces]))
    tgt = is_weak_subdivision(Cover(w.target, w.moved()))
    ok = not bad and src.ok and tgt.ok
    return WitnessReport(ok, bad, _report_dict(src), _report_dict(tgt))


# -- E1 ------------------------------------------------------------------------

def _intervals(P: Polytope) -> list[tuple[Fraction, Fraction]]:
    if P.geometry != Euclidean(1):
        raise GeometryError("expected a polytope in E1")
    iv = sorted(tuple(sorted(v[0] for v in s.vertices)) for s in P.simplices)
    merged: list[list[Fraction]] = []
    for a, b in iv:
        if merged and a <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    return [(a, b) for a, b in merged]


def decide_length_e1(P: Polytope, Q_: Polytope) -> DecompositionWitness | InequalityCertificate:
    IP, IQ = _intervals(P), _intervals(Q_)
    lp = sum(b - a for a, b in IP)
    lq = sum(b - a for a, b in IQ)
    if lp != lq:
        return InequalityCertificate("length", lp, lq)
    pieces = []
    i = j = 0
    pa, qa = IP[0][0], IQ[0][0]
    while i < len(IP) and j < len(IQ):
        step = min(IP[i][1] - pa, IQ[j][1] - qa)
        piece = Polytope.make(Euclidean(1), [[(pa,), (pa + step,)]])
        pieces.append((piece, Isometry.translate([qa - pa])))
        pa += step
        qa += step
        if pa == IP[i][1]:
            i += 1
            if i < len(IP):
                pa = IP[i][0]
        if qa == IQ[j][1]:
            j += 1
            if j < len(IQ):
                qa = IQ[j][0]
    return DecompositionWitness(P, Q_, pieces, "translations")


# -- convex polygon helpers -----------------------------------------------------

def _cross(o: Vec, a: Vec, b: Vec) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _area(poly: Sequence[Vec]) -> Fraction:
    s = Fraction(0)
    for k in range(len(poly)):
        x0, y0 = poly[k]
        x1, y1 = poly[(k + 1) % len(poly)]
        s += x0 * y1 - x1 * y0
    return s / 2


def _ccw(poly: Sequence[Vec]) -> list[Vec]:
    poly = [tuple(Q(x) for x in p) for p in poly]
    return poly if _area(poly) > 0 else poly[::-1]


def _clean(poly: list[Vec]) -> list[Vec]:
    """Drop repeated and collinear vertices."""
    out: list[Vec] = []
    for p in poly:
        if not out or out[-1] != p:
            out.append(p)
    if len(out) > 1 and out[0] == out[-1]:
        out.pop()
    changed = True
    while changed and len(out) >= 3:
        changed = False
        for k in range(len(out)):
            if _cross(out[k - 1], out[k], out[(k + 1) % len(out)]) == 0:
                out.pop(k)
                changed = True
                break
    return out


def _clip_halfplane(poly: list[Vec], a: Vec, b: Vec) -> list[Vec]:
    """Part of a convex polygon left of the directed line a -> b."""
    out: list[Vec] = []
    n = len(poly)
    for k in range(n):
        p, q = poly[k], poly[(k + 1) % n]
        sp, sq = _cross(a, b, p), _cross(a, b, q)
        if sp >= 0:
            out.append(p)
        if (sp > 0 and sq < 0) or (sp < 0 and sq > 0):
            t = sp / (sp - sq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return _clean(out)


def clip(poly: Sequence[Vec], window: Sequence[Vec]) -> list[Vec]:
    """Intersection of two convex CCW polygons; [] when the area is zero."""
    out = list(poly)
    for k in range(len(window)):
        if len(out) < 3:
            return []
        out = _clip_halfplane(out, window[k], window[(k + 1) % len(window)])
    return out if len(out) >= 3 and _area(out) > 0 else []


# moves x -> s*x + t with s = +-1
Move = tuple  # (s, (tx, ty))


def _apply(m: Move, p: Vec) -> Vec:
    s, t = m
    return (s * p[0] + t[0], s * p[1] + t[1])


def _compose(m2: Move, m1: Move) -> Move:
    """m2 after m1."""
    s1, t1 = m1
    s2, t2 = m2
    return (s1 * s2, (s2 * t1[0] + t2[0], s2 * t1[1] + t2[1]))


def _invert(m: Move) -> Move:
    s, t = m
    return (s, (-s * t[0], -s * t[1]))


def _map_poly(m: Move, poly: Sequence[Vec]) -> list[Vec]:
    # a point reflection keeps orientation in the plane, so CCW order survives
    return [_apply(m, p) for p in poly]


ID: Move = (1, (Fraction(0), Fraction(0)))


# A dissection is a list of (convex piece in the source, move).
Dissection = list


def _refine(dis: Dissection, step: Sequence[tuple[list[Vec], Move]]) -> Dissection:
    """Follow a dissection by one more cut-and-move step on its image."""
    out = []
    for poly, g in dis:
        img = _map_poly(g, poly)
        for region, m in step:
            c = clip(img, region)
            if c:
                out.append(([_apply(_invert(g), p) for p in c], _compose(m, g)))
    return out


def _add(a: Vec, b: Vec, k: Fraction = Fraction(1)) -> Vec:
    return (a[0] + k * b[0], a[1] + k * b[1])


def _triangle_to_parallelogram(A: Vec, B: Vec, C: Vec) -> tuple[Dissection, tuple[Vec, Vec, Vec]]:
    """Cut at the midpoints of AC and BC and turn the corner at C about mid(BC).

    Returns the dissection and the parallelogram as (origin, u, v).
    """
    M = ((A[0] + C[0]) / 2, (A[1] + C[1]) / 2)
    N = ((B[0] + C[0]) / 2, (B[1] + C[1]) / 2)
    trap = _ccw([A, B, N, M])
    corner = _ccw([M, N, C])
    rot: Move = (-1, (2 * N[0], 2 * N[1]))
    u = (B[0] - A[0], B[1] - A[1])
    v = (M[0] - A[0], M[1] - A[1])
    return [(trap, ID), (corner, rot)], (A, u, v)


def _para(o: Vec, u: Vec, v: Vec) -> list[Vec]:
    return _ccw([o, _add(o, u), _add(_add(o, u), v), _add(o, v)])


def _clip_functional(poly: list[Vec], f, lo: Fraction) -> list[Vec]:
    """Part of a convex polygon where the affine function f is >= lo."""
    out: list[Vec] = []
    n = len(poly)
    for k in range(n):
        p, q = poly[k], poly[(k + 1) % n]
        sp, sq = f(p) - lo, f(q) - lo
        if sp >= 0:
            out.append(p)
        if (sp > 0 and sq < 0) or (sp < 0 and sq > 0):
            t = sp / (sp - sq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return _clean(out)


def _shear(dis: Dissection, o: Vec, u: Vec, v: Vec, k: Fraction) -> tuple[Dissection, Vec]:
    """P(o; u, v) -> P(o; u, v + k u) in one cut-and-slide; returns the new v.

    With coordinates x = o + s u + t v, the strip j - 1 <= k t - s <= j of P
    is translated by j u. The strips partition P and their translates tile the
    sheared parallelogram.
    """
    if k == 0:
        return dis, v
    det = u[0] * v[1] - u[1] * v[0]

    def phi(x: Vec) -> Fraction:
        dx, dy = x[0] - o[0], x[1] - o[1]
        s_ = (dx * v[1] - dy * v[0]) / det
        t_ = (u[0] * dy - u[1] * dx) / det
        return k * t_ - s_

    P = _para(o, u, v)
    lo, hi = min(k, 0) - 1, max(k, 0)
    step = []
    j = floor(lo) + 1
    while j - 1 < hi:
        region = _clip_functional(P, phi, Fraction(j - 1))
        if len(region) >= 3:
            region = _clip_functional(region, lambda x: -phi(x), Fraction(-j))
        if len(region) >= 3 and _area(region) > 0:
            step.append((region, (1, (j * u[0], j * u[1]))))
        j += 1
    return _refine(dis, step), _add(v, u, k)


def _shear_plan(u: Vec, v: Vec, h: Fraction) -> tuple[list[tuple[str, Fraction]], Fraction]:
    """Elementary shears taking (u, v) to ((d/h, 0), (0, h)), and their total size."""
    d = u[0] * v[1] - u[1] * v[0]
    # S = [u v]^{-1} diag(d/h, h) has det 1
    a, b = v[1] / h, -v[0] * h / d
    c, dd = -u[1] / h, u[0] * h / d
    ops = []  # ("v", x): v += x u ; ("u", x): u += x v
    if c == 0:
        # S = L S' with L = [[1, 0], [1, 1]], so S' has c' = -a != 0
        ops.append(("u", Fraction(1)))
        c, dd = c - a, dd - b
    ops += [("v", (a - 1) / c), ("u", c), ("v", (dd - 1) / c)]
    return ops, sum(abs(x) for _, x in ops)


def _parallelogram_to_rectangle(dis: Dissection, o: Vec, u: Vec, v: Vec,
                                x0: Fraction, h: Fraction) -> Dissection:
    """Send P(o; u, v) to [x0, x0 + area/h] x [0, h] by shears and a final move."""
    if u[0] * v[1] - u[1] * v[0] < 0:
        u, v = v, u
    d = u[0] * v[1] - u[1] * v[0]
    for kind, x in _shear_plan(u, v, h)[0]:
        if kind == "v":
            dis, v = _shear(dis, o, u, v, x)
        else:
            dis, u = _shear(dis, o, v, u, x)
    assert u == (d / h, 0) and v == (0, h), (u, v)
    shift: Move = (1, (x0 - o[0], -o[1]))
    return [(p, _compose(shift, g)) for p, g in dis]


def _labelling_cost(tri: Sequence[Vec], h: Fraction) -> tuple[Fraction, tuple[Vec, Vec, Vec]]:
    """Vertex order whose parallelogram needs the smallest total shear, with that cost."""
    best = None
    for r in range(3):
        A, B, C = tri[r], tri[(r + 1) % 3], tri[(r + 2) % 3]
        u = (B[0] - A[0], B[1] - A[1])
        v = ((C[0] - A[0]) / 2, (C[1] - A[1]) / 2)
        if u[0] * v[1] - u[1] * v[0] < 0:
            u, v = v, u
        cost = _shear_plan(u, v, h)[1]
        if best is None or cost < best[0]:
            best = (cost, (A, B, C))
    return best


def _best_labelling(tri: Sequence[Vec], h: Fraction) -> tuple[Vec, Vec, Vec]:
    return _labelling_cost(tri, h)[1]


def _triangles(P: Polytope) -> list[tuple[Vec, Vec, Vec]]:
    """Almost-disjoint triangles covering P (its indicator normal form)."""
    a = pt_class([(1, P)])
    out = []
    for s, lab in zip(a.simplices, a.labels):
        if lab != 1:
            raise GeometryError("unexpected multiplicity in a polygon normal form")
        out.append(tuple((Fraction(r[1], r[0]), Fraction(r[2], r[0])) for r in s))
    return out


def strip_dissection(P: Polytope, h: Fraction = Fraction(1)) -> tuple[Dissection, Fraction]:
    """Dissection of P onto the strip [0, area/h] x [0, h]."""
    total: Dissection = []
    x0 = Fraction(0)
    for tri in _triangles(P):
        A, B, C = _best_labelling(tri, h)
        dis, (o, u, v) = _triangle_to_parallelogram(A, B, C)
        area = abs(u[0] * v[1] - u[1] * v[0])
        total += _parallelogram_to_rectangle(dis, o, u, v, x0, h)
        x0 += area / h
    return total, x0


def strip_height(*polys: Polytope) -> Fraction:
    """Common rectangle height: 1 or a rational near the root of the mean triangle area, whichever shears less."""
    tris = [t for P in polys for t in _triangles(P)]
    mean = sum(abs(_area(t)) for t in tris) / len(tris)
    cands = [Fraction(1), Fraction(sqrt(mean)).limit_denominator(8) or Fraction(1, 8)]
    return min(cands, key=lambda h: (sum(_labelling_cost(t, h)[0] for t in tris), h))


def _compose_strips(dp: Dissection, dq: Dissection) -> list[tuple[list[Vec], Move]]:
    """Overlay two dissections of the same strip; sweep over x-ranges of the images."""
    imgs_q = []
    for q, h in dq:
        img = _map_poly(h, q)
        imgs_q.append((min(x for x, _ in img), max(x for x, _ in img), img, h))
    imgs_q.sort(key=lambda r: r[0])
    starts = [r[0] for r in imgs_q]
    out = []
    for p, g in dp:
        img = _map_poly(g, p)
        lo, hi = min(x for x, _ in img), max(x for x, _ in img)
        for qlo, qhi, qimg, h in imgs_q[:bisect_left(starts, hi)]:
            if qhi <= lo:
                continue
            c = clip(img, qimg)
            if c:
                src = [_apply(_invert(g), x) for x in c]
                out.append((_ccw(src), _compose(_invert(h), g)))
    return out


def _to_polytope(poly: Sequence[Vec]) -> Polytope:
    return Polytope.make(Euclidean(2), [[poly[0], poly[k], poly[k + 1]] for k in range(1, len(poly) - 1)],
                         check=False)


def _to_isometry(m: Move) -> Isometry:
    s, t = m
    return Isometry.euclidean([[s, 0], [0, s]], list(t))


def _translate_match(P: Polytope, Q_: Polytope) -> Fraction | None:
    vp, vq = min(P.vertex_set()), min(Q_.vertex_set())
    t = tuple(b - a for a, b in zip(vp, vq))
    moved, _ = apply_isometry(Isometry.translate(t), P)
    return t if pt_equal(pt_class([(1, moved)]), pt_class([(1, Q_)])) else None


def decide_area_e2(P: Polytope, Q_: Polytope) -> DecompositionWitness | InequalityCertificate:
    for X in (P, Q_):
        if X.geometry != Euclidean(2):
            raise GeometryError("expected polygons in E2")
    ap, aq = polytope_volume(P), polytope_volume(Q_)
    if ap != aq:
        return InequalityCertificate("area", ap, aq)
    t = _translate_match(P, Q_)
    if t is not None:
        return DecompositionWitness(P, Q_, [(P, Isometry.translate(t))], "translations")
    h = strip_height(P, Q_)
    dp, _ = strip_dissection(P, h)
    dq, _ = strip_dissection(Q_, h)
    pieces = [(_to_polytope(poly), _to_isometry(m)) for poly, m in _compose_strips(dp, dq)]
    return DecompositionWitness(P, Q_, pieces, "translations+point-reflections")


# -- translation invariants --------------------------------------------------------

def _primitive_direction(e: Vec) -> tuple[tuple[int, int], Fraction]:
    """Write e = t * d with d a primitive integer vector, first nonzero entry positive."""
    from math import gcd, lcm

    den = lcm(e[0].denominator, e[1].denominator)
    a, b = int(e[0] * den), int(e[1] * den)
    g = gcd(a, b)
    d = (a // g, b // g)
    if d[0] < 0 or (d[0] == 0 and d[1] < 0):
        d = (-d[0], -d[1])
    t = (e[0] / d[0]) if d[0] else (e[1] / d[1])
    return d, t


@dataclass
class InvariantRecord:
    area: Fraction
    directions: dict[tuple[int, int], Fraction]

    def to_json(self) -> dict:
        return {"area": str(self.area),
                "directions": {f"{d[0]},{d[1]}": str(v) for d, v in sorted(self.directions.items())}}


def translation_invariants_e2(P: Polytope) -> InvariantRecord:
    """Area and, per edge direction d, the signed boundary length in units of d.

    Edges are oriented counterclockwise around the region; interior edges of
    the normal form cancel in pairs.
    """
    acc: dict[tuple[int, int], Fraction] = {}
    area = Fraction(0)
    for tri in _triangles(P):
        tri = _ccw(tri)
        area += _area(tri)
        for k in range(3):
            a, b = tri[k], tri[(k + 1) % 3]
            d, t = _primitive_direction((b[0] - a[0], b[1] - a[1]))
            acc[d] = acc.get(d, Fraction(0)) + t
    return InvariantRecord(area, {d: v for d, v in sorted(acc.items()) if v})


# -- Dehn invariant ------------------------------------------------------------

class InconsistentRelations(ValueError):
    pass


_PI = re.compile(r"^\s*(?:(-?\d+(?:/\d+)?)\s*\*?\s*)?pi(?:\s*/\s*(\d+))?(?:\s*\*\s*(-?\d+(?:/\d+)?))?\s*$")


def pi_multiple(sym: str) -> Fraction | None:
    """Rational r when the symbol spells r*pi ('pi/2', '2pi/3', 'pi*3/4'), else None."""
    m = _PI.match(sym)
    if not m:
        return None
    r = Fraction(1)
    if m.group(1):
        r *= Fraction(m.group(1))
    if m.group(2):
        r /= int(m.group(2))
    if m.group(3):
        r *= Fraction(m.group(3))
    return r


@dataclass
class MeasuredPolytope:
    """Edges as (length symbol, dihedral-angle symbol, multiplicity)."""

    edges: list[tuple[str, str, Fraction]]

    def __post_init__(self):
        self.edges = [(str(l), str(a), Q(m)) for l, a, m in self.edges]
        if any(m <= 0 for _, _, m in self.edges):
            raise ValueError("multiplicities must be positive")

    def lengths(self) -> list[str]:
        return sorted({l for l, _, _ in self.edges})

    def angles(self) -> list[str]:
        return sorted({a for _, a, _ in self.edges})


@dataclass
class AngleRelationSet:
    """Declared facts about the symbols.

    ``angle_relations``: pairs ({symbol: coeff}, r) meaning sum coeff*symbol = r*pi.
    ``length_relations``: {symbol: coeff} meaning sum coeff*symbol = 0.
    ``rational_angles``: symbol -> r meaning symbol = r*pi.
    ``independent``: angle symbols declared Q-linearly independent together with pi.
    """

    angle_relations: list[tuple[dict[str, Fraction], Fraction]] = field(default_factory=list)
    length_relations: list[dict[str, Fraction]] = field(default_factory=list)
    rational_angles: dict[str, Fraction] = field(default_factory=dict)
    independent: list[str] = field(default_factory=list)

    def angle_rows(self, symbols: Sequence[str]) -> list[list[Fraction]]:
        idx = {s: i for i, s in enumerate(symbols)}
        rows = []
        for s in symbols:
            if s in self.rational_angles or pi_multiple(s) is not None:
                rows.append([Fraction(int(i == idx[s])) for i in range(len(symbols))])
        for comb, _ in self.angle_relations:
            row = [Fraction(0)] * len(symbols)
            for s, c in comb.items():
                if s not in idx:
                    raise InconsistentRelations(f"relation mentions unknown angle {s!r}")
                row[idx[s]] += Q(c)
            rows.append(row)
        return rows

    def length_rows(self, symbols: Sequence[str]) -> list[list[Fraction]]:
        idx = {s: i for i, s in enumerate(symbols)}
        rows = []
        for comb in self.length_relations:
            row = [Fraction(0)] * len(symbols)
            for s, c in comb.items():
                if s not in idx:
                    raise InconsistentRelations(f"relation mentions unknown length {s!r}")
                row[idx[s]] += Q(c)
            rows.append(row)
        return rows

    def check(self, angle_symbols: Sequence[str]) -> None:
        for s in self.independent:
            if pi_multiple(s) is not None:
                raise InconsistentRelations(f"{s!r} is a rational multiple of pi")
        symbols = sorted(set(angle_symbols) | set(self.independent) | set(self.rational_angles)
                         | {s for comb, _ in self.angle_relations for s in comb})
        rows = self.angle_rows(symbols)
        if not rows or not self.independent:
            return
        # no nonzero combination of independent symbols may lie in span(relations)
        n = len(symbols)
        I = Subspace.span([[Fraction(int(k == symbols.index(s))) for k in range(n)]
                           for s in self.independent], ambient=n)
        R = Subspace.span(rows, ambient=n)
        if intersect(R, I).dim:
            raise InconsistentRelations("declared relations contradict declared independence")


@dataclass
class DehnElement:
    """Coefficients in the quotient bases (length classes x angle classes mod pi*Q)."""

    length_basis: list[str]
    angle_basis: list[str]
    matrix: list[list[Fraction]]

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.matrix for x in r)

    def terms(self) -> list[tuple[str, str, Fraction]]:
        return [(l, a, self.matrix[i][j]) for i, l in enumerate(self.length_basis)
                for j, a in enumerate(self.angle_basis) if self.matrix[i][j]]

    def to_json(self) -> dict:
        return {"zero": self.is_zero(),
                "terms": [{"length": l, "angle": a, "coeff": str(c)} for l, a, c in self.terms()]}


def _quotient_map(rows: list[list[Fraction]], n: int) -> tuple[list[list[Fraction]], list[int]]:
    """Canonical coordinates on Q^n / span(rows): returns (projection matrix, kept basis indices).

    The quotient basis is the standard vectors at the non-pivot columns of the
    RREF of the relations; a vector maps to its coordinates after eliminating
    pivot columns.
    """
    R = rref(rows)[0] if rows else []
    R = [r for r in R if any(r)]
    piv = []
    for r in R:
        piv.append(next(i for i, x in enumerate(r) if x))
    free = [i for i in range(n) if i not in piv]
    proj = []
    for j in free:
        # e_i -> for a pivot column p, e_p = -(sum of free entries of its row) mod relations
        col = []
        for i in range(n):
            if i == j:
                col.append(Fraction(1))
            elif i in piv:
                col.append(-R[piv.index(i)][j])
            else:
                col.append(Fraction(0))
        proj.append(col)
    return proj, free


def dehn_invariant(mp: MeasuredPolytope, rel: AngleRelationSet | None = None) -> DehnElement:
    rel = rel or AngleRelationSet()
    L, A = mp.lengths(), mp.angles()
    rel.check(A)
    M = [[Fraction(0)] * len(A) for _ in L]
    for l, a, m in mp.edges:
        M[L.index(l)][A.index(a)] += m
    PL, fl = _quotient_map(rel.length_rows(L), len(L))
    PA, fa = _quotient_map(rel.angle_rows(A), len(A))
    red = [[sum(PL[i][x] * M[x][y] * PA[j][y] for x in range(len(L)) for y in range(len(A)))
            for j in range(len(fa))] for i in range(len(fl))]
    return DehnElement([L[i] for i in fl], [A[j] for j in fa], red)


def box_measured(a, b, c) -> MeasuredPolytope:
    """Axis-aligned box with rational side lengths: 4 edges per side, right angles."""
    edges = []
    for s in (a, b, c):
        s = Q(s)
        if s <= 0:
            raise GeometryError("box sides must be positive")
        edges.append(("1", "pi/2", 4 * s))
    return MeasuredPolytope(edges)


def regular_tetrahedron() -> tuple[MeasuredPolytope, AngleRelationSet]:
    """Six edges of length symbol l, dihedral angle arccos(1/3) declared independent of pi."""
    return (MeasuredPolytope([("l", "arccos(1/3)", 6)]),
            AngleRelationSet(independent=["arccos(1/3)"]))
