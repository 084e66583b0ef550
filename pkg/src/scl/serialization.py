"""JSON formats. Rationals travel as strings "p/q" (or "p" when q = 1)."""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .geometry import Cover, GeometryId, Isometry, Polytope
from .qlinalg import Q, Subspace, qstr


class FormatError(ValueError):
    pass


def q(x: Any) -> Fraction:
    if isinstance(x, bool):
        raise FormatError(f"not a rational: {x!r}")
    try:
        return Q(x)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise FormatError(f"not a rational: {x!r}") from e


def _need(d: dict, key: str, what: str):
    if not isinstance(d, dict) or key not in d:
        raise FormatError(f"{what} JSON needs a {key!r} field")
    return d[key]


# -- polytopes -------------------------------------------------------------------

def polytope_to_json(P: Polytope) -> dict:
    out: dict = {
        "geometry": str(P.geometry),
        "simplices": [[[qstr(x) for x in v] for v in s.vertices] for s in P.simplices],
    }
    if P.frame is not None:
        out["frame"] = subspace_to_json(P.frame)
    return out


def polytope_from_json(d: dict) -> Polytope:
    geom = GeometryId.parse(str(_need(d, "geometry", "polytope")))
    simps = _need(d, "simplices", "polytope")
    if not isinstance(simps, list):
        raise FormatError("simplices must be a list")
    frame = subspace_from_json(d["frame"]) if d.get("frame") is not None else None
    try:
        return Polytope.make(geom, [[[q(x) for x in v] for v in s] for s in simps], frame=frame)
    except TypeError as e:
        raise FormatError(f"malformed simplex list: {e}") from e


def cover_to_json(c: Cover) -> dict:
    return {"target": polytope_to_json(c.target), "pieces": [polytope_to_json(p) for p in c.pieces]}


def cover_from_json(d: dict) -> Cover:
    return Cover(polytope_from_json(_need(d, "target", "cover")),
                 [polytope_from_json(p) for p in _need(d, "pieces", "cover")])


# -- subspaces and isometries -------------------------------------------------

def subspace_to_json(V: Subspace) -> dict:
    return {"ambient": V.ambient, "basis": [[qstr(x) for x in b] for b in V.basis]}


def subspace_from_json(d: Any, ambient: int | None = None) -> Subspace:
    if isinstance(d, list):
        return Subspace.span([[q(x) for x in b] for b in d], ambient=ambient)
    amb = int(_need(d, "ambient", "subspace"))
    return Subspace.span([[q(x) for x in b] for b in d.get("basis", [])], ambient=amb)


def matrix_to_json(M) -> list[list[str]]:
    return [[qstr(x) for x in r] for r in M]


def isometry_to_json(g: Isometry) -> dict:
    return {"geometry": str(g.geometry), "matrix": matrix_to_json(g.matrix)}


def isometry_from_json(d: dict, geometry: GeometryId | None = None) -> Isometry:
    M = _need(d, "matrix", "isometry") if isinstance(d, dict) else d
    geom = GeometryId.parse(d["geometry"]) if isinstance(d, dict) and "geometry" in d else geometry
    if geom is None:
        raise FormatError("isometry JSON needs a geometry")
    return Isometry(geom, tuple(tuple(q(x) for x in r) for r in M))


# -- witnesses -----------------------------------------------------------------

def witness_to_json(w) -> dict:
    return {
        "source": polytope_to_json(w.source),
        "target": polytope_to_json(w.target),
        "pieces": [{"polytope": polytope_to_json(P), "matrix": matrix_to_json(g.matrix)} for P, g in w.pieces],
        "group": w.group,
    }


def witness_from_json(d: dict):
    from .scissors_witness import DecompositionWitness

    src = polytope_from_json(_need(d, "source", "witness"))
    tgt = polytope_from_json(_need(d, "target", "witness"))
    pieces = []
    for p in _need(d, "pieces", "witness"):
        P = polytope_from_json(_need(p, "polytope", "piece"))
        pieces.append((P, isometry_from_json(_need(p, "matrix", "piece"), P.geometry)))
    return DecompositionWitness(src, tgt, pieces, str(d.get("group", "full")))


def certificate_to_json(c) -> dict:
    return {"invariant": c.invariant, "source": qstr(c.source_value), "target": qstr(c.target_value)}


# -- Dehn input ----------------------------------------------------------------------

def measured_from_json(d: Any):
    """Either {"edges": [[length, angle, multiplicity], ...]} or {"box": [a, b, c]}."""
    from .scissors_witness import MeasuredPolytope, box_measured

    if isinstance(d, dict) and "box" in d:
        return box_measured(*[q(x) for x in d["box"]])
    edges = _need(d, "edges", "measured polytope")
    return MeasuredPolytope([(str(l), str(a), q(m)) for l, a, m in edges])


def relations_from_json(d: Any):
    """{"angles": [[{sym: c}, r], ...], "lengths": [{sym: c}], "rational": {sym: r}, "independent": [sym]}.

    A bare list is read as the angle relations.
    """
    from .scissors_witness import AngleRelationSet

    if d is None:
        return AngleRelationSet()
    if isinstance(d, list):
        d = {"angles": d}
    ang = [({str(s): q(c) for s, c in comb.items()}, q(r)) for comb, r in d.get("angles", [])]
    lens = [{str(s): q(c) for s, c in comb.items()} for comb in d.get("lengths", [])]
    rat = {str(s): q(r) for s, r in d.get("rational", {}).items()}
    return AngleRelationSet(ang, lens, rat, [str(s) for s in d.get("independent", [])])


# -- files ---------------------------------------------------------------------------

def load(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: malformed JSON ({e})") from e
    except OSError as e:
        raise FormatError(f"{path}: {e.strerror}") from e


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_default)


def _default(x: Any):
    if isinstance(x, Fraction):
        return qstr(x)
    if isinstance(x, (set, frozenset, tuple)):
        return list(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")
