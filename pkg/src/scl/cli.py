"""Command-line front end: ``scl <verb> ...``.

Exit codes: 0 on success, 1 when the answer is a mathematical "no" (a
certificate is printed), 2 on bad input.
"""
from __future__ import annotations

import argparse
import os
import random
import sys
from fractions import Fraction
from itertools import combinations
from typing import Any, Sequence

from . import serialization as ser
from .chain import ChainComplex, ChainError, homology, simplicial_chains
from .flag_complexes import (
    FinitePoset,
    PosetError,
    barycentric_compare,
    cube_model_compare,
    downset_diagram,
    generate_poset,
    interval_diagram,
    point_diagram,
    pt_complex_desk,
    random_ranked_poset,
    solomon_tits_check,
    tits_and_st,
)
from .geometry import (
    GeometryError,
    common_refinement,
    is_weak_subdivision,
    triangulate,
)
from .k_calculator import (
    DeskReals,
    KError,
    dupont_eigenspace_check,
    dupont_splitting_e2,
    dupont_total,
    k_circle,
    k_line_full,
    k_line_translation,
    k_s0,
    lines_poset,
    reduced_s1_table,
)
from .pt_steinberg import (
    make_desk,
    minimal_suspension_subspace,
    pt_class,
    pt_equal,
    steinberg_class,
)
from .qlinalg import Subspace, qstr
from .scissors_witness import (
    DecompositionWitness,
    InconsistentRelations,
    decide_area_e2,
    decide_length_e1,
    dehn_invariant,
    translation_invariants_e2,
    verify_witness,
)

CLASSICAL = "supplementary classical"
INPUT_ERRORS = (ser.FormatError, GeometryError, PosetError, KError, ChainError, InconsistentRelations,
                ValueError, KeyError, TypeError)


class UsageError(Exception):
    pass


def provenance(source: str, **desk: Any) -> dict:
    out = {"source": source, "desk_restriction": bool(desk)}
    out.update({k: v for k, v in desk.items() if v is not None})
    return out


def report(verb: str, result: Any, prov: dict, answer: bool = True) -> tuple[dict, int]:
    return {"verb": verb, "result": result, "provenance": prov}, 0 if answer else 1


# -- input helpers ----------------------------------------------------------------------

def _polytope(path: str):
    return ser.polytope_from_json(ser.load(path))


def _terms(path: str):
    """A polytope file or {"terms": [[coefficient, polytope], ...]}."""
    d = ser.load(path)
    if isinstance(d, dict) and "terms" in d:
        return [(int(c), ser.polytope_from_json(P)) for c, P in d["terms"]]
    return [(1, ser.polytope_from_json(d))]


def _subspace_poset(path: str):
    """{"ambient": n, "generators": [basis, ...], "euclidean": bool, "rays": [...]}."""
    d = ser.load(path)
    n = int(d["ambient"])
    gens = [ser.subspace_from_json(g, n) for g in d["generators"]]
    sp = generate_poset(gens, Subspace.full(n), bool(d.get("euclidean", False)))
    rays = d.get("rays")
    return sp, [tuple(int(x) for x in r) for r in rays] if rays else None


def _desk_dim(a) -> DeskReals:
    if a.desk_dim < 1:
        raise UsageError("--desk-dim must be at least 1")
    return DeskReals.of_dim(a.desk_dim)


# -- verbs --------------------------------------------------------------------------------

def cmd_triangulate(a):
    polys = [_polytope(p) for p in a.inputs]
    T = triangulate(polys)
    res = {
        "geometry": str(T.geometry),
        "top": [[[qstr(x) for x in v] for v in s] for s in T.top],
        "members": T.members,
        "f_vector": [len(T.faces_of_dim(k)) for k in range(T.geometry.n + 1)],
    }
    return report("triangulate", res, provenance("simplicial complex containing each input as a subcomplex"))


def cmd_refine(a):
    c1 = ser.cover_from_json(ser.load(a.first))
    c2 = ser.cover_from_json(ser.load(a.second))
    R = common_refinement(c1, c2)
    rep = is_weak_subdivision(R)
    return report("refine", {"cover": ser.cover_to_json(R), "validated": rep.ok},
                  provenance("common refinement of weak subdivisions"), rep.ok)


def cmd_subdivision_check(a):
    c = ser.cover_from_json(ser.load(a.cover))
    r = is_weak_subdivision(c)
    res = {"ok": r.ok, "overlaps": r.overlaps, "uncovered": r.uncovered, "outside": r.outside}
    return report("subdivision-check", res, provenance("weak subdivision (almost-disjoint cover)"), r.ok)


def cmd_pt_class(a):
    return report("pt-class", pt_class(_terms(a.input)).to_json(),
                  provenance("polytope group as step functions modulo measure zero"))


def cmd_pt_equal(a):
    x, y = pt_class(_terms(a.first)), pt_class(_terms(a.second))
    eq = pt_equal(x, y)
    res = {"equal": eq}
    if not eq:
        res["difference"] = (x - y).to_json()
    return report("pt-equal", res, provenance("polytope group as step functions modulo measure zero"), eq)


def cmd_st_class(a):
    d = ser.load(a.rays)
    rays = d["rays"] if isinstance(d, dict) else d
    desk = make_desk([tuple(int(x) for x in r) for r in rays])
    e = steinberg_class(pt_class(_terms(a.input)), desk)
    res = {"desk_vector": e.vector, "representative": e.representative, "pt_rank": e.pt_rank,
           "suspension_rank": e.suspension_rank, "st_rank": e.st_rank, "torsion_free": e.torsion_free,
           "zero_in_steinberg": e.is_zero}
    return report("st-class", res, provenance("Steinberg quotient of the sphere polytope group",
                                              rays=len(desk.rays), chambers=desk.rank))


def cmd_min_suspension(a):
    s = minimal_suspension_subspace(_polytope(a.input))
    res = {"U": ser.subspace_to_json(s.U), "dim": s.U.dim,
           "essential_normals": [list(n) for n in s.essential_normals],
           "compressed": ser.polytope_to_json(s.compressed) if s.compressed is not None else None,
           "resuspension_ok": s.resuspension_ok}
    return report("min-suspension", res, provenance("minimal suspension subspace"), s.resuspension_ok)


def cmd_complex(a):
    sp, rays = _subspace_poset(a.input)
    if a.kind == "pt-desk":
        r = pt_complex_desk(sp, rays)
        res = {"homology": r.homology.to_json(), "cube_homology": r.cube_homology.to_json(),
               "agree": r.homology.signature() == r.cube_homology.signature()}
        return report("complex", res, provenance("polytope complex as total cofiber of the subspace diagram",
                                                 poset_size=len(sp.elements)))
    T, ST = tits_and_st(sp)
    if a.kind == "tits":
        res = {"homology": homology(T).to_json(), "simplices": T.size()}
        return report("complex", res, provenance("Tits complex of the subspace poset",
                                                 poset_size=len(sp.elements)))
    st = solomon_tits_check(sp)
    res = {"homology": homology(ST).to_json(), "n": st.n, "concentrated": st.concentrated, "free": st.free,
           "rank": st.rank, "hypothesis": st.hypothesis, "verdict": st.verdict}
    return report("complex", res, provenance("suspended Tits complex; Solomon-Tits check",
                                             poset_size=len(sp.elements)), st.verdict != "fail")


def _complex_from_json(d) -> ChainComplex:
    """{"simplices": [[v, ...], ...]} (faces added) or {"cells": [{"name", "degree", "boundary"}]}."""
    if "simplices" in d:
        closed = set()
        for s in d["simplices"]:
            s = tuple(sorted(str(v) for v in s))
            for k in range(1, len(s) + 1):
                closed.update(combinations(s, k))
        return simplicial_chains(closed)
    C = ChainComplex()
    for c in d["cells"]:
        C.add(str(c["name"]), int(c["degree"]), {str(k): int(v) for k, v in c.get("boundary", {}).items()})
    return C.check()


def cmd_homology(a):
    C = _complex_from_json(ser.load(a.input))
    H = homology(C, a.coefficients)
    return report("homology", {"coefficients": a.coefficients, "homology": H.to_json(),
                               "euler_characteristic": C.euler_characteristic()},
                  provenance(CLASSICAL))


def _poset_input(a) -> tuple[FinitePoset, list[int]]:
    if a.input:
        d = ser.load(a.input)
        P = FinitePoset.from_covers(int(d["n"]), [tuple(e) for e in d["covers"]])
        dims = [int(x) for x in d.get("dims", [])] or None
        if dims is None:
            raise UsageError("poset file needs a 'dims' list")
        return P, dims
    return random_ranked_poset(random.Random(a.seed), max_elems=a.max_elems)


def cmd_compare(a):
    P, dims = _poset_input(a)
    diagrams = {"point": point_diagram, "interval": interval_diagram, "downset": downset_diagram}
    D = diagrams[a.diagram](P)
    r = barycentric_compare(D) if a.model == "barycentric" else cube_model_compare(D, dims)
    res = {"equal": r.equal, "left": r.left, "right": r.right, **r.extra, "poset_size": P.n, "dims": dims}
    src = ("barycentric subdivision preserves homotopy colimits" if a.model == "barycentric"
           else "total cofiber over the poset equals total cofiber over the flag cube")
    return report("compare", res, provenance(src, seed=None if a.input else a.seed), r.equal)


def cmd_kgroups(a):
    geom, group = a.geometry.upper(), a.group.upper()
    if geom == "S0":
        r = k_s0(group, a.reduced, a.max_degree)
    else:
        V = _desk_dim(a)
        if geom == "E1" and group in ("T1", "TRANSLATIONS"):
            r = k_line_translation(V, a.max_degree)
        elif geom == "E1" and group in ("E1", "FULL"):
            r = k_line_full(V, a.max_degree)
        elif geom == "S1":
            r = k_circle(V, group, a.max_degree)
        else:
            raise UsageError(f"unsupported geometry/group pair {a.geometry} {a.group}")
    res = r.to_json()
    prov = res.pop("provenance")
    return report("kgroups", res, provenance(prov, desk_dim=r.desk_dim, max_degree=a.max_degree))


def _lines_input(a) -> list[tuple[int, int]]:
    if a.lines:
        d = ser.load(a.lines)
        return [tuple(int(x) for x in v) for v in (d["lines"] if isinstance(d, dict) else d)]
    return [(1, i) for i in range(a.line_count - 1)] + [(0, 1)]


def cmd_dupont(a):
    V = _desk_dim(a)
    L = _lines_input(a)
    e = dupont_splitting_e2(L, V, a.m)
    g = dupont_total(lines_poset(L), V, a.m)
    agree = (e.kernel_dim, e.cokernel_dim) == (g.get(1, 0), g.get(2, 0))
    res = {"e2": e.to_json(), "general": {str(k): v for k, v in g.items()}, "agree": agree}
    if a.eigen is not None:
        res["eigen"] = []
        for q in (1, 2):
            r = dupont_eigenspace_check(Fraction(a.eigen), a.m, q, L, V)
            res["eigen"].append({"q": q, "scalar": qstr(r.scalar), "summand_dim": r.summand_dim, "ok": r.ok})
        agree = agree and all(x["ok"] for x in res["eigen"])
    return report("dupont", res, provenance("Dupont splitting of Tits-complex homology by dilation eigenvalue",
                                            desk_dim=V.d, lines=len(L), m=a.m), agree)


def cmd_reduced_s1(a):
    r = reduced_s1_table(a.N, _desk_dim(a), a.max_degree)
    return report("reduced-s1", r.to_json(), provenance("reduced circle K-theory via the Z/2 -> circle fiber sequence",
                                                         desk_dim=a.desk_dim, N=a.N))


def cmd_sc_decide(a):
    P, Q_ = _polytope(a.first), _polytope(a.second)
    if a.dim == "e1":
        w = decide_length_e1(P, Q_)
    else:
        w = decide_area_e2(P, Q_)
    prov = provenance(CLASSICAL + ": Bolyai-Gerwien" if a.dim == "e2" else CLASSICAL)
    if isinstance(w, DecompositionWitness):
        vr = verify_witness(w)
        wj = ser.witness_to_json(w)
        if a.out:
            with open(a.out, "w", encoding="utf-8") as fh:
                fh.write(ser.dumps(wj) + "\n")
        res = {"congruent": True, "group": w.group, "pieces": len(w.pieces), "verified": vr.ok,
               "witness": a.out if a.out else wj}
        return report("sc-decide", res, prov, vr.ok)
    return report("sc-decide", {"congruent": False, "certificate": ser.certificate_to_json(w)}, prov, False)


def cmd_invariants(a):
    P = _polytope(a.input)
    r = translation_invariants_e2(P)
    res = r.to_json()
    if a.compare:
        s = translation_invariants_e2(_polytope(a.compare))
        same = s == r
        res = {"first": res, "second": s.to_json(), "equal": same}
        return report("invariants", res, provenance(CLASSICAL + ": Hadwiger edge functionals"), same)
    return report("invariants", res, provenance(CLASSICAL + ": Hadwiger edge functionals"))


def cmd_dehn(a):
    mp = ser.measured_from_json(ser.load(a.input))
    rel = ser.relations_from_json(ser.load(a.relations)) if a.relations else None
    D = dehn_invariant(mp, rel)
    res = D.to_json()
    return report("dehn", res, provenance(CLASSICAL + ": Dehn invariant in a symbolic tensor module"))


def cmd_verify_witness(a):
    w = ser.witness_from_json(ser.load(a.input))
    r = verify_witness(w)
    res = {"ok": r.ok, "group": w.group, "pieces": len(w.pieces), "group_violations": r.group_violations,
           "source": r.source, "target": r.target}
    return report("verify-witness", res, provenance("scissors congruence witness check"), r.ok)


def cmd_paper_suite(a):
    from .suite import run_suite

    only = [int(x) for x in a.only.split(",")] if a.only else None
    results = run_suite(a.seed, only)
    ok = all(r.passed for r in results)
    res = {"criteria": [r.to_json() for r in results], "passed": sum(r.passed for r in results),
           "total": len(results)}
    if a.format == "table":
        res = {"lines": [r.line() for r in results], **{k: res[k] for k in ("passed", "total")}}
    return report("paper-suite", res, provenance("acceptance battery", seed=a.seed), ok)


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="scl", description="Scissors congruence and polytope-group toolkit")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--seed", type=int, default=20240601)
    sub = p.add_subparsers(dest="verb", required=True, metavar="verb")

    def verb(name, fn, help_):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.set_defaults(fn=fn)
        return s

    s = verb("triangulate", cmd_triangulate, "triangulate a union of polytopes")
    s.add_argument("inputs", nargs="+")
    s = verb("refine", cmd_refine, "common refinement of two covers")
    s.add_argument("first")
    s.add_argument("second")
    s = verb("subdivision-check", cmd_subdivision_check, "validate a weak subdivision")
    s.add_argument("cover")
    s = verb("pt-class", cmd_pt_class, "normal form of a polytope-group element")
    s.add_argument("input")
    s = verb("pt-equal", cmd_pt_equal, "compare two polytope-group elements")
    s.add_argument("first")
    s.add_argument("second")
    s = verb("st-class", cmd_st_class, "class in the desk Steinberg quotient")
    s.add_argument("input")
    s.add_argument("--rays", required=True, help="JSON list of desk rays (antipode-closed)")
    s = verb("min-suspension", cmd_min_suspension, "minimal suspension subspace of a spherical polytope")
    s.add_argument("input")
    s = verb("complex", cmd_complex, "Tits, suspended Tits or desk polytope complex of a subspace poset")
    s.add_argument("kind", choices=("tits", "st", "pt-desk"))
    s.add_argument("input")
    s = verb("homology", cmd_homology, "homology of a chain complex")
    s.add_argument("input")
    s.add_argument("--coefficients", choices=("Z", "Q"), default="Z")
    s = verb("compare", cmd_compare, "compare homotopy-colimit models on a poset diagram")
    s.add_argument("model", choices=("barycentric", "cube"))
    s.add_argument("input", nargs="?")
    s.add_argument("--diagram", choices=("point", "interval", "downset"), default="downset")
    s.add_argument("--max-elems", type=int, default=10)
    s = verb("kgroups", cmd_kgroups, "desk-scale K-group table")
    s.add_argument("geometry", help="E1, S1 or S0")
    s.add_argument("group", help="T1/E1 for E1, SO2/O2 for S1, 1/O1 for S0")
    s.add_argument("--desk-dim", type=int, default=2)
    s.add_argument("--max-degree", type=int, default=4)
    s.add_argument("--reduced", action="store_true")
    s = verb("dupont", cmd_dupont, "Dupont splitting in the plane")
    s.add_argument("--lines", help="JSON list of line direction vectors")
    s.add_argument("--line-count", type=int, default=3)
    s.add_argument("--desk-dim", type=int, default=2)
    s.add_argument("-m", type=int, default=0)
    s.add_argument("--eigen", help="dilation factor a for the eigenspace check")
    s = verb("reduced-s1", cmd_reduced_s1, "reduced circle K-group table")
    s.add_argument("-N", type=int, default=4)
    s.add_argument("--desk-dim", type=int, default=2)
    s.add_argument("--max-degree", type=int, default=5)
    s = verb("sc-decide", cmd_sc_decide, "decide scissors congruence and emit a witness")
    s.add_argument("dim", choices=("e1", "e2"))
    s.add_argument("first")
    s.add_argument("second")
    s.add_argument("--out", help="write the witness JSON here")
    s = verb("invariants", cmd_invariants, "translation invariants of a polygon")
    s.add_argument("input")
    s.add_argument("--compare")
    s = verb("dehn", cmd_dehn, "Dehn invariant of a measured polytope")
    s.add_argument("input")
    s.add_argument("--relations")
    s = verb("verify-witness", cmd_verify_witness, "check a decomposition witness")
    s.add_argument("input")
    s = verb("paper-suite", cmd_paper_suite, "run the acceptance battery")
    s.add_argument("--only", help="comma-separated criterion numbers")
    return p


def _table(obj: Any, prefix: str = "") -> list[str]:
    if isinstance(obj, dict):
        out = []
        for k in sorted(obj, key=str):
            out += _table(obj[k], f"{prefix}.{k}" if prefix else str(k))
        return out
    if isinstance(obj, list) and obj and all(isinstance(x, (dict, list)) for x in obj):
        out = []
        for i, x in enumerate(obj):
            out += _table(x, f"{prefix}[{i}]")
        return out
    if isinstance(obj, list):
        obj = ", ".join(qstr(x) if isinstance(x, Fraction) else str(x) for x in obj)
    elif isinstance(obj, Fraction):
        obj = qstr(obj)
    return [f"{prefix}: {obj}"]


def _check_threads() -> None:
    v = os.environ.get("SCL_THREADS")
    if v is None:
        return
    if not v.isdigit() or int(v) < 1:
        raise UsageError(f"SCL_THREADS must be a positive integer, got {v!r}")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        _check_threads()
        rep, code = a.fn(a)
    except UsageError as e:
        print(f"scl: {e}", file=sys.stderr)
        return 2
    except INPUT_ERRORS as e:
        print(f"scl {a.verb}: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    if a.format == "table":
        print("\n".join(_table(rep)))
    else:
        print(ser.dumps(rep))
    return code


if __name__ == "__main__":
    sys.exit(main())
