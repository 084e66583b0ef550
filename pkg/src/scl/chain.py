"""Sparse integer chain complexes, chain maps, cones and homology."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping

from .qlinalg import invariant_factors, sparse_rank

Key = Hashable


class ChainError(ValueError):
    pass


@dataclass
class ChainComplex:
    """Free Z-chain complex with named generators.

    ``degree[key]`` is the degree of a generator and ``bd[key]`` its boundary
    as a sparse {key: coefficient} dict.
    """

    degree: dict[Key, int] = field(default_factory=dict)
    bd: dict[Key, dict[Key, int]] = field(default_factory=dict)

    def add(self, key: Key, deg: int, boundary: Mapping[Key, int] | None = None) -> None:
        if key in self.degree:
            raise ChainError(f"duplicate generator {key!r}")
        self.degree[key] = deg
        self.bd[key] = {k: v for k, v in (boundary or {}).items() if v}

    def generators(self, deg: int) -> list[Key]:
        return sorted((k for k, d in self.degree.items() if d == deg), key=repr)

    def degrees(self) -> list[int]:
        return sorted(set(self.degree.values()))

    def size(self) -> int:
        return len(self.degree)

    def check(self) -> "ChainComplex":
        """Assert boundaries are degree -1 and d o d = 0."""
        for k, b in self.bd.items():
            dk = self.degree[k]
            acc: dict[Key, int] = defaultdict(int)
            for j, c in b.items():
                if self.degree.get(j) != dk - 1:
                    raise ChainError(f"boundary of {k!r} leaves degree {dk - 1}")
                for i, e in self.bd[j].items():
                    acc[i] += c * e
            if any(acc.values()):
                raise ChainError(f"d^2 != 0 at {k!r}")
        return self

    def euler_characteristic(self) -> int:
        return sum((-1) ** d for d in self.degree.values())

    def matrix_rows(self, deg: int) -> tuple[list[dict[int, int]], int]:
        """Boundary d_deg as sparse rows (one per generator of degree ``deg``)."""
        tgt = {k: i for i, k in enumerate(self.generators(deg - 1))}
        rows = []
        for k in self.generators(deg):
            rows.append({tgt[j]: c for j, c in self.bd[k].items()})
        return rows, len(tgt)

    def homology(self, coefficients: str = "Z") -> "HomologyResult":
        return homology(self, coefficients)


@dataclass
class HomologyResult:
    """Per degree: free rank and torsion coefficients (empty over Q)."""

    ranks: dict[int, int]
    torsion: dict[int, list[int]]
    coefficients: str = "Z"

    def rank(self, d: int) -> int:
        return self.ranks.get(d, 0)

    def tors(self, d: int) -> list[int]:
        return self.torsion.get(d, [])

    def nonzero_degrees(self) -> list[int]:
        return sorted(d for d in set(self.ranks) | set(self.torsion) if self.rank(d) or self.tors(d))

    def is_zero(self) -> bool:
        return not self.nonzero_degrees()

    def signature(self) -> dict[int, tuple[int, tuple[int, ...]]]:
        return {d: (self.rank(d), tuple(self.tors(d))) for d in self.nonzero_degrees()}

    def to_json(self) -> dict:
        return {str(d): {"rank": r, "torsion": list(t)} for d, (r, t) in self.signature().items()}


def homology(C: ChainComplex, coefficients: str = "Z") -> HomologyResult:
    if coefficients not in ("Z", "Q"):
        raise ChainError("coefficients must be Z or Q")
    degs = C.degrees()
    if not degs:
        return HomologyResult({}, {}, coefficients)
    rk: dict[int, int] = {}
    tors: dict[int, list[int]] = {}
    for d in range(degs[0], degs[-1] + 2):
        rows, ncols = C.matrix_rows(d)
        if not rows or not ncols:
            rk[d] = 0
            tors[d] = []
            continue
        if coefficients == "Z":
            inv = invariant_factors(rows, ncols)
            rk[d] = len(inv)
            tors[d] = [x for x in inv if x > 1]
        else:
            rk[d] = sparse_rank(rows)
            tors[d] = []
    ranks, torsion = {}, {}
    for d in degs:
        n = len(C.generators(d))
        free = n - rk.get(d, 0) - rk.get(d + 1, 0)
        if free:
            ranks[d] = free
        if tors.get(d + 1):
            torsion[d] = sorted(tors[d + 1])
    return HomologyResult(ranks, torsion, coefficients)


def reduced_homology(C: ChainComplex, coefficients: str = "Z") -> HomologyResult:
    """Homology of the complex augmented by a copy of Z in degree -1."""
    A = augmented(C)
    return homology(A, coefficients)


def augmented(C: ChainComplex) -> ChainComplex:
    A = ChainComplex(dict(C.degree), {k: dict(v) for k, v in C.bd.items()})
    if not C.generators(0):
        return A
    A.add(("aug",), -1)
    for k in C.generators(0):
        A.bd[k] = {("aug",): 1}
    return A


# -- chain maps, sums, cones, quotients -----------------------------------

ChainMap = dict  # key -> {key: coeff}


def check_chain_map(f: ChainMap, A: ChainComplex, B: ChainComplex) -> None:
    for a in A.degree:
        lhs: dict[Key, int] = defaultdict(int)
        for b, c in f.get(a, {}).items():
            if B.degree[b] != A.degree[a]:
                raise ChainError("chain map does not preserve degree")
            for x, e in B.bd[b].items():
                lhs[x] += c * e
        rhs: dict[Key, int] = defaultdict(int)
        for a2, c in A.bd[a].items():
            for b, e in f.get(a2, {}).items():
                rhs[b] += c * e
        keys = set(lhs) | set(rhs)
        if any(lhs[k] != rhs[k] for k in keys):
            raise ChainError(f"f is not a chain map at {a!r}")


def direct_sum(parts: Iterable[tuple[Hashable, ChainComplex]]) -> ChainComplex:
    out = ChainComplex()
    for tag, C in parts:
        for k, d in C.degree.items():
            out.add((tag, k), d, {(tag, j): c for j, c in C.bd[k].items()})
    return out


def mapping_cone(f: ChainMap, A: ChainComplex, B: ChainComplex) -> ChainComplex:
    """cone(f)_n = B_n + A_{n-1}, d(b, a) = (db + f(a), -da)."""
    out = ChainComplex()
    for k, d in B.degree.items():
        out.add(("B", k), d, {("B", j): c for j, c in B.bd[k].items()})
    for k, d in A.degree.items():
        bd = {("A", j): -c for j, c in A.bd[k].items()}
        for j, c in f.get(k, {}).items():
            bd[("B", j)] = bd.get(("B", j), 0) + c
        out.add(("A", k), d + 1, bd)
    return out


def cone_map(fA: ChainMap, fB: ChainMap) -> ChainMap:
    """Map of cones induced by a commuting square (componentwise)."""
    out: ChainMap = {}
    for k, v in fB.items():
        out[("B", k)] = {("B", j): c for j, c in v.items()}
    for k, v in fA.items():
        out[("A", k)] = {("A", j): c for j, c in v.items()}
    return out


def quotient(C: ChainComplex, keep: Callable[[Key], bool]) -> ChainComplex:
    """C modulo the subcomplex spanned by generators with ``keep(key)`` false.

    The discarded generators must span a subcomplex.
    """
    out = ChainComplex()
    for k, d in C.degree.items():
        if keep(k):
            out.add(k, d, {j: c for j, c in C.bd[k].items() if keep(j)})
        else:
            if any(keep(j) for j in C.bd[k]):
                raise ChainError("discarded generators do not span a subcomplex")
    return out


def compose(f: ChainMap, g: ChainMap) -> ChainMap:
    """g after f."""
    out: ChainMap = {}
    for a, img in f.items():
        acc: dict[Key, int] = defaultdict(int)
        for b, c in img.items():
            for x, e in g.get(b, {}).items():
                acc[x] += c * e
        out[a] = {k: v for k, v in acc.items() if v}
    return out


# -- small models -------------------------------------------------------------

def point() -> ChainComplex:
    C = ChainComplex()
    C.add("pt", 0)
    return C


def simplicial_chains(simplices: Iterable[tuple], tag: Callable = lambda s: s) -> ChainComplex:
    """Oriented simplicial chains of a complex given by (sorted) vertex tuples, closed under faces."""
    simps = sorted(set(simplices), key=lambda s: (len(s), s))
    C = ChainComplex()
    for s in simps:
        bd = {}
        if len(s) > 1:
            for i in range(len(s)):
                bd[tag(s[:i] + s[i + 1:])] = (-1) ** i
        C.add(tag(s), len(s) - 1, bd)
    return C


def multiplication_cone(n: int) -> ChainComplex:
    """Cone of multiplication by n on Z (homology Z/n in degree 0)."""
    A, B = point(), point()
    return mapping_cone({"pt": {"pt": n}}, A, B)


def tensor_product(A: ChainComplex, B: ChainComplex) -> ChainComplex:
    """A ⊗ B with d(a ⊗ b) = da ⊗ b + (-1)^|a| a ⊗ db."""
    out = ChainComplex()
    for a, da in A.degree.items():
        for b, db in B.degree.items():
            bd: dict = {}
            for x, c in A.bd[a].items():
                bd[(x, b)] = bd.get((x, b), 0) + c
            s = (-1) ** da
            for y, c in B.bd[b].items():
                bd[(a, y)] = bd.get((a, y), 0) + s * c
            out.add((a, b), da + db, bd)
    return out
