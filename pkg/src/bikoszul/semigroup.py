"""Bigraded affine semigroups and the order complexes of their open intervals.

A semigroup is given by x-generators (degree (1,0)) and y-generators (degree
(0,1)) in N^d.  The grading is only defined when no vector is reachable from
two different bidegrees; :func:`validate` checks this up to a bound.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .bipoly import Bidegree, Polynomial, PrimeField, RingPresentation, TermOrder
from .errors import EmptyDiagonal, GradingConflict, NotMember
from .groebner import buchberger, eliminate
from .modp import rank


def _vec(v) -> tuple:
    return tuple(int(x) for x in v)


@dataclass(frozen=True)
class AffineSemigroup:
    ambient_dim: int
    x_generators: tuple
    y_generators: tuple = ()

    def __post_init__(self):
        xs = tuple(_vec(v) for v in self.x_generators)
        ys = tuple(_vec(v) for v in self.y_generators)
        object.__setattr__(self, "x_generators", xs)
        object.__setattr__(self, "y_generators", ys)
        allg = xs + ys
        for v in allg:
            if len(v) != self.ambient_dim:
                raise ValueError(f"generator {v} is not in N^{self.ambient_dim}")
            if any(x < 0 for x in v) or not any(v):
                raise ValueError(f"generators must be nonzero vectors in N^d, got {v}")
        if len(set(allg)) != len(allg):
            raise ValueError("generators must be distinct")

    def generators(self) -> list:
        return ([(v, Bidegree(1, 0)) for v in self.x_generators]
                + [(v, Bidegree(0, 1)) for v in self.y_generators])

    @property
    def is_single_graded(self) -> bool:
        return not self.y_generators

    def zero(self) -> tuple:
        return (0,) * self.ambient_dim


def _add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def validate(L: AffineSemigroup, bound: int) -> bool:
    """Check that sums of at most ``bound`` generators have a unique bidegree.

    Sums are produced level by level (number of summands), so the conflict
    reported is one with the fewest summands.
    """
    if bound < 1:
        raise ValueError("bound must be positive")
    seen = {L.zero(): Bidegree(0, 0)}
    level = {L.zero(): Bidegree(0, 0)}
    gens = L.generators()
    for _ in range(bound):
        nxt = {}
        for v in sorted(level):
            deg = level[v]
            for g, gd in gens:
                w, wd = _add(v, g), deg + gd
                old = seen.get(w, nxt.get(w))
                if old is not None and old != wd:
                    raise GradingConflict(w, old, wd)
                nxt[w] = wd
        for w, wd in nxt.items():
            seen[w] = wd
        level = nxt
    return True


def _bound_pairs(deg_bound):
    """Bidegrees admitted by a bound: an int (total degree) or a Bidegree (componentwise)."""
    if isinstance(deg_bound, int):
        return lambda d: d.total <= deg_bound
    P, Q = deg_bound
    return lambda d: d.p <= P and d.q <= Q


def _max_total(deg_bound) -> int:
    return deg_bound if isinstance(deg_bound, int) else deg_bound[0] + deg_bound[1]


def members_up_to(L: AffineSemigroup, deg_bound) -> dict:
    """{vector: bidegree} for all elements of bidegree within ``deg_bound``."""
    ok = _bound_pairs(deg_bound)
    table = {L.zero(): Bidegree(0, 0)}
    frontier = [L.zero()]
    gens = L.generators()
    for _ in range(_max_total(deg_bound)):
        nxt = []
        for v in frontier:
            for g, gd in gens:
                wd = table[v] + gd
                if not ok(wd):
                    continue
                w = _add(v, g)
                old = table.get(w)
                if old is None:
                    table[w] = wd
                    nxt.append(w)
                elif old != wd:
                    raise GradingConflict(w, old, wd)
        frontier = sorted(set(nxt))
    return table


def _sorted_members(table: dict) -> list:
    return sorted(table, key=lambda v: (table[v].total, table[v], v))


# ---------------------------------------------------------------------------
# Posets and complexes

@dataclass(frozen=True)
class DivisorPoset:
    elements: tuple
    relations: frozenset      # pairs (mu, lam) with mu <= lam, including equal pairs

    def leq(self, u, v) -> bool:
        return (u, v) in self.relations

    def check_axioms(self) -> bool:
        els = self.elements
        for u in els:
            if not self.leq(u, u):
                return False
        for u in els:
            for v in els:
                if u != v and self.leq(u, v) and self.leq(v, u):
                    return False
                if self.leq(u, v):
                    for w in els:
                        if self.leq(v, w) and not self.leq(u, w):
                            return False
        return True


@dataclass(frozen=True)
class SimplicialComplex:
    vertices: tuple
    faces: frozenset          # frozensets of vertices, closed under subsets, contains the empty face

    def __post_init__(self):
        faces = frozenset(frozenset(f) for f in self.faces) | {frozenset()}
        object.__setattr__(self, "faces", faces)

    @classmethod
    def from_facets(cls, facets) -> "SimplicialComplex":
        faces = set()
        verts = set()
        for F in facets:
            F = tuple(F)
            verts.update(F)
            for k in range(len(F) + 1):
                faces.update(frozenset(c) for c in combinations(F, k))
        return cls(tuple(sorted(verts)), frozenset(faces))

    @property
    def dim(self) -> int:
        return max(len(f) for f in self.faces) - 1

    def faces_of_dim(self, k: int) -> list:
        return sorted((tuple(sorted(f)) for f in self.faces if len(f) == k + 1))

    def is_closed(self) -> bool:
        return all(frozenset(c) in self.faces for f in self.faces
                   for k in range(len(f)) for c in combinations(f, k))

    def link(self, sigma) -> "SimplicialComplex":
        sigma = frozenset(sigma)
        faces = {f - sigma for f in self.faces if sigma <= f}
        verts = tuple(sorted({v for f in faces for v in f}))
        return SimplicialComplex(verts, frozenset(faces))

    def f_vector(self) -> list:
        return [len(self.faces_of_dim(k)) for k in range(-1, self.dim + 1)]


def _boundary_rank(K: SimplicialComplex, k: int, p: int) -> int:
    """Rank of the boundary map from k-faces to (k-1)-faces (augmented)."""
    rows = K.faces_of_dim(k)
    cols = K.faces_of_dim(k - 1)
    if not rows or not cols:
        return 0
    index = {f: i for i, f in enumerate(cols)}
    A = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for r, f in enumerate(rows):
        for s in range(len(f)):
            face = f[:s] + f[s + 1:]
            A[r, index[face]] = 1 if s % 2 == 0 else p - 1
    return rank(A, p)


def reduced_homology(K: SimplicialComplex, field: PrimeField = PrimeField()) -> list:
    """dims of reduced homology H~_i over GF(p), for i = -1 .. dim K."""
    p = field.modulus
    top = K.dim
    ranks = {k: _boundary_rank(K, k, p) for k in range(0, top + 2)}
    out = []
    for i in range(-1, top + 1):
        ci = len(K.faces_of_dim(i))
        out.append(ci - ranks.get(i, 0) - ranks.get(i + 1, 0))
    return out


@dataclass(frozen=True)
class CMResult:
    cohen_macaulay: bool
    witness: tuple | None = None    # (face, i) with H~_i(link) != 0 below its dimension

    def __bool__(self):
        return self.cohen_macaulay


def is_cohen_macaulay(K: SimplicialComplex, field: PrimeField = PrimeField()) -> CMResult:
    """Reisner's criterion: every link has reduced homology only in its top dimension."""
    faces = sorted(K.faces, key=lambda f: (len(f), sorted(f)))
    for sigma in faces:
        lk = K.link(sigma)
        H = reduced_homology(lk, field)
        for i in range(-1, lk.dim):
            if H[i + 1]:
                return CMResult(False, (tuple(sorted(sigma)), i))
    return CMResult(True)


# ---------------------------------------------------------------------------
# Intervals

def _chains(vertices, leq) -> set:
    """All chains (totally ordered subsets) of a poset given by ``leq``."""
    faces = {frozenset()}
    n = len(vertices)
    above = {i: [j for j in range(n) if j != i and leq(vertices[i], vertices[j])] for i in range(n)}

    def extend(chain, last):
        for j in above[last]:
            new = chain | {vertices[j]}
            if new not in faces:
                faces.add(new)
                extend(new, j)

    for i in range(n):
        start = frozenset({vertices[i]})
        faces.add(start)
        extend(start, i)
    return faces


def divisor_poset(L: AffineSemigroup, lam, table: dict | None = None) -> DivisorPoset:
    """Elements of the closed interval [0, lam] under divisibility in the semigroup."""
    lam = _vec(lam)
    if table is None:
        table = members_up_to(L, _bidegree_or_fail(L, lam))
    dl = table[lam]
    els = [v for v in _sorted_members(table)
           if table[v].p <= dl.p and table[v].q <= dl.q and _sub(lam, v) in table]
    rel = set()
    for u in els:
        for v in els:
            if _sub(v, u) in table and all(x >= 0 for x in _sub(v, u)):
                rel.add((u, v))
    return DivisorPoset(tuple(els), frozenset(rel))


def _bidegree_or_fail(L: AffineSemigroup, lam) -> Bidegree:
    total = sum(lam)
    gens = L.generators()
    min_size = min(sum(g) for g, _ in gens)
    bound = total // min_size if min_size else 0
    for t in range(bound + 1):
        table = members_up_to(L, t)
        if lam in table:
            return table[lam]
    raise NotMember(f"{lam} is not in the semigroup")


def interval_complex(L: AffineSemigroup, lam, table: dict | None = None) -> SimplicialComplex:
    """Order complex of the open interval (0, lam) of the divisor poset."""
    lam = _vec(lam)
    if table is None or lam not in table:
        deg = _bidegree_or_fail(L, lam)
        table = members_up_to(L, deg)
    if lam == L.zero():
        raise NotMember("the interval (0, 0) is not defined")
    zero = L.zero()
    P = divisor_poset(L, lam, table)
    verts = [v for v in P.elements if v != zero and v != lam]
    faces = _chains(verts, P.leq)
    return SimplicialComplex(tuple(verts), frozenset(faces))


@dataclass(frozen=True)
class CMScan:
    verdict: str                  # "AllCM" or "NonCM"
    witness: tuple | None         # (lambda, face, i) for NonCM
    results: tuple                # (lambda, bidegree, CMResult) per scanned element
    modulus: int

    def __bool__(self):
        return self.verdict == "AllCM"

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "p": self.modulus, "lambdas": []}
        if self.witness is not None:
            lam, face, i = self.witness
            out["witness"] = {"lambda": list(lam), "face": [list(v) for v in face], "i": i}
        for lam, deg, res in self.results:
            entry = {"lambda": list(lam), "bidegree": list(deg), "cm": res.cohen_macaulay}
            if res.witness is not None:
                entry["face"] = [list(v) for v in res.witness[0]]
                entry["i"] = res.witness[1]
            out["lambdas"].append(entry)
        return out


def cm_scan(L: AffineSemigroup, deg_bound, field: PrimeField = PrimeField()) -> CMScan:
    """Cohen-Macaulay test of every interval complex up to ``deg_bound``."""
    table = members_up_to(L, deg_bound)
    results = []
    witness = None
    for lam in _sorted_members(table):
        if lam == L.zero():
            continue
        res = is_cohen_macaulay(interval_complex(L, lam, table), field)
        results.append((lam, table[lam], res))
        if not res and witness is None:
            witness = (lam,) + res.witness
    verdict = "AllCM" if witness is None else "NonCM"
    return CMScan(verdict, witness, tuple(results), field.modulus)


def semigroup_diagonal(L: AffineSemigroup, spec) -> AffineSemigroup:
    """Generators of the diagonal semigroup: Lambda_(a,b), or Lambda_(a,0) and Lambda_(0,b)."""
    a, b = spec.a, spec.b
    if spec.mode == "Delta":
        table = members_up_to(L, Bidegree(a, b))
        gens = sorted(v for v, d in table.items() if d == (a, b))
        if not gens:
            raise EmptyDiagonal(f"no elements of degree {(a, b)}")
        return AffineSemigroup(L.ambient_dim, tuple(gens), ())
    xs, ys = [], []
    if a:
        table = members_up_to(L, Bidegree(a, 0))
        xs = sorted(v for v, d in table.items() if d == (a, 0))
    if b:
        table = members_up_to(L, Bidegree(0, b))
        ys = sorted(v for v, d in table.items() if d == (0, b))
    if not xs and not ys:
        raise EmptyDiagonal(f"no elements of degrees {(a, 0)} or {(0, b)}")
    if not xs:
        # a one-block bigraded semigroup keeps its generators in the y-block
        return AffineSemigroup(L.ambient_dim, (), tuple(ys))
    return AffineSemigroup(L.ambient_dim, tuple(xs), tuple(ys))


def toric_presentation(L: AffineSemigroup, field: PrimeField = PrimeField()) -> RingPresentation:
    """K[L] as K[x_g, y_h] / I_L, the toric ideal computed by elimination."""
    d = L.ambient_dim
    xs, ys = L.x_generators, L.y_generators
    k = len(xs) + len(ys)
    total = d + k
    p = field.modulus
    gens = []
    for j, v in enumerate(xs + ys):
        e = [0] * total
        e[d + j] = 1
        gens.append(Polynomial({tuple(e): 1, tuple(v) + (0,) * k: p - 1}, total, 0, p))
    gb = buchberger(gens, TermOrder("block-revlex", (d, k)))
    kept = eliminate(gb, range(d, total))
    rels = tuple(Polynomial({e[d:]: c for e, c in g.terms.items()}, len(xs), len(ys), p)
                 for g in kept)
    return RingPresentation(len(xs), len(ys), field, rels)


