"""Algebras and modules built from a standard bigraded algebra.

Diagonal subalgebras R_Delta (components R_(ia,ib)), generalized Veronese
subrings R_DeltaTilde (components R_(ia,jb)), their strand modules, symmetric
and Rees algebras, tensor/Segre/Veronese products and the explicit quadratic
basis for symmetric algebras of maximal ideals.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import ceil
from typing import Sequence

import numpy as np

from .bipoly import (DEFAULT_ORDER, Bidegree, Polynomial, RingPresentation,
                     TermOrder, bidegree_of, monomials_of_bidegree, polarize)
from .errors import (BadOffset, DimensionMismatch, EmptyDiagonal,
                     MixedGeneratorDegrees, NotQuadratic, StarViolated,
                     TruncationTooSmall, UnequalDegrees)
from .gradedlin import (GradedModulePresentation, add_w, graded_ring,
                        module_grading, module_space, ring_gb, ring_weights,
                        sub_w)
from .groebner import (apply_linear_change, buchberger, condition_star,
                       eliminate, gin_trials, initial_ideal, is_groebner_basis,
                       normal_form)
from .resolution import BettiTable, Resolver, _table, table_linearity

MODES = ("Delta", "DeltaTilde")


@dataclass(frozen=True)
class DiagonalSpec:
    a: int
    b: int
    mode: str = "Delta"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.a < 0 or self.b < 0 or (self.a, self.b) == (0, 0):
            raise ValueError(f"need non-negative (a, b) != (0, 0), got {(self.a, self.b)}")

    @property
    def tilde(self) -> bool:
        return self.mode == "DeltaTilde"


@dataclass(frozen=True)
class Offset:
    c: int
    d: int

    def __post_init__(self):
        if self.c < 0 or self.d < 0:
            raise BadOffset(f"offsets are non-negative, got {(self.c, self.d)}")


@dataclass(frozen=True)
class ShiftResult:
    zero: bool
    offset: Offset | None = None
    shift: tuple | None = None      # (l,) for Delta, (k, l) for DeltaTilde


def index_set_contains(spec: DiagonalSpec, off: Offset) -> bool:
    """Is ``off`` one of the canonical offsets of the decomposition of R?"""
    a, b, c, d = spec.a, spec.b, off.c, off.d
    if spec.mode == "Delta":
        return c < a or d < b
    if b == 0:
        return d == 0 and c < a
    if a == 0:
        return c == 0 and d < b
    return c < a and d < b


def _cdiv(num: int, den: int) -> int:
    return ceil(Fraction(num, den))


def shift_decompose(spec: DiagonalSpec, off: Offset, p: int, q: int) -> ShiftResult:
    """Write the (c,d) strand of R(-p,-q) as a shifted canonical strand of R."""
    if not index_set_contains(spec, off):
        raise BadOffset(f"offset {(off.c, off.d)} is not canonical for {spec}")
    if p < 0 or q < 0:
        raise BadOffset("twists must be non-negative")
    a, b, c, d = spec.a, spec.b, off.c, off.d
    if spec.mode == "Delta":
        if b == 0:
            if q > d:
                return ShiftResult(True)
            return ShiftResult(False, Offset((c - p) % a, d - q), (max(0, _cdiv(p - c, a)),))
        if a == 0:
            if p > c:
                return ShiftResult(True)
            return ShiftResult(False, Offset(c - p, (d - q) % b), (max(0, _cdiv(q - d, b)),))
        l = max(0, _cdiv(p - c, a), _cdiv(q - d, b))
        return ShiftResult(False, Offset(l * a + c - p, l * b + d - q), (l,))
    if b == 0:
        if q > 0:
            return ShiftResult(True)
        return ShiftResult(False, Offset((c - p) % a, 0), (max(0, _cdiv(p - c, a)), 0))
    if a == 0:
        if p > 0:
            return ShiftResult(True)
        return ShiftResult(False, Offset(0, (d - q) % b), (0, max(0, _cdiv(q - d, b))))
    k = max(0, _cdiv(p - c, a))
    l = max(0, _cdiv(q - d, b))
    return ShiftResult(False, Offset((c - p) % a, (d - q) % b), (k, l))


# ---------------------------------------------------------------------------
# Diagonal presentations

@dataclass(frozen=True)
class AlgebraPresentation:
    """A subalgebra K[z_1..z_N] / kernel -> source, z_i -> segment_map[i].

    ``ring`` carries the kernel as its relations; ``kernel`` lists the
    elements that are new relative to the source ring (for diagonals this is
    the whole kernel).
    """

    ring: RingPresentation
    kernel: tuple
    segment_map: tuple           # exponent vectors in the source ring, or polynomials
    source: RingPresentation | None = field(default=None, compare=False)
    spec: DiagonalSpec | None = None

    def image(self, f: Polynomial) -> Polynomial:
        src = self.source
        imgs = [Polynomial.monomial(u, src.n, src.m, src.p) if isinstance(u, tuple) else u
                for u in self.segment_map]
        return f.substitute(imgs)

    def variable_names(self) -> list:
        return self.ring.variable_names()


def _diagonal_blocks(R: RingPresentation, spec: DiagonalSpec):
    """Monomials for the x-block and y-block of the diagonal algebra."""
    a, b = spec.a, spec.b
    key = lambda e: DEFAULT_ORDER.key(e)
    if spec.mode == "Delta":
        xs = sorted(monomials_of_bidegree(R.n, R.m, a, b), key=key, reverse=True)
        return xs, []
    xs = sorted(monomials_of_bidegree(R.n, R.m, a, 0), key=key, reverse=True) if a else []
    ys = sorted(monomials_of_bidegree(R.n, R.m, 0, b), key=key, reverse=True) if b else []
    return xs, ys


@lru_cache(maxsize=None)
def _diagonal_kernel(R: RingPresentation, spec: DiagonalSpec):
    xs, ys = _diagonal_blocks(R, spec)
    mons = xs + ys
    if not mons:
        raise EmptyDiagonal(f"no monomials of the degrees required by {spec}")
    N, nz = R.nvars, len(mons)
    total = N + nz
    p = R.p
    gens = [f.embed(total, 0, list(range(N))) for f in R.relations]
    for k, u in enumerate(mons):
        z = [0] * total
        z[N + k] = 1
        gens.append(Polynomial({tuple(z): 1, tuple(u) + (0,) * nz: p - 1}, total, 0, p))
    gb = buchberger(gens, TermOrder("block-revlex", (N, nz)))
    kept = eliminate(gb, range(N, total))
    nzx = len(xs)
    kernel = []
    for g in kept:
        t = {e[N:]: c for e, c in g.terms.items()}
        kernel.append(Polynomial(t, nzx, nz - nzx, p))
    return tuple(xs), tuple(ys), tuple(kernel)


def diagonal_presentation(R: RingPresentation, spec: DiagonalSpec,
                          weights: tuple | None = None) -> AlgebraPresentation:
    """Presentation of R_Delta (resp. R_DeltaTilde) by elimination.

    There is one variable per ambient monomial of the generating degree(s),
    ordered decreasingly by the term order on their images.  The returned ring
    carries a fine grading pulled back from ``weights`` (default: the finest
    grading of R) so components split the same way as in R.
    """
    xs, ys, kernel = _diagonal_kernel(R, spec)
    Rw = ring_weights(R) if weights is None else weights
    gr = graded_ring(R, Rw)
    mons = xs + ys
    dw = []
    for k, u in enumerate(mons):
        bideg = (1, 0) if k < len(xs) else (0, 1)
        dw.append(bideg + gr.weight(u))
    names = tuple(f"z{k + 1}" for k in range(len(mons)))
    ring = RingPresentation(len(xs), len(ys), R.field, kernel, names, tuple(dw))
    return AlgebraPresentation(ring, kernel, mons, R, spec)


# ---------------------------------------------------------------------------
# Strands

class _StrandTarget:
    """The (c,d) strand of a module space, seen over the diagonal algebra."""

    def __init__(self, space, dalg: AlgebraPresentation, spec, off, max_total):
        self.space = space
        self.dring = dalg.ring
        self.mons = dalg.segment_map
        self.spec, self.off = spec, off
        self._degrees = self._enumerate(max_total)
        self._lookup = {}

    def _enumerate(self, max_total):
        a, b, c, d = self.spec.a, self.spec.b, self.off.c, self.off.d
        out = []
        for t in range(max_total + 1):
            if self.spec.mode == "Delta":
                pairs = [((t, 0), (t * a + c, t * b + d))]
            else:
                pairs = []
                for i in range(t + 1):
                    j = t - i
                    if (b == 0 and j) or (a == 0 and i):
                        continue
                    pairs.append(((i, j), (i * a + c, j * b + d)))
            for W0, bideg in pairs:
                for w in self.space.fine_degrees_of_bidegree(bideg):
                    out.append(tuple(W0) + tuple(w))
        return out

    def _w(self, W):
        return tuple(W[2:])

    def dim(self, W):
        if W[0] < 0 or W[1] < 0:
            return 0
        return self.space.free.dim(self._w(W))

    def sub(self, W):
        return self.space.U(self._w(W))

    def act(self, v, W, X):
        return self.space.act_monomial(self.mons[v], self._w(W), X)[1]

    def degrees(self, max_total):
        return [W for W in self._degrees if W[0] + W[1] <= max_total]

    def generator_candidates(self):
        return None


def _strand_setup(M: GradedModulePresentation, spec: DiagonalSpec, off: Offset):
    rw, _ = module_grading(M)
    dalg = diagonal_presentation(M.ring, spec, rw)
    return dalg, module_space(M)


def strand_resolution(M: GradedModulePresentation, spec: DiagonalSpec, off: Offset,
                      max_i: int, max_deg: int) -> Resolver:
    """Minimal resolution of the (c,d) strand over the diagonal algebra, directly."""
    dalg, space = _strand_setup(M, spec, off)
    dgr = graded_ring(dalg.ring)
    return Resolver(dgr, _StrandTarget(space, dalg, spec, off, max_deg), max_i, max_deg)


def strand_betti(M: GradedModulePresentation, spec: DiagonalSpec, off: Offset,
                 max_i: int = 3, max_deg: int = 6) -> BettiTable:
    return _table(strand_resolution(M, spec, off, max_i, max_deg))


def strand_linearity_test(M: GradedModulePresentation, spec: DiagonalSpec, off: Offset,
                          expected: int = 0, max_i: int = 3, max_deg: int | None = None):
    """:func:`linearity_test` for the (c,d) strand of ``M`` over the diagonal algebra."""
    if max_deg is None:
        max_deg = max_i + expected + 1
    return table_linearity(strand_betti(M, spec, off, max_i, max_deg), expected)


def strand_module(M: GradedModulePresentation, spec: DiagonalSpec, off: Offset,
                  gen_bound: int, rel_bound: int) -> GradedModulePresentation:
    """Presentation of the (c,d) strand of M over the diagonal algebra.

    Generators are searched up to ``rel_bound``; one above ``gen_bound``
    raises :class:`TruncationTooSmall`.  Relations are complete up to
    ``rel_bound`` and the result records both bounds.
    """
    if not 0 <= gen_bound <= rel_bound:
        raise ValueError("need 0 <= gen_bound <= rel_bound")
    res = strand_resolution(M, spec, off, 1, rel_bound)
    lev0, lev1 = res.levels[0], res.levels[1]
    for W, _ in lev0.generators:
        if W[0] + W[1] > gen_bound:
            raise TruncationTooSmall(f"generator in degree {W[0] + W[1]} beyond gen_bound {gen_bound}",
                                     degree=W[0] + W[1])
    F0 = lev0.free
    columns = [tuple(F0.polys(vec, W)) for W, vec in lev1.generators]
    shifts = tuple(Bidegree(W[0], W[1]) for W, _ in lev0.generators)
    fine = tuple(W for W, _ in lev0.generators)
    return GradedModulePresentation(F0.ring.ring, shifts, tuple(columns), None,
                                    (gen_bound, rel_bound), fine)


def strand_hilbert(M: GradedModulePresentation, spec: DiagonalSpec, off: Offset, deg) -> int:
    """dim of the strand component of internal degree ``deg`` (int or pair)."""
    from .gradedlin import hilbert_value
    a, b, c, d = spec.a, spec.b, off.c, off.d
    if spec.mode == "Delta":
        i = deg if isinstance(deg, int) else deg[0]
        return hilbert_value(M, (i * a + c, i * b + d))
    i, j = deg
    if (b == 0 and j) or (a == 0 and i):
        return 0
    return hilbert_value(M, (i * a + c, j * b + d))


# ---------------------------------------------------------------------------
# Symmetric algebras and the explicit quadratic basis

def _embed_xy(f: Polynomial, ny: int) -> Polynomial:
    return f.embed(f.nx, ny, list(range(f.nx)))


def _is_maximal_x_ideal(A: RingPresentation, M: GradedModulePresentation) -> bool:
    if M.generators is None or M.rank != 1 or len(M.generators) != A.n:
        return False
    return all(col[0] == x for col, x in zip(M.generators, A.variables()))


def symmetric_algebra_presentation(A: RingPresentation, M: GradedModulePresentation) -> RingPresentation:
    """S(M) = A[y_1..y_m] / (J, g_i) with g_i = sum_j a_ij y_j from the relations of M."""
    if A.m != 0:
        raise DimensionMismatch("symmetric algebras are built over single-graded rings")
    degs = {d.total for d in M.generator_degrees()}
    if len(degs) > 1:
        raise MixedGeneratorDegrees(f"generators in degrees {sorted(degs)}")
    n = A.n
    if M.generators is None:
        m = M.rank
        ys = [Polynomial.variable(n + j, n, m, A.p) for j in range(m)]
        rels = [_embed_xy(f, m) for f in A.relations]
        for col in M.relation_matrix:
            g = Polynomial.zero(n, m, A.p)
            for a_ij, y in zip(col, ys):
                g = g + _embed_xy(a_ij, m) * y
            if not g.is_zero():
                rels.append(g)
        return RingPresentation(n, m, A.field, tuple(rels))
    if _is_maximal_x_ideal(A, M):
        rels = [_embed_xy(f, n) for f in A.relations]
        rels += [polarize(f, 1) for f in A.relations]
        rels += [delta(i, j, n, A.p) for i in range(n) for j in range(i + 1, n)]
        return RingPresentation(n, n, A.field, tuple(r for r in rels if not r.is_zero()))
    if M.rank != 1:
        raise DimensionMismatch("symmetric algebras of submodules need rank one")
    rees = rees_presentation(A, [col[0] for col in M.generators])
    linear = [g for g in rees.ring.relations if all(sum(e[n:]) <= 1 for e in g.terms)]
    return RingPresentation(n, rees.ring.m, A.field, tuple(linear))


def delta(i: int, j: int, n: int, p: int) -> Polynomial:
    """x_i y_j - x_j y_i (0-based indices)."""
    e1 = [0] * (2 * n)
    e1[i] += 1
    e1[n + j] += 1
    e2 = [0] * (2 * n)
    e2[j] += 1
    e2[n + i] += 1
    return Polynomial({tuple(e1): 1, tuple(e2): p - 1}, n, n, p)


def theorem32_candidate_basis(A: RingPresentation) -> list:
    """G = {g_i} + {g_i^(1)} + {x_i y_j - x_j y_i : i < j} over A[y_1..y_n].

    The relations of A must form a quadratic Groebner basis whose initial
    ideal is stable in the sense checked by :func:`condition_star`.
    """
    if A.m != 0:
        raise DimensionMismatch("expected a single-graded ring")
    gb = ring_gb(A)
    if any(g.total_degree() != 2 for g in gb):
        raise NotQuadratic("relations are not a quadratic Groebner basis")
    if not condition_star(initial_ideal(gb)):
        raise StarViolated("initial ideal of the relations is not stable")
    n = A.n
    G = [_embed_xy(g, n) for g in gb]
    G += [polarize(g, 1) for g in gb]
    G += [delta(i, j, n, A.p) for i in range(n) for j in range(i + 1, n)]
    return G


@dataclass(frozen=True)
class Theorem32Result:
    matrix: tuple                 # coordinate change used (rows)
    seed: int
    gin: object                   # MonomialIdeal
    ring: RingPresentation        # transformed ring A'
    candidate: tuple
    is_groebner: bool
    quadratic: bool


def theorem32_pipeline(gens: Sequence[Polynomial], trials: int = 5, seed: int = 0) -> Theorem32Result:
    """Gin, then the coordinate change, then the candidate basis and its GB check."""
    from .groebner import generic_initial_ideal
    gin = generic_initial_ideal(gens, DEFAULT_ORDER, trials, seed)
    if any(sum(g) != 2 for g in gin.minimal_generators):
        raise NotQuadratic("generic initial ideal is not quadratic")
    if not condition_star(gin):
        raise StarViolated("generic initial ideal violates the stability condition")
    g, gb = gin_trials(gens, DEFAULT_ORDER, 1, seed)[0]
    f0 = gens[0]
    A = RingPresentation(f0.nx, 0, relations=tuple(gb.generators))
    G = theorem32_candidate_basis(A)
    return Theorem32Result(tuple(tuple(r) for r in g), seed, gin, A, tuple(G),
                           is_groebner_basis(G), all(h.total_degree() == 2 for h in G))


# ---------------------------------------------------------------------------
# Rees algebras and products

def rees_presentation(A: RingPresentation, ideal_gens: Sequence[Polynomial]) -> AlgebraPresentation:
    """R(I) = A[It] = A[y_1..y_k] / kernel with y_j -> f_j t."""
    gens = [f for f in ideal_gens if not f.is_zero()]
    if not gens:
        raise DimensionMismatch("need at least one ideal generator")
    degs = set()
    for f in gens:
        if not f.is_homogeneous():
            raise UnequalDegrees(f"{f.format()} is not homogeneous")
        degs.add(f.total_degree())
    if len(degs) > 1:
        raise UnequalDegrees(f"generators in degrees {sorted(degs)}")
    if A.m:
        raise DimensionMismatch("Rees algebras are built over single-graded rings")
    N, k, p = A.nvars, len(gens), A.p
    total = 1 + N + k
    shift = list(range(1, N + 1))
    amb = [f.embed(total, 0, shift) for f in A.relations]
    for j, f in enumerate(gens):
        y = [0] * total
        y[1 + N + j] = 1
        t = {tuple(y): 1}
        for e, c in f.terms.items():
            key = (1,) + tuple(e) + (0,) * k
            t[key] = (t.get(key, 0) - c) % p
        amb.append(Polynomial(t, total, 0, p))
    gb = buchberger(amb, TermOrder("block-revlex", (1, N + k)))
    kept = eliminate(gb, range(1, total))
    rels = [Polynomial({e[1:]: c for e, c in g.terms.items()}, N, k, p) for g in kept]
    ring = RingPresentation(A.n, k, A.field, tuple(rels))
    src_gb = ring_gb(RingPresentation(A.n, k, A.field, tuple(_embed_xy(f, k) for f in A.relations)))
    new = tuple(g for g in rels if not normal_form(g, src_gb).is_zero())
    return AlgebraPresentation(ring, new, tuple(gens), A, None)


def tensor_product(A: RingPresentation, B: RingPresentation) -> RingPresentation:
    if A.m or B.m:
        raise DimensionMismatch("tensor factors must be single-graded")
    n, m = A.n, B.n
    rels = [f.embed(n, m, list(range(n))) for f in A.relations]
    rels += [f.embed(n, m, list(range(n, n + m))) for f in B.relations]
    names = None
    if A.names or B.names:
        names = tuple(A.variable_names()) + tuple(f"y{j + 1}" for j in range(m))
    return RingPresentation(n, m, A.field, tuple(rels), names)


def product_algebra(A: RingPresentation, B: RingPresentation | None, kind):
    """Tensor, Segre, or Veronese(d) construction.

    ``kind`` is "Tensor", "Segre", ("Veronese", d) or the string "Veronese(d)".
    Tensor returns a ring; the other two return diagonal presentations.
    """
    if isinstance(kind, str) and kind.startswith("Veronese("):
        kind = ("Veronese", int(kind[len("Veronese("):-1]))
    if kind == "Tensor":
        return tensor_product(A, B)
    if kind == "Segre":
        return diagonal_presentation(tensor_product(A, B), DiagonalSpec(1, 1, "Delta"))
    if isinstance(kind, tuple) and kind[0] == "Veronese":
        d = int(kind[1])
        if d < 1:
            raise ValueError("Veronese degree must be positive")
        if A.m:
            raise DimensionMismatch("Veronese subrings are taken of single-graded rings")
        return diagonal_presentation(A, DiagonalSpec(d, 0, "Delta"))
    raise ValueError(f"unknown product kind {kind!r}")
