"""Truncated minimal free resolutions and the invariants read off from them.

A resolution is built one homological degree at a time.  In every fine
degree w the minimal generators of the current syzygy module Z are a
complement of sum_v x_v Z_(w - deg x_v) inside Z_w; the next syzygy module is
the kernel of the induced map from the new free module, again computed
componentwise.  Everything up to total degree ``max_deg`` is exact because
generators in degree e only depend on data in degrees at most e.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Union

import numpy as np

from .bipoly import Bidegree, RingPresentation
from .errors import BadOffset, BoundExceeded
from .gradedlin import (FreeModule, GradedModulePresentation, GradedRing,
                        add_w, module_space, ring_gb, sub_w)
from .modp import complement_rows, left_kernel


# ---------------------------------------------------------------------------
# Engine

class _FreeTarget:
    """A free module seen as the target of the next differential."""

    def __init__(self, free: FreeModule, kernel):
        self.free = free
        self.kernel = kernel

    def dim(self, w):
        return self.free.dim(w)

    def act(self, v, w, X):
        return self.free.mult(v, w, X)

    def sub(self, w):
        return self.kernel(w)

    def degrees(self, max_total):
        return self.free.degrees(max_total)

    def generator_candidates(self):
        return None


class _SpaceTarget:
    """Level-zero target: a module space (subquotient of a free module)."""

    def __init__(self, space):
        self.space = space

    def dim(self, w):
        return self.space.free.dim(w)

    def act(self, v, w, X):
        return self.space.act(v, w, X)

    def sub(self, w):
        return self.space.U(w)

    def degrees(self, max_total):
        return self.space.degrees(max_total)

    def generator_candidates(self):
        return self.space.generator_candidates()


@dataclass
class Level:
    free: FreeModule            # F_i
    generators: list            # (fine degree, vector in the previous level's coordinates)


class Resolver:
    """Minimal free resolution of a graded target, truncated in both directions."""

    def __init__(self, ring: GradedRing, target, max_i: int, max_deg: int):
        self.ring = ring
        self.p = ring.p
        self.max_i = max_i
        self.max_deg = max_deg
        self.levels = []
        self.minimal = True
        self._run(target)

    def _total(self, w):
        return w[0] + w[1]

    def _minimal_generators(self, target) -> list:
        cand = target.generator_candidates()
        gens = []
        empty_cache = {}

        def sub(w):
            if target.dim(w) == 0:
                if w not in empty_cache:
                    empty_cache[w] = np.zeros((0, 0), dtype=np.int64)
                return empty_cache[w]
            return target.sub(w)

        for w in target.degrees(self.max_deg):
            if cand is not None and w not in cand:
                continue
            Zw = sub(w)
            if Zw.shape[0] == 0:
                continue
            parts = []
            for v in range(self.ring.nvars):
                pw = sub_w(w, self.ring.var_weight(v))
                P = sub(pw)
                if P.shape[0]:
                    parts.append(target.act(v, pw, P))
            span = np.vstack(parts) if parts else np.zeros((0, Zw.shape[1]), dtype=np.int64)
            for c in complement_rows(Zw, span, self.p):
                gens.append((w, Zw[c].copy()))
        return gens

    def _run(self, target):
        prev_free = None
        for i in range(self.max_i + 1):
            gens = self._minimal_generators(target)
            free = FreeModule(self.ring, [w for w, _ in gens])
            if prev_free is not None:
                self._check_minimal(prev_free, gens)
            self.levels.append(Level(free, gens))
            if i == self.max_i or not gens:
                break
            target = _FreeTarget(free, self._kernel_function(free, gens, target))
            prev_free = free
        while len(self.levels) < self.max_i + 1:
            self.levels.append(Level(FreeModule(self.ring, []), []))

    def _check_minimal(self, prev_free, gens):
        # a generator of a syzygy module must not involve unit coefficients
        for w, vec in gens:
            for k, off, size in prev_free.layout(w)[0]:
                if prev_free.gen_weights[k] == w and vec[off:off + size].any():
                    self.minimal = False

    def _kernel_function(self, free: FreeModule, gens, target):
        images = {}
        cache = {}
        ring = self.ring

        def image(k, w):
            # rows: images of m * gamma_k for the standard monomials m of degree w - g_k
            key = (k, w)
            if key in images:
                return images[key]
            g = free.gen_weights[k]
            basis = ring.basis(sub_w(w, g))
            if w == g:
                out = gens[k][1][None, :] % self.p
            else:
                out = np.zeros((len(basis), target.dim(w)), dtype=np.int64)
                by_var = {}
                for r, m in enumerate(basis):
                    v = next(t for t, e in enumerate(m) if e)
                    by_var.setdefault(v, []).append(r)
                for v, rows in by_var.items():
                    pw = sub_w(w, ring.var_weight(v))
                    prev = image(k, pw)
                    idx = ring.index(sub_w(pw, g))
                    sel = []
                    for r in rows:
                        m = list(basis[r])
                        m[v] -= 1
                        sel.append(idx[tuple(m)])
                    out[rows] = target.act(v, pw, prev[sel])
            images[key] = out
            return out

        def kernel(w):
            if w not in cache:
                blocks, dim = free.layout(w)
                if dim == 0:
                    cache[w] = np.zeros((0, 0), dtype=np.int64)
                else:
                    A = np.vstack([image(k, w) for k, _, _ in blocks])
                    cache[w] = left_kernel(A, self.p)
            return cache[w]

        return kernel

    def betti_counts(self) -> list:
        """Per level, a Counter of fine degrees of minimal generators."""
        return [Counter(w for w, _ in lev.generators) for lev in self.levels]


# ---------------------------------------------------------------------------
# Betti tables and regularity

@dataclass(frozen=True)
class BettiTable:
    entries: dict                 # (i, Bidegree) -> dim
    max_i: int
    max_total_degree: int

    def get(self, i: int, j: int, k: int) -> int:
        return self.entries.get((i, Bidegree(j, k)), 0)

    def total(self, i: int, e: int) -> int:
        return sum(v for (h, d), v in self.entries.items() if h == i and d.total == e)

    def rank(self, i: int) -> int:
        return sum(v for (h, _), v in self.entries.items() if h == i)

    def t(self, i: int):
        """Largest total degree in homological degree i, or None."""
        degs = [d.total for (h, d), v in self.entries.items() if h == i and v]
        return max(degs) if degs else None

    def min_degree(self, i: int):
        degs = [d.total for (h, d), v in self.entries.items() if h == i and v]
        return min(degs) if degs else None

    def nonzero(self) -> list:
        return sorted((i, d.p, d.q, v) for (i, d), v in self.entries.items() if v)

    def to_json(self) -> dict:
        return {
            "entries": [{"i": i, "j": j, "k": k, "dim": v} for i, j, k, v in self.nonzero()],
            "max_i": self.max_i,
            "max_total_degree": self.max_total_degree,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "BettiTable":
        entries = {(e["i"], Bidegree(e["j"], e["k"])): e["dim"] for e in data["entries"]}
        return cls(entries, data["max_i"], data["max_total_degree"])

    def poincare_coefficients(self) -> dict:
        """{(j, k, i): dim}, the coefficients of s^j t^k z^i."""
        return {(d.p, d.q, i): v for (i, d), v in self.entries.items() if v}


def _as_module(M) -> GradedModulePresentation:
    if isinstance(M, RingPresentation):
        return GradedModulePresentation.free(M)
    if hasattr(M, "ring") and isinstance(M.ring, RingPresentation) and not isinstance(
            M, GradedModulePresentation):
        return GradedModulePresentation.free(M.ring)
    return M


def resolve(M: GradedModulePresentation, max_i: int, max_deg: int) -> Resolver:
    if M.truncation is not None and max_deg > M.truncation[1]:
        raise BoundExceeded(f"requested degree {max_deg} beyond the presentation bound "
                            f"{M.truncation[1]}", bound=M.truncation[1])
    space = module_space(M)
    return Resolver(space.ring, _SpaceTarget(space), max_i, max_deg)


def _table(res: Resolver) -> BettiTable:
    entries = Counter()
    for i, counts in enumerate(res.betti_counts()):
        for w, v in counts.items():
            entries[(i, Bidegree(w[0], w[1]))] += v
    return BettiTable(dict(entries), res.max_i, res.max_deg)


def betti(M, max_i: int = 4, max_deg: int = 8) -> BettiTable:
    """Graded Betti numbers dim Tor_i(M, K)_(j,k) for i <= max_i, j+k <= max_deg.

    ``M`` may be a module presentation or a ring (resolved as a module over itself).
    """
    return _table(resolve(_as_module(M), max_i, max_deg))


def residue_field_betti(ring: RingPresentation, max_i: int = 4, max_deg: int = 8) -> BettiTable:
    return betti(GradedModulePresentation.residue_field(ring), max_i, max_deg)


@dataclass(frozen=True)
class RegularityReport:
    t_values: dict          # s -> t_s, or None when Tor_s vanishes in bounds
    reg: int | None
    reg_truncated: bool
    indeg: int | None
    rate: Fraction | None
    rate_truncated: bool
    max_i: int
    max_deg: int

    def to_json(self) -> dict:
        return {
            "t": {str(s): t for s, t in sorted(self.t_values.items())},
            "reg": self.reg,
            "reg_truncated": self.reg_truncated,
            "indeg": self.indeg,
            "rate": None if self.rate is None else str(self.rate),
            "rate_truncated": self.rate_truncated,
            "max_i": self.max_i,
            "max_deg": self.max_deg,
        }


def regularity(table: BettiTable, M=None) -> RegularityReport:
    """t_s, reg, indeg and rate from a truncated Betti table.

    ``reg_truncated`` is set when the supremum is attained in the last
    homological degree or some t_s reached the degree bound, so larger bounds
    might increase it.  ``M`` is accepted for symmetry and not needed.
    """
    t = {s: table.t(s) for s in range(table.max_i + 1)}
    diffs = [(ts - s, s) for s, ts in t.items() if ts is not None]
    reg = max(d for d, _ in diffs) if diffs else None
    at_edge = any(ts is not None and ts >= table.max_total_degree for ts in t.values())
    reg_trunc = bool(diffs) and (at_edge or any(s == table.max_i and d == reg for d, s in diffs))
    indeg = table.min_degree(0)
    ratios = [(Fraction(ts, s), s) for s, ts in t.items() if s >= 1 and ts is not None]
    rate = max(r for r, _ in ratios) if ratios else None
    rate_trunc = bool(ratios) and (at_edge or any(s == table.max_i and r == rate for r, s in ratios))
    return RegularityReport(t, reg, reg_trunc, indeg, rate, rate_trunc, table.max_i,
                            table.max_total_degree)


# ---------------------------------------------------------------------------
# Verdicts

@dataclass(frozen=True)
class CertifiedKoszul:
    reason: str = "quadratic GB"

    def to_json(self):
        return {"verdict": "CertifiedKoszul", "reason": self.reason}


@dataclass(frozen=True)
class KoszulUpTo:
    H: int

    def to_json(self):
        return {"verdict": "KoszulUpTo", "H": self.H}


@dataclass(frozen=True)
class CertifiedNonKoszul:
    i: int
    bidegree: Bidegree

    @property
    def total(self):
        return self.bidegree.total

    def to_json(self):
        return {"verdict": "CertifiedNonKoszul", "i": self.i,
                "j": self.bidegree.p, "k": self.bidegree.q}


KoszulVerdict = Union[CertifiedKoszul, KoszulUpTo, CertifiedNonKoszul]


def _ring_of(A) -> RingPresentation:
    return A if isinstance(A, RingPresentation) else A.ring


def koszul_test(A, max_i: int = 4, max_deg: int | None = None) -> KoszulVerdict:
    """Koszul verdict for a ring or algebra presentation.

    A reduced Groebner basis of degree at most two certifies Koszulness;
    otherwise the residue field is resolved and the first entry off the
    diagonal i = j + k is a certificate of the opposite.
    """
    ring = _ring_of(A)
    if ring_gb(ring).max_degree() <= 2:
        return CertifiedKoszul()
    if max_deg is None:
        # wide enough to see every minimal relation as an entry of Tor_2
        top = max((f.total_degree() for f in ring.relations), default=2)
        max_deg = max(max_i + 1, top)
    table = residue_field_betti(ring, max_i, max_deg)
    for i, j, k, v in table.nonzero():
        if j + k != i:
            return CertifiedNonKoszul(i, Bidegree(j, k))
    return KoszulUpTo(max_i)


@dataclass(frozen=True)
class LinearityResult:
    linear: bool
    witness: tuple | None = None    # (i, j, k) of an entry off the line
    table: BettiTable | None = field(default=None, compare=False)

    def __bool__(self):
        return self.linear


def table_linearity(table: BettiTable, expected: int) -> LinearityResult:
    """Check that every entry of ``table`` lies on total degree i + expected."""
    for i, j, k, v in table.nonzero():
        if j + k != i + expected:
            return LinearityResult(False, (i, j, k), table)
    return LinearityResult(True, None, table)


def linearity_test(M, expected: int, max_i: int = 3, max_deg: int | None = None) -> LinearityResult:
    """True iff every computed Betti entry lies on total degree i + expected."""
    if max_deg is None:
        max_deg = max_i + expected + 1
    return table_linearity(betti(M, max_i, max_deg), expected)


# ---------------------------------------------------------------------------
# Regularity bounds and the Poincare factorization

def _ceil_frac(x: Fraction) -> int:
    return ceil(x)


@dataclass(frozen=True)
class BoundResult:
    bound: int
    by_symmetry: bool = False

    def __int__(self):
        return self.bound


def regularity_bound(spec, off, r: int) -> int:
    """Upper bound for the regularity of the (c,d) strand of a module of regularity r."""
    return regularity_bound_detail(spec, off, r).bound


def regularity_bound_detail(spec, off, r: int) -> BoundResult:
    from .constructions import index_set_contains
    a, b, mode = spec.a, spec.b, spec.mode
    c, d = off.c, off.d
    if not index_set_contains(spec, off):
        raise BadOffset(f"offset {(c, d)} is not canonical for {spec}")
    F = Fraction
    if mode == "Delta":
        if b == 0:
            return BoundResult(max(0, ceil(F(r - c, a))))
        if a == 0:
            return BoundResult(max(0, ceil(F(r - d, b))))
        return BoundResult(max(0, ceil(F(r - c, a)), ceil(F(r - d, b))))
    if b == 0:
        return BoundResult(max(0, ceil(F(r, a))))
    if a == 0:
        return BoundResult(max(0, ceil(F(r, b))))
    swapped = a > b
    if swapped:
        a, b, c, d = b, a, d, c
    return BoundResult(min(r, ceil(F(r - c, a) - F(d, b) + 1)), swapped)


def _series_product(P: dict, Q: dict, max_i: int, max_deg: int) -> dict:
    out = Counter()
    for (j1, k1, i1), v1 in P.items():
        for (j2, k2, i2), v2 in Q.items():
            j, k, i = j1 + j2, k1 + k2, i1 + i2
            if i <= max_i and j + k <= max_deg:
                out[(j, k, i)] += v1 * v2
    return {key: v for key, v in out.items() if v}


def _truncate(P: dict, max_i: int, max_deg: int) -> dict:
    return {(j, k, i): v for (j, k, i), v in P.items() if i <= max_i and j + k <= max_deg and v}


def poincare_factorization_check(R: RingPresentation, max_i: int = 3, max_deg: int = 6) -> bool:
    """Check P^R_K = P^R_{R/n_y} * P^{R/n_y}_K coefficientwise within bounds."""
    K = GradedModulePresentation.residue_field(R)
    quotient = GradedModulePresentation.quotient(R, R.variables()[R.n:])
    lhs = _truncate(betti(K, max_i, max_deg).poincare_coefficients(), max_i, max_deg)
    p1 = betti(quotient, max_i, max_deg).poincare_coefficients()
    from .constructions import DiagonalSpec, diagonal_presentation
    sub = diagonal_presentation(R, DiagonalSpec(1, 0, "DeltaTilde"))
    p2 = residue_field_betti(sub.ring, max_i, max_deg).poincare_coefficients()
    rhs = _series_product(p1, p2, max_i, max_deg)
    return lhs == rhs
