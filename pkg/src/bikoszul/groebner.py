"""Buchberger's algorithm, normal forms, elimination and generic initial ideals."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .bipoly import (DEFAULT_ORDER, Monomial, Polynomial, TermOrder, divides,
                     mono_div, mono_lcm, mono_mul)
from .errors import BadOrder, NotQuadratic, Unstable


@dataclass(frozen=True)
class MonomialIdeal:
    minimal_generators: frozenset
    nvars: int

    @classmethod
    def from_monomials(cls, monomials: Iterable[Monomial], nvars: int) -> "MonomialIdeal":
        mons = sorted(set(map(tuple, monomials)), key=sum)
        kept = []
        for m in mons:
            if not any(divides(g, m) for g in kept):
                kept.append(m)
        return cls(frozenset(kept), nvars)

    def __contains__(self, m: Monomial) -> bool:
        return any(divides(g, m) for g in self.minimal_generators)

    def __len__(self):
        return len(self.minimal_generators)

    def sorted_generators(self, order: TermOrder = DEFAULT_ORDER) -> list:
        return sorted(self.minimal_generators, key=order.key, reverse=True)

    def degrees(self) -> set:
        return {sum(g) for g in self.minimal_generators}


@dataclass(frozen=True)
class GroebnerBasis:
    generators: tuple
    order: TermOrder = DEFAULT_ORDER
    reduced: bool = True

    def leading_monomials(self) -> list:
        return [g.leading_monomial(self.order) for g in self.generators]

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def is_quadratic(self) -> bool:
        """All generators of degree at most two."""
        return all(g.total_degree() <= 2 for g in self.generators)

    def max_degree(self) -> int:
        return max((g.total_degree() for g in self.generators), default=0)


# Internal representation: monic dicts {exp: coeff}, leading monomial cached.

def _monic(terms: dict, key, p: int):
    lm = max(terms, key=key)
    inv = pow(terms[lm], -1, p)
    return lm, {e: c * inv % p for e, c in terms.items()}


def _reduce(f: dict, basis: Sequence, key, p: int, full: bool = True) -> dict:
    """Remainder of ``f`` modulo the monic ``basis`` (pairs ``(lm, terms)``)."""
    f = dict(f)
    rem = {}
    while f:
        m = max(f, key=key)
        c = f.pop(m)
        for lm, g in basis:
            if divides(lm, m):
                q = mono_div(m, lm)
                for e, gc in g.items():
                    if e == lm:
                        continue
                    ee = mono_mul(e, q)
                    v = (f.get(ee, 0) - c * gc) % p
                    if v:
                        f[ee] = v
                    else:
                        f.pop(ee, None)
                break
        else:
            rem[m] = c
            if not full:
                rem.update(f)
                return rem
    return rem


def _spoly(f, g, p):
    (lf, tf), (lg, tg) = f, g
    lcm = mono_lcm(lf, lg)
    qf, qg = mono_div(lcm, lf), mono_div(lcm, lg)
    out = {}
    for e, c in tf.items():
        out[mono_mul(e, qf)] = c
    for e, c in tg.items():
        ee = mono_mul(e, qg)
        v = (out.get(ee, 0) - c) % p
        if v:
            out[ee] = v
        else:
            out.pop(ee, None)
    return out


def _coprime(u, v):
    return all(a == 0 or b == 0 for a, b in zip(u, v))


def _interreduce(polys: list, key, p: int) -> list:
    """Reduced Groebner basis from a Groebner basis given as monic pairs."""
    polys = sorted(polys, key=lambda t: key(t[0]))
    minimal = []
    for i, (lm, g) in enumerate(polys):
        if any(divides(lm2, lm) and (lm2 != lm or j < i)
               for j, (lm2, _) in enumerate(polys) if j != i):
            continue
        minimal.append((lm, g))
    out = []
    for i, (lm, g) in enumerate(minimal):
        others = [t for j, t in enumerate(minimal) if j != i]
        tail = {e: c for e, c in g.items() if e != lm}
        tail = _reduce(tail, others, key, p)
        tail[lm] = 1
        out.append((lm, tail))
    out.sort(key=lambda t: key(t[0]), reverse=True)
    return out


def _buchberger_raw(gens: list, key, p: int) -> list:
    """Groebner basis (monic pairs, not reduced) via the normal strategy.

    Pairs are pruned with the Gebauer-Moeller criteria.
    """
    G = []       # all basis elements (lm, terms)
    active = []  # indices whose leading term is not divisible by a later one
    pairs = []   # (i, j, lcm)

    def add(h):
        nonlocal active, pairs
        G.append(h)
        k = len(G) - 1
        lh = h[0]
        cand = [(i, mono_lcm(G[i][0], lh)) for i in active]
        keep = []
        for idx, (i, lcm) in enumerate(cand):
            if _coprime(G[i][0], lh):
                keep.append((i, lcm, True))
                continue
            dominated = False
            for jdx, (j, lcm2) in enumerate(cand):
                if jdx == idx:
                    continue
                if divides(lcm2, lcm) and (lcm2 != lcm or jdx < idx):
                    dominated = True
                    break
            if not dominated:
                keep.append((i, lcm, False))
        new_pairs = [(i, k, lcm) for i, lcm, cop in keep if not cop]
        pruned = []
        for (i, j, lcm) in pairs:
            if (divides(lh, lcm) and mono_lcm(G[i][0], lh) != lcm
                    and mono_lcm(G[j][0], lh) != lcm):
                continue
            pruned.append((i, j, lcm))
        pairs = pruned + new_pairs
        active = [i for i in active if not divides(lh, G[i][0])] + [k]

    for f in gens:
        r = _reduce(f, [G[i] for i in active], key, p)
        if r:
            add(_monic(r, key, p))

    while pairs:
        best = min(range(len(pairs)),
                   key=lambda t: (sum(pairs[t][2]), key(pairs[t][2]), pairs[t][0], pairs[t][1]))
        i, j, _ = pairs.pop(best)
        s = _spoly(G[i], G[j], p)
        r = _reduce(s, [G[t] for t in active], key, p)
        if r:
            add(_monic(r, key, p))
    return [G[i] for i in active]


def _shape(polys):
    f = polys[0]
    return f.nx, f.ny, f.p


def buchberger(gens: Sequence[Polynomial], order: TermOrder = DEFAULT_ORDER) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return GroebnerBasis((), order, True)
    nx, ny, p = _shape(gens)
    raw = _buchberger_raw([g.terms for g in gens], order.key, p)
    red = _interreduce(raw, order.key, p)
    return GroebnerBasis(tuple(Polynomial._raw(t, nx, ny, p) for _, t in red), order, True)


def _pairs_of(gb_polys, order):
    return [(g.leading_monomial(order), g.monic(order).terms) for g in gb_polys]


def normal_form(f: Polynomial, gb: GroebnerBasis) -> Polynomial:
    if not gb.generators:
        return f
    basis = _pairs_of(gb.generators, gb.order)
    r = _reduce(f.terms, basis, gb.order.key, f.p)
    return Polynomial._raw(r, f.nx, f.ny, f.p)


def is_groebner_basis(gens: Sequence[Polynomial], order: TermOrder = DEFAULT_ORDER) -> bool:
    """Buchberger's criterion: every S-pair reduces to zero modulo ``gens``."""
    gens = [g for g in gens if not g.is_zero()]
    if len(gens) <= 1:
        return True
    p = gens[0].p
    basis = _pairs_of(gens, order)
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            s = _spoly(basis[i], basis[j], p)
            if _reduce(s, basis, order.key, p):
                return False
    return True


def initial_ideal(gb: GroebnerBasis) -> MonomialIdeal:
    if not gb.generators:
        return MonomialIdeal(frozenset(), 0)
    return MonomialIdeal.from_monomials(gb.leading_monomials(), gb.generators[0].nvars)


def eliminate(gb: GroebnerBasis, keep: Iterable[int]) -> list:
    """Elements of ``gb`` involving only the variables ``keep``."""
    keep = set(keep)
    if not gb.generators:
        return []
    nvars = gb.generators[0].nvars
    discard = set(range(nvars)) - keep
    if not gb.order.eliminates(discard, nvars):
        raise BadOrder(f"order {gb.order} does not eliminate variables {sorted(discard)}")
    return [g for g in gb.generators
            if all(e[i] == 0 for e in g.terms for i in discard)]


# Generic initial ideals

def random_coordinate_change(n: int, p: int, rng: np.random.Generator) -> list:
    """Invertible n x n matrix L * U * P over GF(p), L/U unit triangular, P a permutation."""
    lower = np.eye(n, dtype=np.int64)
    upper = np.eye(n, dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if i > j:
                lower[i, j] = rng.integers(0, p)
            elif i < j:
                upper[i, j] = rng.integers(0, p)
    perm = np.eye(n, dtype=np.int64)[rng.permutation(n)]
    g = (lower @ upper) % p
    g = (g @ perm) % p
    return [[int(v) for v in row] for row in g]


def apply_linear_change(f: Polynomial, matrix: Sequence[Sequence[int]]) -> Polynomial:
    """Substitute x_i -> sum_j matrix[i][j] x_j in the x-block of ``f``."""
    n = f.nx
    xs = [Polynomial.variable(j, f.nx, f.ny, f.p) for j in range(f.nvars)]
    images = []
    for i in range(n):
        img = Polynomial.zero(f.nx, f.ny, f.p)
        for j in range(n):
            if matrix[i][j]:
                img = img + xs[j] * matrix[i][j]
        images.append(img)
    images += xs[n:]
    return f.substitute(images)


def gin_trials(gens: Sequence[Polynomial], order: TermOrder = DEFAULT_ORDER,
               trials: int = 5, seed: int = 0) -> list:
    """Run ``trials`` random coordinate changes; returns (matrix, gb) per trial."""
    gens = [g for g in gens if not g.is_zero()]
    n, p = gens[0].nx, gens[0].p
    out = []
    for child in np.random.SeedSequence(seed).spawn(trials):
        g = random_coordinate_change(n, p, np.random.default_rng(child))
        moved = [apply_linear_change(f, g) for f in gens]
        out.append((g, buchberger(moved, order)))
    return out


def generic_initial_ideal(gens: Sequence[Polynomial], order: TermOrder = DEFAULT_ORDER,
                          trials: int = 5, seed: int = 0) -> MonomialIdeal:
    """Initial ideal after a generic change of the x-coordinates.

    All trials must agree; otherwise :class:`Unstable` is raised.
    """
    if trials < 2:
        raise ValueError("need at least two trials")
    results = [initial_ideal(gb) for _, gb in gin_trials(gens, order, trials, seed)]
    first = results[0]
    for k, other in enumerate(results[1:], start=1):
        if other != first:
            raise Unstable(f"trial 0 and trial {k} disagree (seed {seed})",
                           seed=seed, trials=trials)
    return first


def condition_star(quadrics: MonomialIdeal) -> bool:
    """Stability of a quadratic monomial ideal.

    For every generator x_i x_j (i <= j) and every k < j, x_i x_k must belong
    to the ideal.
    """
    gens = quadrics.minimal_generators
    for g in gens:
        if sum(g) != 2:
            raise NotQuadratic(f"generator {g} has degree {sum(g)}")
    for g in gens:
        idx = [v for v in range(len(g)) for _ in range(g[v])]
        i, j = idx
        for k in range(j):
            e = [0] * len(g)
            e[i] += 1
            e[k] += 1
            if tuple(e) not in quadrics:
                return False
    return True
