"""Bigraded polynomials over a prime field.

Monomials are exponent tuples of length ``nx + ny``; the first ``nx`` entries
belong to the x-block (degree (1,0)) and the rest to the y-block (degree
(0,1)).  Polynomials are immutable maps from monomials to nonzero residues.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, NamedTuple, Sequence

import sympy

from .errors import (BadDegree, DimensionMismatch, NotBihomogeneous,
                     ZeroPolynomial)

DEFAULT_PRIME = 32003

Monomial = tuple


@dataclass(frozen=True)
class PrimeField:
    modulus: int = DEFAULT_PRIME

    def __post_init__(self):
        if self.modulus < 3 or not sympy.isprime(self.modulus):
            raise ValueError(f"modulus must be an odd prime, got {self.modulus}")

    def __call__(self, a: int) -> int:
        return a % self.modulus

    def inv(self, a: int) -> int:
        a %= self.modulus
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return pow(a, -1, self.modulus)

    def elements(self):
        return range(self.modulus)


class Bidegree(NamedTuple):
    p: int
    q: int

    @property
    def total(self) -> int:
        return self.p + self.q

    def __add__(self, other):  # componentwise, not tuple concatenation
        return Bidegree(self.p + other[0], self.q + other[1])

    def __sub__(self, other):
        return Bidegree(self.p - other[0], self.q - other[1])


class Ordering(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1


@lru_cache(maxsize=None)
def _revlex_key(exp: tuple) -> tuple:
    return (sum(exp),) + tuple(-e for e in reversed(exp))


@lru_cache(maxsize=None)
def _block_key(blocks: tuple, exp: tuple) -> tuple:
    out = ()
    start = 0
    for size in blocks:
        out += _revlex_key(exp[start:start + size])
        start += size
    return out


@dataclass(frozen=True)
class TermOrder:
    """Graded reverse lexicographic orders, optionally blocked.

    ``degrevlex`` is the graded revlex order with x1 > ... > xn > y1 > ... > ym
    (variables in index order).  ``block-revlex`` is the product of graded
    revlex orders on consecutive variable blocks of sizes ``blocks``; without
    blocks it coincides with ``degrevlex``.  The first block is compared
    first, so variables in leading blocks are eliminated.
    """

    kind: str = "block-revlex"
    blocks: tuple | None = None

    def __post_init__(self):
        if self.kind not in ("block-revlex", "degrevlex"):
            raise ValueError(f"unknown term order {self.kind!r}")
        if self.kind == "degrevlex" and self.blocks is not None:
            raise ValueError("degrevlex takes no blocks")
        if self.blocks is not None:
            object.__setattr__(self, "blocks", tuple(self.blocks))

    def key(self, exp: Monomial) -> tuple:
        """Sort key: larger key means larger monomial."""
        if self.blocks is None or len(self.blocks) == 1:
            return _revlex_key(exp)
        if sum(self.blocks) != len(exp):
            raise DimensionMismatch(f"blocks {self.blocks} do not cover {len(exp)} variables")
        return _block_key(self.blocks, exp)

    def eliminates(self, discard: Iterable[int], nvars: int) -> bool:
        """True if the variables ``discard`` are exactly a union of leading blocks."""
        discard = set(discard)
        if not discard:
            return True
        blocks = self.blocks or (nvars,)
        start = 0
        for size in blocks:
            start += size
            if discard == set(range(start)):
                return True
        return False


DEFAULT_ORDER = TermOrder()


def compare(order: TermOrder, u: Monomial, v: Monomial) -> Ordering:
    if len(u) != len(v):
        raise DimensionMismatch(f"monomials of length {len(u)} and {len(v)}")
    ku, kv = order.key(u), order.key(v)
    if ku == kv:
        return Ordering.EQ
    return Ordering.GT if ku > kv else Ordering.LT


def monomial_bidegree(exp: Monomial, nx: int) -> Bidegree:
    return Bidegree(sum(exp[:nx]), sum(exp[nx:]))


def divides(u: Monomial, v: Monomial) -> bool:
    return all(a <= b for a, b in zip(u, v))


def mono_mul(u: Monomial, v: Monomial) -> Monomial:
    return tuple(a + b for a, b in zip(u, v))


def mono_div(u: Monomial, v: Monomial) -> Monomial:
    return tuple(a - b for a, b in zip(u, v))


def mono_lcm(u: Monomial, v: Monomial) -> Monomial:
    return tuple(max(a, b) for a, b in zip(u, v))


def monomials_of_degree(nvars: int, d: int, offset: int = 0, width: int | None = None):
    """Exponent tuples of the given total degree in ``nvars`` variables.

    With ``width`` the tuples are embedded at position ``offset`` of a longer
    zero tuple.
    """
    width = nvars if width is None else width
    out = []
    for combo in combinations_with_replacement(range(nvars), d):
        e = [0] * width
        for i in combo:
            e[offset + i] += 1
        out.append(tuple(e))
    return out


def monomials_of_bidegree(nx: int, ny: int, p: int, q: int) -> list:
    if p < 0 or q < 0:
        return []
    if (nx == 0 and p > 0) or (ny == 0 and q > 0):
        return []
    xs = monomials_of_degree(nx, p)
    ys = monomials_of_degree(ny, q)
    return [a + b for a in xs for b in ys]


class Polynomial:
    """Immutable polynomial in ``nx`` x-variables and ``ny`` y-variables mod p."""

    __slots__ = ("terms", "nx", "ny", "p", "_hash")

    def __init__(self, terms: Mapping[Monomial, int], nx: int, ny: int = 0,
                 p: int = DEFAULT_PRIME):
        n = nx + ny
        clean = {}
        for exp, c in terms.items():
            exp = tuple(exp)
            if len(exp) != n:
                raise DimensionMismatch(f"monomial {exp} in a ring with {n} variables")
            c %= p
            if c:
                clean[exp] = c
        self.terms = clean
        self.nx = nx
        self.ny = ny
        self.p = p
        self._hash = None

    # construction helpers
    @classmethod
    def _raw(cls, terms, nx, ny, p):
        obj = cls.__new__(cls)
        obj.terms = terms
        obj.nx, obj.ny, obj.p = nx, ny, p
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, nx, ny=0, p=DEFAULT_PRIME):
        return cls._raw({}, nx, ny, p)

    @classmethod
    def constant(cls, c, nx, ny=0, p=DEFAULT_PRIME):
        return cls({(0,) * (nx + ny): c}, nx, ny, p)

    @classmethod
    def monomial(cls, exp, nx, ny=0, p=DEFAULT_PRIME, coeff=1):
        return cls({tuple(exp): coeff}, nx, ny, p)

    @classmethod
    def variable(cls, i, nx, ny=0, p=DEFAULT_PRIME):
        e = [0] * (nx + ny)
        e[i] = 1
        return cls._raw({tuple(e): 1}, nx, ny, p)

    @property
    def nvars(self) -> int:
        return self.nx + self.ny

    def _check(self, other):
        if (self.nx, self.ny, self.p) != (other.nx, other.ny, other.p):
            raise DimensionMismatch("polynomials live in different rings")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, int):
            return Polynomial.constant(other, self.nx, self.ny, self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self.terms)
        p = self.p
        for e, c in other.terms.items():
            v = (t.get(e, 0) + c) % p
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return Polynomial._raw(t, self.nx, self.ny, p)

    __radd__ = __add__

    def __neg__(self):
        p = self.p
        return Polynomial._raw({e: p - c for e, c in self.terms.items()}, self.nx, self.ny, p)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            c = other % self.p
            if c == 0:
                return Polynomial.zero(self.nx, self.ny, self.p)
            return Polynomial._raw({e: v * c % self.p for e, v in self.terms.items()},
                                   self.nx, self.ny, self.p)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        p = self.p
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = (t.get(e, 0) + c1 * c2) % p
        return Polynomial._raw({e: c for e, c in t.items() if c}, self.nx, self.ny, p)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial.constant(1, self.nx, self.ny, self.p)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = Polynomial.constant(other, self.nx, self.ny, self.p)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return ((self.nx, self.ny, self.p) == (other.nx, other.ny, other.p)
                and self.terms == other.terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nx, self.ny, self.p, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def monomials(self, order: TermOrder = DEFAULT_ORDER) -> list:
        """Monomials sorted decreasingly under ``order``."""
        return sorted(self.terms, key=order.key, reverse=True)

    def leading_monomial(self, order: TermOrder = DEFAULT_ORDER) -> Monomial:
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no leading term")
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order: TermOrder = DEFAULT_ORDER) -> int:
        return self.terms[self.leading_monomial(order)]

    def monic(self, order: TermOrder = DEFAULT_ORDER):
        return self * pow(self.leading_coefficient(order), -1, self.p)

    def total_degree(self) -> int:
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no degree")
        return max(sum(e) for e in self.terms)

    def bidegree(self) -> Bidegree:
        return bidegree_of(self)

    def is_bihomogeneous(self) -> bool:
        return len({monomial_bidegree(e, self.nx) for e in self.terms}) <= 1

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def substitute(self, images: Sequence["Polynomial"]):
        """Evaluate at ``images`` (one polynomial per variable)."""
        if len(images) != self.nvars:
            raise DimensionMismatch("need one image per variable")
        target = images[0]
        out = Polynomial.zero(target.nx, target.ny, target.p)
        powers = {}
        for e, c in self.terms.items():
            term = Polynomial.constant(c, target.nx, target.ny, target.p)
            for i, k in enumerate(e):
                if k:
                    if (i, k) not in powers:
                        powers[i, k] = images[i] ** k
                    term = term * powers[i, k]
            out = out + term
        return out

    def embed(self, nx: int, ny: int, positions: Sequence[int]):
        """Move variable ``i`` to index ``positions[i]`` of a ring with ``nx + ny`` variables."""
        n = nx + ny
        t = {}
        for e, c in self.terms.items():
            new = [0] * n
            for i, k in enumerate(e):
                if k:
                    new[positions[i]] += k
            t[tuple(new)] = c
        return Polynomial._raw(t, nx, ny, self.p)

    def format(self, names: Sequence[str] | None = None, order: TermOrder = DEFAULT_ORDER) -> str:
        if names is None:
            names = default_names(self.nx, self.ny)
        if not self.terms:
            return "0"
        half = (self.p - 1) // 2
        pieces = []
        for exp in self.monomials(order):
            c = self.terms[exp]
            sign = "+"
            if c > half:
                sign, c = "-", self.p - c
            factors = []
            for name, k in zip(names, exp):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            if c != 1 or not factors:
                factors.insert(0, str(c))
            pieces.append((sign, "*".join(factors)))
        text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"Polynomial({self.format()})"


def default_names(nx: int, ny: int) -> list:
    return [f"x{i + 1}" for i in range(nx)] + [f"y{j + 1}" for j in range(ny)]


def bidegree_of(f: Polynomial) -> Bidegree:
    if f.is_zero():
        raise ZeroPolynomial("zero polynomial has no bidegree")
    degs = {monomial_bidegree(e, f.nx) for e in f.terms}
    if len(degs) > 1:
        raise NotBihomogeneous(f"{f.format()} mixes bidegrees {sorted(degs)}")
    return degs.pop()


def polarize(f: Polynomial, k: int, ny: int | None = None) -> Polynomial:
    """Replace the last ``k`` sorted x-factors of every term by y-variables.

    ``f`` must have bidegree (d, 0).  The result lives in the ring with the
    same x-block and ``ny`` y-variables (default: as many as x-variables).
    """
    ny = f.nx if ny is None else ny
    if ny < f.nx:
        raise BadDegree("polarization needs at least as many y-variables as x-variables")
    if f.is_zero():
        return Polynomial.zero(f.nx, ny, f.p)
    try:
        d, q = bidegree_of(f)
    except Exception as exc:
        raise BadDegree(str(exc)) from exc
    if q != 0 or not 0 <= k <= d:
        raise BadDegree(f"cannot polarize a form of bidegree {(d, q)} with k={k}")
    n = f.nx
    out = {}
    for exp, c in f.terms.items():
        idx = [i for i in range(n) for _ in range(exp[i])]
        new = [0] * (n + ny)
        for i in idx[:d - k]:
            new[i] += 1
        for i in idx[d - k:]:
            new[n + i] += 1
        key = tuple(new)
        out[key] = (out.get(key, 0) + c) % f.p
    return Polynomial(out, n, ny, f.p)


def collapse_y(f: Polynomial) -> Polynomial:
    """The map y_i -> x_i from K[x, y] to itself (requires ny <= nx)."""
    n = f.nx
    if f.ny > n:
        raise DimensionMismatch("collapse needs ny <= nx")
    out = {}
    for exp, c in f.terms.items():
        new = list(exp[:n])
        for j, k in enumerate(exp[n:]):
            new[j] += k
        key = tuple(new) + (0,) * f.ny
        out[key] = (out.get(key, 0) + c) % f.p
    return Polynomial(out, n, f.ny, f.p)


@dataclass(frozen=True)
class RingPresentation:
    """R = K[x_1..x_n, y_1..y_m] / (relations), relations bihomogeneous.

    ``weights`` optionally fixes a grading finer than the bigrading (one
    integer tuple per variable, starting with the bidegree); it is used by the
    linear-algebra layer to split graded components.
    """

    n: int
    m: int = 0
    field: PrimeField = dc_field(default_factory=PrimeField)
    relations: tuple = ()
    names: tuple | None = None
    weights: tuple | None = dc_field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "relations", tuple(self.relations))
        if self.names is not None:
            object.__setattr__(self, "names", tuple(self.names))
            if len(self.names) != self.n + self.m:
                raise DimensionMismatch("one name per variable required")
        for f in self.relations:
            if (f.nx, f.ny, f.p) != (self.n, self.m, self.field.modulus):
                raise DimensionMismatch(f"relation {f!r} is not in this ring")
            if f.is_zero():
                raise ZeroPolynomial("zero relation")
            bidegree_of(f)
            if sum(next(iter(f.terms))) == 0:
                raise BadDegree("relations may not contain units")

    @property
    def p(self) -> int:
        return self.field.modulus

    @property
    def nvars(self) -> int:
        return self.n + self.m

    def variable_names(self) -> list:
        return list(self.names) if self.names else default_names(self.n, self.m)

    def variables(self) -> list:
        return [Polynomial.variable(i, self.n, self.m, self.p) for i in range(self.nvars)]

    def var_bidegree(self, i: int) -> Bidegree:
        return Bidegree(1, 0) if i < self.n else Bidegree(0, 1)

    def poly(self, terms) -> Polynomial:
        return Polynomial(terms, self.n, self.m, self.p)

    def zero(self) -> Polynomial:
        return Polynomial.zero(self.n, self.m, self.p)

    def one(self) -> Polynomial:
        return Polynomial.constant(1, self.n, self.m, self.p)

    def with_relations(self, relations) -> "RingPresentation":
        return RingPresentation(self.n, self.m, self.field, tuple(relations), self.names)

    def is_standard_graded(self) -> bool:
        return self.m == 0
