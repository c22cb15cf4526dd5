"""Line-based text formats for rings and semigroups.

Ring files::

    field 32003
    xvars x1 x2
    yvars y1
    ideal
    x1*y1^2
    end

An optional ``gens ... end`` block lists module or ideal generators in the
same polynomial syntax.  Semigroup files use ``ambient d``, ``xgens (v..)..``
and ``ygens (v..)..``.  Lines starting with ``#`` are comments.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .bipoly import (DEFAULT_PRIME, Polynomial, PrimeField, RingPresentation,
                     default_names)
from .errors import NotBihomogeneous, ParseError
from .semigroup import AffineSemigroup

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*^()]))")


class _PolyParser:
    def __init__(self, text, names, nx, ny, p, line):
        self.text = text
        self.index = {n: i for i, n in enumerate(names)}
        self.nx, self.ny, self.p = nx, ny, p
        self.line = line
        self.tokens = self._lex()
        self.pos = 0

    def _lex(self):
        out = []
        i = 0
        s = self.text
        while i < len(s):
            if s[i].isspace():
                i += 1
                continue
            m = _TOKEN.match(s, i)
            if not m or m.end() == i:
                raise ParseError(f"unexpected character {s[i]!r}", self.line, i + 1)
            num, name, op = m.groups()
            col = m.start() + (len(m.group(0)) - len(m.group(0).lstrip())) + 1
            if num is not None:
                out.append(("num", int(num), col))
            elif name is not None:
                if name not in self.index:
                    raise ParseError(f"unknown variable {name!r}", self.line, col)
                out.append(("var", self.index[name], col))
            else:
                out.append(("op", "^" if op == "**" else op, col))
            i = m.end()
        return out

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def fail(self, msg):
        tok = self.peek()
        col = tok[2] if tok else len(self.text) + 1
        raise ParseError(msg, self.line, col)

    def parse(self) -> Polynomial:
        if not self.tokens:
            self.fail("empty polynomial")
        f = self.expr()
        if self.peek() is not None:
            self.fail(f"unexpected token {self.peek()[1]!r}")
        return f

    def expr(self):
        sign = 1
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        f = self.term() * sign
        while True:
            tok = self.peek()
            if not (tok and tok[0] == "op" and tok[1] in "+-"):
                return f
            self.take()
            g = self.term()
            f = f + g if tok[1] == "+" else f - g

    def term(self):
        f = self.power()
        while True:
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] == "*":
                self.take()
                f = f * self.power()
            elif tok and (tok[0] in ("num", "var") or tok[1] == "("):
                f = f * self.power()      # implicit product, e.g. 2x1
            else:
                return f

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == "^":
            self.take()
            e = self.take()
            if e is None or e[0] != "num":
                self.fail("exponent must be a non-negative integer")
            return base ** e[1]
        return base

    def atom(self):
        tok = self.take()
        if tok is None:
            self.fail("unexpected end of polynomial")
        kind, val, col = tok
        if kind == "num":
            return Polynomial.constant(val, self.nx, self.ny, self.p)
        if kind == "var":
            return Polynomial.variable(val, self.nx, self.ny, self.p)
        if val == "(":
            f = self.expr()
            close = self.take()
            if close is None or close[1] != ")":
                raise ParseError("missing ')'", self.line, col)
            return f
        if val == "-":
            return -self.atom()
        raise ParseError(f"unexpected token {val!r}", self.line, col)


def parse_polynomial(text: str, ring: RingPresentation, line: int | None = None) -> Polynomial:
    return _PolyParser(text, ring.variable_names(), ring.n, ring.m, ring.p, line).parse()


@dataclass
class RingFile:
    ring: RingPresentation
    gens: list                      # polynomials of an optional gens block


def _blocks(text: str):
    """Yield (line number, keyword, rest) with block bodies as lists of (line, text)."""
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        raw = lines[i].split("#", 1)[0].strip()
        lineno = i + 1
        i += 1
        if not raw:
            continue
        key, _, rest = raw.partition(" ")
        rest = rest.strip()
        if key in ("ideal", "gens"):
            body = []
            done = False
            if rest:
                if rest == "end" or rest.endswith(" end"):
                    rest = rest[:-3].strip()
                    done = True
                body.extend((lineno, piece) for piece in rest.split(",") if piece.strip())
            while not done:
                if i >= len(lines):
                    raise ParseError(f"'{key}' block is not closed by 'end'", lineno)
                inner = lines[i].split("#", 1)[0].strip()
                i += 1
                if inner == "end":
                    break
                if inner.endswith(" end"):
                    inner = inner[:-4].strip()
                    done = True
                if inner:
                    body.extend((i, piece) for piece in inner.split(",") if piece.strip())
            yield lineno, key, body
        else:
            yield lineno, key, rest


def parse_ring_file(text: str) -> RingFile:
    p = DEFAULT_PRIME
    xvars, yvars = None, []
    ideal, gens = [], []
    for lineno, key, rest in _blocks(text):
        if key == "field":
            try:
                p = int(rest)
                PrimeField(p)
            except ValueError as exc:
                raise ParseError(f"bad field characteristic {rest!r}", lineno) from exc
        elif key == "xvars":
            xvars = rest.split()
        elif key == "yvars":
            yvars = rest.split()
        elif key == "ideal":
            ideal = rest
        elif key == "gens":
            gens = rest
        else:
            raise ParseError(f"unknown keyword {key!r}", lineno, 1)
    if xvars is None:
        raise ParseError("missing 'xvars' line")
    names = xvars + yvars
    if len(set(names)) != len(names):
        raise ParseError("variable names must be distinct")
    n, m = len(xvars), len(yvars)
    stored = None if names == default_names(n, m) else tuple(names)
    base = RingPresentation(n, m, PrimeField(p), (), stored)
    rels = []
    for lineno, text_ in ideal:
        f = parse_polynomial(text_, base, lineno)
        if f.is_zero():
            continue
        if not f.is_bihomogeneous():
            raise NotBihomogeneous(f"relation {text_.strip()!r} on line {lineno} is not bihomogeneous",
                                   line=lineno)
        rels.append(f)
    ring = RingPresentation(n, m, PrimeField(p), tuple(rels), stored)
    polys = [parse_polynomial(t, base, ln) for ln, t in gens]
    return RingFile(ring, polys)


def parse_ring(text: str) -> RingPresentation:
    return parse_ring_file(text).ring


def serialize_ring(R: RingPresentation, gens=()) -> str:
    names = R.variable_names()
    out = [f"field {R.p}", "xvars " + " ".join(names[:R.n])]
    if R.m:
        out.append("yvars " + " ".join(names[R.n:]))
    out.append("ideal")
    out.extend(f.format(names) for f in R.relations)
    out.append("end")
    if gens:
        out.append("gens")
        out.extend(f.format(names) for f in gens)
        out.append("end")
    return "\n".join(out) + "\n"


serialize = serialize_ring

_VEC = re.compile(r"\(([^()]*)\)")


def _vectors(rest: str, lineno: int) -> list:
    found = _VEC.findall(rest)
    leftover = _VEC.sub("", rest).strip()
    if leftover:
        raise ParseError(f"expected vectors like (1,2), got {leftover!r}", lineno)
    out = []
    for body in found:
        parts = [t for t in re.split(r"[\s,]+", body.strip()) if t]
        try:
            out.append(tuple(int(t) for t in parts))
        except ValueError as exc:
            raise ParseError(f"bad vector ({body})", lineno) from exc
    return out


def parse_semigroup(text: str) -> AffineSemigroup:
    d = None
    xs, ys = [], []
    for lineno, key, rest in _blocks(text):
        if key == "ambient":
            try:
                d = int(rest)
            except ValueError as exc:
                raise ParseError(f"bad ambient dimension {rest!r}", lineno) from exc
        elif key == "xgens":
            xs.extend(_vectors(rest, lineno))
        elif key == "ygens":
            ys.extend(_vectors(rest, lineno))
        else:
            raise ParseError(f"unknown keyword {key!r}", lineno, 1)
    if d is None:
        raise ParseError("missing 'ambient' line")
    try:
        return AffineSemigroup(d, tuple(xs), tuple(ys))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def serialize_semigroup(L: AffineSemigroup) -> str:
    fmt = lambda vs: " ".join("(" + ",".join(map(str, v)) + ")" for v in vs)
    out = [f"ambient {L.ambient_dim}", "xgens " + fmt(L.x_generators)]
    if L.y_generators:
        out.append("ygens " + fmt(L.y_generators))
    return "\n".join(out) + "\n"
