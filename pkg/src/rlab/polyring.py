"""Multivariate polynomials, monomial orders and quotient rings P/I.

Monomials are exponent tuples. A :class:`Poly` owns a ``dict`` from
monomial to raw coefficient (see :mod:`rlab.coeff`); zero coefficients are
never stored, so dictionary equality is canonical equality.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .coeff import FieldSpec
from .lexer import ParseError, TokenStream, tokenize

__all__ = [
    "MonomialOrder",
    "PolyRing",
    "Poly",
    "QuotientRing",
    "RingMismatch",
    "UnitIdeal",
    "poly_arithmetic",
    "normal_form",
    "quotient_reduce",
    "mono_mul",
    "mono_div",
    "mono_divides",
    "mono_lcm",
]


class RingMismatch(ValueError):
    pass


class UnitIdeal(ValueError):
    pass


def mono_mul(a, b):
    return tuple([x + y for x, y in zip(a, b)])


def mono_div(a, b):
    return tuple([x - y for x, y in zip(a, b)])


def mono_divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def mono_lcm(a, b):
    return tuple([x if x > y else y for x, y in zip(a, b)])


def _revneg(e):
    return tuple([-x for x in reversed(e)])


class MonomialOrder:
    """``grevlex``, ``lex`` or ``block`` (grevlex on the first ``elim_count``
    variables, then grevlex on the rest)."""

    def __init__(self, kind: str = "grevlex", elim_count: int = 0):
        if kind not in ("grevlex", "lex", "block"):
            raise ValueError(f"unknown monomial order {kind!r}")
        if kind == "block" and elim_count <= 0:
            raise ValueError("block order needs elim_count > 0")
        self.kind = kind
        self.elim_count = elim_count if kind == "block" else 0
        if kind == "grevlex":
            key = lambda e: (sum(e), _revneg(e))
        elif kind == "lex":
            key = lambda e: e
        else:
            k = elim_count
            key = lambda e: (sum(e[:k]), _revneg(e[:k]), sum(e[k:]), _revneg(e[k:]))
        self.key = lru_cache(maxsize=1 << 18)(key)

    @property
    def degree_compatible(self) -> bool:
        return self.kind == "grevlex"

    def __eq__(self, other):
        return (
            isinstance(other, MonomialOrder)
            and self.kind == other.kind
            and self.elim_count == other.elim_count
        )

    def __hash__(self):
        return hash((self.kind, self.elim_count))

    def __repr__(self):
        if self.kind == "block":
            return f"MonomialOrder('block', {self.elim_count})"
        return f"MonomialOrder({self.kind!r})"


_ORDER_CACHE: dict = {}


def _order(kind, elim_count=0) -> MonomialOrder:
    k = (kind, elim_count)
    if k not in _ORDER_CACHE:
        _ORDER_CACHE[k] = MonomialOrder(kind, elim_count)
    return _ORDER_CACHE[k]


class PolyRing:
    """The ambient polynomial ring ``field[variables]`` with a monomial order."""

    def __init__(self, field: FieldSpec, variables, order="grevlex"):
        self.field = field
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        if isinstance(order, str):
            order = _order(order)
        self.order = order
        self.nvars = len(self.variables)
        self._index = {v: i for i, v in enumerate(self.variables)}
        self.zero_mono = (0,) * self.nvars

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.field == other.field
            and self.variables == other.variables
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.field, self.variables, self.order))

    def __repr__(self):
        return f"PolyRing({self.field}, {list(self.variables)}, {self.order!r})"

    def with_order(self, order) -> "PolyRing":
        return PolyRing(self.field, self.variables, order)

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return Poly(self, {self.zero_mono: self.field.one()})

    def const(self, c) -> "Poly":
        c = self.field.convert(c)
        return Poly(self, {self.zero_mono: c} if c else {})

    def gen(self, i) -> "Poly":
        if isinstance(i, str):
            i = self._index[i]
        e = [0] * self.nvars
        e[i] = 1
        return Poly(self, {tuple(e): self.field.one()})

    def gens(self) -> list["Poly"]:
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, exps, coeff=1) -> "Poly":
        c = self.field.convert(coeff)
        return Poly(self, {tuple(exps): c} if c else {})

    def index(self, name: str) -> int:
        return self._index[name]

    def parse(self, text: str) -> "Poly":
        stream = TokenStream(tokenize(text))
        f = parse_poly_expr(stream, self)
        if stream.peek().kind != "EOF":
            raise stream.error("end of expression")
        return f


class Poly:
    """An element of a :class:`PolyRing`. Treat as immutable."""

    __slots__ = ("ring", "terms", "_lead")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._lead = None

    # structure

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def lead_mono(self):
        if self._lead is None:
            if not self.terms:
                raise ValueError("zero polynomial has no leading term")
            self._lead = max(self.terms, key=self.ring.order.key)
        return self._lead

    def lead_coeff(self):
        return self.terms[self.lead_mono()]

    def sorted_terms(self) -> list:
        """(coeff, monomial) pairs sorted strictly descending."""
        key = self.ring.order.key
        return [(self.terms[m], m) for m in sorted(self.terms, key=key, reverse=True)]

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def low_degree(self) -> int:
        return min((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def constant_term(self):
        return self.terms.get(self.ring.zero_mono, self.ring.field.zero())

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        F = self.ring.field
        inv = F.inv(self.lead_coeff())
        return Poly(self.ring, {m: F.normalize(c * inv) for m, c in self.terms.items()})

    def change_ring(self, ring: PolyRing, var_map=None) -> "Poly":
        """Reinterpret in ``ring``; ``var_map[i]`` is the target index of variable i."""
        if var_map is None:
            if ring.nvars != self.ring.nvars:
                raise RingMismatch("variable count differs; give var_map")
            return Poly(ring, dict(self.terms))
        out = {}
        for m, c in self.terms.items():
            e = [0] * ring.nvars
            for i, x in enumerate(m):
                if x:
                    e[var_map[i]] += x
            out[tuple(e)] = c
        return Poly(ring, out)

    def evaluate(self, point) -> object:
        """Evaluate at a tuple of raw field values."""
        F = self.ring.field
        total = F.zero()
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v = v * x**e
            total += v
        return F.normalize(total)

    # arithmetic

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.ring.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = F.normalize(out.get(m, 0) + c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.ring.field
        return Poly(self.ring, {m: F.normalize(-c) for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.ring.field
        p = F.characteristic
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        if p:
            out = {m: c % p for m, c in out.items() if c % p}
        else:
            out = {m: c for m, c in out.items() if c}
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "Poly":
        F = self.ring.field
        c = F.convert(c)
        if not c:
            return self.ring.zero()
        return Poly(self.ring, {m: F.normalize(v * c) for m, v in self.terms.items()})

    def mul_term(self, c, mono) -> "Poly":
        F = self.ring.field
        return Poly(
            self.ring,
            {mono_mul(m, mono): F.normalize(v * c) for m, v in self.terms.items()},
        )

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        return format_poly(self)


def _format_coeff(c) -> str:
    return str(c)


def format_poly(f: Poly) -> str:
    if not f.terms:
        return "0"
    names = f.ring.variables
    p = f.ring.field.characteristic
    parts = []
    for c, m in f.sorted_terms():
        # print F_p residues symmetrically so -1 reads as -1, not p-1
        if p and c > p // 2:
            c = c - p
        neg = c < 0
        a = -c if neg else c
        factors = []
        for name, e in zip(names, m):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mono = "*".join(factors)
        if not mono:
            body = _format_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_coeff(a)}*{mono}"
        parts.append(("-" if neg else "+", body))
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def parse_poly_expr(stream: TokenStream, ring: PolyRing) -> Poly:
    """expr := ['-'] term (('+'|'-') term)*"""
    if stream.accept("-"):
        f = -_parse_term(stream, ring)
    else:
        stream.accept("+")
        f = _parse_term(stream, ring)
    while True:
        if stream.accept("+"):
            f = f + _parse_term(stream, ring)
        elif stream.accept("-"):
            f = f - _parse_term(stream, ring)
        else:
            return f


def _parse_term(stream, ring):
    f = _parse_power(stream, ring)
    while True:
        if stream.accept("*"):
            f = f * _parse_power(stream, ring)
        elif stream.at("/"):
            tok = stream.next()
            g = _parse_power(stream, ring)
            if not g.terms or set(g.terms) != {ring.zero_mono}:
                raise ParseError(tok.line, tok.col, "a nonzero constant divisor")
            f = f.scale(ring.field.inv(g.terms[ring.zero_mono]))
        else:
            return f


def _parse_power(stream, ring):
    if stream.accept("-"):
        return -_parse_power(stream, ring)
    f = _parse_atom(stream, ring)
    if stream.accept("^"):
        tok = stream.expect_kind("INT", "an exponent")
        f = f ** int(tok.text)
    return f


def _parse_atom(stream, ring):
    tok = stream.peek()
    if tok.kind == "INT":
        stream.next()
        return ring.const(int(tok.text))
    if tok.kind == "NAME":
        if tok.text not in ring._index:
            raise ParseError(tok.line, tok.col, "a ring variable", tok.text)
        stream.next()
        return ring.gen(tok.text)
    if stream.accept("("):
        f = parse_poly_expr(stream, ring)
        stream.expect(")")
        return f
    raise stream.error("a polynomial")


def poly_arithmetic(f: Poly, g: Poly, op: str) -> Poly:
    if f.ring != g.ring:
        raise RingMismatch(f"{f.ring} vs {g.ring}")
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown op {op!r}")


class Reducer:
    """Divisor table for fast division by a list of polynomials."""

    def __init__(self, polys, key, field: FieldSpec):
        self.key = key
        self.field = field
        self.entries = []
        self.monomial_only = True
        for g in polys:
            if not g.terms:
                continue
            lm = max(g.terms, key=key)
            inv = field.inv(g.terms[lm])
            tail = [(m, c) for m, c in g.terms.items() if m != lm]
            if tail:
                self.monomial_only = False
            self.entries.append((lm, inv, tail))

    def find(self, m):
        for ent in self.entries:
            lm = ent[0]
            for x, y in zip(lm, m):
                if x > y:
                    break
            else:
                return ent
        return None

    def divisible(self, m) -> bool:
        return self.find(m) is not None

    def reduce(self, terms: dict) -> dict:
        """Full normal form of a coefficient dict (not mutated)."""
        if not self.entries:
            return dict(terms)
        if self.monomial_only:
            return {m: c for m, c in terms.items() if self.find(m) is None}
        p = self.field.characteristic
        key = self.key
        work = dict(terms)
        rem = {}
        while work:
            m = max(work, key=key)
            c = work.pop(m)
            ent = self.find(m)
            if ent is None:
                rem[m] = c
                continue
            lm, inv, tail = ent
            q = tuple([x - y for x, y in zip(m, lm)])
            coef = c * inv
            for tm, tc in tail:
                t = tuple([x + y for x, y in zip(tm, q)])
                v = work.get(t, 0) - coef * tc
                if p:
                    v %= p
                if v:
                    work[t] = v
                else:
                    work.pop(t, None)
        return rem


def normal_form(f: Poly, G, order=None) -> Poly:
    """Remainder of ``f`` on division by ``G``: no term of the result is
    divisible by a leading term of ``G``."""
    ring = f.ring
    if order is not None and order != ring.order:
        ring = ring.with_order(order)
        f = f.change_ring(ring)
        G = [g.change_ring(ring) for g in G]
    red = Reducer(G, ring.order.key, ring.field)
    return Poly(ring, red.reduce(f.terms))


class QuotientRing:
    """R = P/I, elements represented by normal forms modulo a reduced
    Groebner basis of I. The maximal ideal is generated by all variables."""

    def __init__(self, ambient: PolyRing, ideal_gens=(), name: str = "R"):
        from .groebner import buchberger

        self.ambient = ambient
        self.name = name
        gens = [g for g in ideal_gens if g.terms]
        for g in gens:
            if g.ring != ambient:
                raise RingMismatch("ideal generator from another ring")
        self.ideal_gens = tuple(gens)
        gb = buchberger(gens, ambient.order) if gens else []
        if any(set(g.terms) == {ambient.zero_mono} for g in gb):
            raise UnitIdeal("defining ideal is the unit ideal")
        self.ideal_gb = tuple(gb)
        self.reducer = Reducer(gb, ambient.order.key, ambient.field)
        self.is_monomial = all(len(g.terms) == 1 for g in gb)
        self.is_homogeneous = all(g.is_homogeneous() for g in gb)

    # delegated structure
    @property
    def field(self) -> FieldSpec:
        return self.ambient.field

    @property
    def variables(self):
        return self.ambient.variables

    @property
    def order(self) -> MonomialOrder:
        return self.ambient.order

    @property
    def nvars(self) -> int:
        return self.ambient.nvars

    @property
    def maximal_ideal(self) -> list[Poly]:
        return self.ambient.gens()

    def __eq__(self, other):
        return (
            isinstance(other, QuotientRing)
            and self.ambient == other.ambient
            and self.ideal_gb == other.ideal_gb
        )

    def __hash__(self):
        return hash((self.ambient, self.ideal_gb))

    def __repr__(self):
        ideal = ", ".join(str(g) for g in self.ideal_gb) or "0"
        return f"{self.field}[{', '.join(self.variables)}]/({ideal})"

    def reduce_terms(self, terms: dict) -> dict:
        return self.reducer.reduce(terms)

    def reduce(self, f: Poly) -> Poly:
        if f.ring != self.ambient:
            raise RingMismatch(f"{f.ring} vs {self.ambient}")
        return Poly(self.ambient, self.reducer.reduce(f.terms))

    def __call__(self, f) -> Poly:
        if isinstance(f, str):
            f = self.ambient.parse(f)
        elif isinstance(f, (int, Fraction)):
            f = self.ambient.const(f)
        return self.reduce(f)

    def zero(self) -> Poly:
        return self.ambient.zero()

    def one(self) -> Poly:
        return self.ambient.one()

    def gens(self) -> list[Poly]:
        return [self.reduce(g) for g in self.ambient.gens()]

    def is_standard(self, mono) -> bool:
        return self.reducer.find(mono) is None

    def standard_monomials(self, degree: int) -> list:
        """Monomials of the given degree outside the initial ideal."""
        return [m for m in monomials_of_degree(self.nvars, degree) if self.is_standard(m)]


@lru_cache(maxsize=None)
def monomials_of_degree(n: int, d: int) -> tuple:
    if n == 0:
        return ((),) if d == 0 else ()
    if n == 1:
        return ((d,),)
    out = []
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(n - 1, d - first):
            out.append((first,) + rest)
    return tuple(out)


def quotient_reduce(f: Poly, R: QuotientRing) -> Poly:
    return R.reduce(f)
