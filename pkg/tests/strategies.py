"""Hypothesis strategies and sympy bridges shared by the tests."""

from __future__ import annotations

from fractions import Fraction

import sympy
from hypothesis import strategies as st

from rlab.polyring import Poly, PolyRing


def monomials(n: int, maxdeg: int):
    return st.tuples(*[st.integers(0, maxdeg) for _ in range(n)]).filter(lambda e: sum(e) <= maxdeg)


def polys(ring: PolyRing, maxdeg: int = 3, max_terms: int = 4):
    p = ring.field.characteristic or 7
    return st.dictionaries(monomials(ring.nvars, maxdeg), st.integers(1, p - 1), max_size=max_terms).map(
        lambda d: Poly(ring, {m: ring.field.convert(c) for m, c in d.items()})
    )


def homogeneous_polys(ring: PolyRing, deg: int, max_terms: int = 3):
    p = ring.field.characteristic or 7
    mons = st.tuples(*[st.integers(0, deg) for _ in range(ring.nvars)]).filter(lambda e: sum(e) == deg)
    return st.dictionaries(mons, st.integers(1, p - 1), max_size=max_terms).map(
        lambda d: Poly(ring, {m: ring.field.convert(c) for m, c in d.items()})
    )


def to_sympy(f: Poly, symbols):
    dom = sympy.GF(f.ring.field.characteristic) if f.ring.field.characteristic else sympy.QQ
    return sympy.Poly.from_dict({m: c for m, c in f.terms.items()} or {(0,) * len(symbols): 0}, *symbols, domain=dom)


def from_sympy(g, ring: PolyRing) -> Poly:
    p = ring.field.characteristic
    terms = {}
    for m, c in g.as_dict().items():
        if p:
            v = int(c) % p
        else:
            q = sympy.Rational(c)
            v = Fraction(int(q.p), int(q.q))
        if v:
            terms[m] = v
    return Poly(ring, terms)
