"""Buchberger's algorithm for ideals and submodules of free modules over
R = P/I, plus the ideal-level operations built on it.

Module elements are ``dict``s mapping ``(component, monomial)`` to a raw
coefficient. A submodule of R^n is handled by lifting to P^n: the
generators of I times every basis vector are added as implicit generators
("ring reducers"), so no separate quotient-ring Groebner theory is needed.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from itertools import combinations

from .polyring import (
    MonomialOrder,
    Poly,
    PolyRing,
    QuotientRing,
    UnitIdeal,
    _revneg,
)

__all__ = [
    "ModuleOrder",
    "ModuleGB",
    "module_gb",
    "buchberger",
    "kernel",
    "syzygies",
    "Ideal",
    "PrimeSpec",
    "NotProper",
    "ideal_membership",
    "ideal_ops",
    "annihilator",
    "krull_dim",
    "monomial_dim",
    "height",
    "HeightInfo",
]


class NotProper(ValueError):
    pass


class ModuleOrder:
    """Term order on ``(component, monomial)`` pairs.

    ``blocks[c]`` ranks components first (a larger block dominates, which is
    what makes kernel elimination work); ``shifts[c]`` is the degree of
    basis vector c, entering the degree of a term for degree-compatible
    monomial orders. Ties are broken by position.
    """

    def __init__(self, mono_order: MonomialOrder, rank: int, shifts=None, blocks=None):
        self.mono_order = mono_order
        self.rank = rank
        self.shifts = tuple(shifts) if shifts is not None else (0,) * rank
        self.blocks = tuple(blocks) if blocks is not None else (0,) * rank
        self._cache: dict = {}
        kind = mono_order.kind
        sh, bl = self.shifts, self.blocks
        if kind == "grevlex":

            def raw(t):
                c, m = t
                return (bl[c], sum(m) + sh[c], _revneg(m), -c)

        else:
            mk = mono_order.key

            def raw(t):
                c, m = t
                return (bl[c], mk(m), -c)

        self._raw = raw

    def key(self, t):
        k = self._cache.get(t)
        if k is None:
            k = self._raw(t)
            self._cache[t] = k
        return k


@dataclass
class _Elem:
    lead: tuple  # (component, monomial)
    inv: object  # inverse of the leading coefficient
    terms: dict
    tail: list = field(default_factory=list)


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


class ModuleGB:
    """A Groebner basis of a submodule of R^rank (lifted to P^rank)."""

    def __init__(self, ambient: PolyRing, rank: int, order: ModuleOrder, ring_gb=()):
        self.ambient = ambient
        self.rank = rank
        self.order = order
        self.field = ambient.field
        self.p = ambient.field.characteristic
        self.ring_entries = []
        mk = ambient.order.key
        for g in ring_gb:
            lm = max(g.terms, key=mk)
            inv = self.field.inv(g.terms[lm])
            tail = [(m, c) for m, c in g.terms.items() if m != lm]
            self.ring_entries.append((lm, inv, tail))
        self.elems: list[_Elem] = []
        self.by_comp: dict[int, list[int]] = {}

    # reduction

    def _find(self, comp, m):
        for idx in self.by_comp.get(comp, ()):
            e = self.elems[idx]
            if e is not None and _divides(e.lead[1], m):
                return e, None
        for ent in self.ring_entries:
            if _divides(ent[0], m):
                return None, ent
        return None, None

    def reduce(self, terms: dict, full: bool = True) -> dict:
        """Normal form of a vector; with ``full=False`` only the leading
        term is reduced until it is irreducible."""
        p = self.p
        key = self.order.key
        work = dict(terms)
        rem = {}
        while work:
            t = max(work, key=key)
            c = work.pop(t)
            comp, m = t
            e, ent = self._find(comp, m)
            if e is not None:
                lm = e.lead[1]
                q = tuple([x - y for x, y in zip(m, lm)])
                coef = c * e.inv
                for (tc, tm), tv in e.tail:
                    nt = (tc, tuple([x + y for x, y in zip(tm, q)]))
                    v = work.get(nt, 0) - coef * tv
                    if p:
                        v %= p
                    if v:
                        work[nt] = v
                    else:
                        work.pop(nt, None)
            elif ent is not None:
                lm, inv, tail = ent
                q = tuple([x - y for x, y in zip(m, lm)])
                coef = c * inv
                for tm, tv in tail:
                    nt = (comp, tuple([x + y for x, y in zip(tm, q)]))
                    v = work.get(nt, 0) - coef * tv
                    if p:
                        v %= p
                    if v:
                        work[nt] = v
                    else:
                        work.pop(nt, None)
            else:
                rem[t] = c
                if not full:
                    rem.update(work)
                    return rem
        return rem

    def contains(self, terms: dict) -> bool:
        return not self.reduce(terms, full=False)

    def _make_elem(self, terms: dict) -> _Elem:
        key = self.order.key
        lead = max(terms, key=key)
        inv = self.field.inv(terms[lead])
        if inv != 1:
            p = self.p
            terms = {t: (v * inv) % p if p else v * inv for t, v in terms.items()}
            inv = self.field.one()
        tail = [(t, v) for t, v in terms.items() if t != lead]
        return _Elem(lead, inv, terms, tail)

    def _add(self, terms: dict) -> int:
        e = self._make_elem(terms)
        idx = len(self.elems)
        self.elems.append(e)
        self.by_comp.setdefault(e.lead[0], []).append(idx)
        return idx

    # Buchberger

    def _spoly(self, i, j):
        a, b = self.elems[i], self.elems[j]
        comp = a.lead[0]
        L = tuple([x if x > y else y for x, y in zip(a.lead[1], b.lead[1])])
        return self._combine(a.terms, a.lead[1], L, comp, b.terms, b.lead[1])

    def _combine(self, ta, la, L, comp, tb, lb):
        p = self.p
        qa = tuple([x - y for x, y in zip(L, la)])
        qb = tuple([x - y for x, y in zip(L, lb)])
        out = {}
        for (c, m), v in ta.items():
            out[(c, tuple([x + y for x, y in zip(m, qa)]))] = v
        for (c, m), v in tb.items():
            t = (c, tuple([x + y for x, y in zip(m, qb)]))
            w = out.get(t, 0) - v
            if p:
                w %= p
            if w:
                out[t] = w
            else:
                out.pop(t, None)
        return out

    def _ring_spoly(self, i, r):
        a = self.elems[i]
        comp, la = a.lead
        lm, inv, tail = self.ring_entries[r]
        ring_terms = {(comp, lm): self.field.one()}
        for m, v in tail:
            ring_terms[(comp, m)] = (v * inv) % self.p if self.p else v * inv
        L = tuple([x if x > y else y for x, y in zip(la, lm)])
        return self._combine(a.terms, la, L, comp, ring_terms, lm)

    def run(self, gens):
        key = self.order.key
        heap = []
        pending = set()
        counter = 0
        rank1 = self.rank == 1

        def push_pairs(new):
            nonlocal counter
            e = self.elems[new]
            comp, lm = e.lead
            for old in self.by_comp.get(comp, ()):
                if old == new or self.elems[old] is None:
                    continue
                om = self.elems[old].lead[1]
                L = tuple([x if x > y else y for x, y in zip(lm, om)])
                if rank1 and all(x == 0 or y == 0 for x, y in zip(lm, om)):
                    continue
                pair = (min(old, new), max(old, new))
                pending.add(pair)
                heapq.heappush(heap, (key((comp, L)), counter, pair))
                counter += 1
            for r, ent in enumerate(self.ring_entries):
                rm = ent[0]
                if all(x == 0 or y == 0 for x, y in zip(lm, rm)):
                    continue
                L = tuple([x if x > y else y for x, y in zip(lm, rm)])
                pair = (new, -1 - r)
                pending.add(pair)
                heapq.heappush(heap, (key((comp, L)), counter, pair))
                counter += 1

        # seed: reduce generators in increasing order
        order_gens = sorted(
            (g for g in gens if g), key=lambda g: key(max(g, key=key))
        )
        for g in order_gens:
            h = self.reduce(g)
            if h:
                idx = self._add(h)
                push_pairs(idx)

        while heap:
            _, _, pair = heapq.heappop(heap)
            if pair not in pending:
                continue
            pending.discard(pair)
            i, j = pair
            if self.elems[i] is None:
                continue
            if j >= 0:
                if self.elems[j] is None:
                    continue
                if self._chain_skip(i, j, pending):
                    continue
                s = self._spoly(i, j)
            else:
                s = self._ring_spoly(i, -1 - j)
            h = self.reduce(s)
            if h:
                idx = self._add(h)
                push_pairs(idx)
        self._interreduce()
        return self

    def _chain_skip(self, i, j, pending):
        a, b = self.elems[i], self.elems[j]
        comp = a.lead[0]
        L = tuple([x if x > y else y for x, y in zip(a.lead[1], b.lead[1])])
        for k in self.by_comp.get(comp, ()):
            if k == i or k == j or self.elems[k] is None:
                continue
            if not _divides(self.elems[k].lead[1], L):
                continue
            if (min(i, k), max(i, k)) in pending or (min(j, k), max(j, k)) in pending:
                continue
            return True
        return False

    def _interreduce(self):
        live = [e for e in self.elems if e is not None]
        groups: dict = {}
        for pos, e in enumerate(live):
            groups.setdefault(e.lead[0], []).append((pos, e))
        keep = []
        for pos, e in enumerate(live):
            comp, lm = e.lead
            redundant = any(_divides(ent[0], lm) for ent in self.ring_entries)
            if not redundant:
                for fpos, f in groups[comp]:
                    if fpos != pos and _divides(f.lead[1], lm) and (f.lead[1] != lm or fpos < pos):
                        redundant = True
                        break
            if not redundant:
                keep.append(e)
        key = self.order.key
        keep.sort(key=lambda e: key(e.lead), reverse=True)
        self.elems = keep
        self._reindex()
        for idx, e in enumerate(list(self.elems)):
            # reduce the tail by every other element; the lead is unchanged,
            # so the component index stays valid
            self.elems[idx] = None
            tail = self.reduce({t: v for t, v in e.terms.items() if t != e.lead})
            terms = dict(tail)
            terms[e.lead] = self.field.one()
            self.elems[idx] = self._make_elem(terms)

    def _reindex(self):
        self.by_comp = {}
        for idx, e in enumerate(self.elems):
            if e is not None:
                self.by_comp.setdefault(e.lead[0], []).append(idx)

    # results

    def basis(self) -> list[dict]:
        return [e.terms for e in self.elems if e is not None]

    def leads(self) -> list[tuple]:
        return [e.lead for e in self.elems if e is not None]

    def is_unit_component(self, comp: int) -> bool:
        z = self.ambient.zero_mono
        return any(e.lead == (comp, z) for e in self.elems if e is not None)


def module_gb(ambient: PolyRing, rank: int, gens, order: ModuleOrder = None, ring_gb=()) -> ModuleGB:
    if order is None:
        order = ModuleOrder(ambient.order, rank)
    return ModuleGB(ambient, rank, order, ring_gb).run(gens)


def _poly_to_vec(f: Poly) -> dict:
    return {(0, m): c for m, c in f.terms.items()}


def _vec_to_poly(ring: PolyRing, v: dict) -> Poly:
    return Poly(ring, {m: c for (_, m), c in v.items()})


def buchberger(gens, order: MonomialOrder = None) -> list[Poly]:
    """Reduced Groebner basis of the ideal generated by ``gens`` in their
    ambient polynomial ring, sorted by descending leading monomial."""
    gens = [g for g in gens if g.terms]
    if not gens:
        return []
    ring = gens[0].ring
    if order is not None and order != ring.order:
        ring = ring.with_order(order)
        gens = [g.change_ring(ring) for g in gens]
    gb = module_gb(ring, 1, [_poly_to_vec(g) for g in gens])
    return [_vec_to_poly(ring, v) for v in gb.basis()]


# ---------------------------------------------------------------------------
# kernels


def _ring_of(R):
    if isinstance(R, QuotientRing):
        return R.ambient, R.ideal_gb
    return R, ()


def kernel(R, columns, nrows: int, row_shifts=None, col_shifts=None, gb_only=False):
    """Generators of the kernel of the R-linear map R^c -> R^nrows whose
    j-th column is ``columns[j]`` (a vector dict).

    Computed by elimination: the vectors (a_j, e_j) generate a submodule of
    R^nrows (+) R^c, and under a block order where the first summand
    dominates, the basis elements with leading term in the second summand
    generate the kernel. Returns vector dicts in R^c (normal forms mod I).
    """
    ambient, ring_gb = _ring_of(R)
    c = len(columns)
    if c == 0:
        return []
    if row_shifts is None:
        row_shifts = [0] * nrows
    if col_shifts is None:
        col_shifts = [0] * c
    shifts = list(row_shifts) + list(col_shifts)
    blocks = [1] * nrows + [0] * c
    order = ModuleOrder(ambient.order, nrows + c, shifts, blocks)
    one = ambient.field.one()
    z = ambient.zero_mono
    gens = []
    for j, col in enumerate(columns):
        v = dict(col)
        v[(nrows + j, z)] = one
        gens.append(v)
    gb = module_gb(ambient, nrows + c, gens, order, ring_gb)
    out = []
    for v in gb.basis():
        lead = max(v, key=order.key)
        if lead[0] >= nrows:
            out.append({(comp - nrows, m): x for (comp, m), x in v.items()})
    return out


def syzygies(R, gb_polys) -> list[dict]:
    """Syzygies of a list of ring elements (the 1 x s matrix they form)."""
    cols = [_poly_to_vec(g) for g in gb_polys]
    return kernel(R, cols, 1)


# ---------------------------------------------------------------------------
# ideals


class Ideal:
    """An ideal of a quotient ring R; its ``gb`` is the reduced Groebner
    basis of the lifted ideal (generators + defining ideal) in P."""

    def __init__(self, ring: QuotientRing, generators):
        self.ring = ring
        gens = []
        for g in generators:
            if isinstance(g, str):
                g = ring.ambient.parse(g)
            g = ring.reduce(g)
            if g.terms:
                gens.append(g)
        self.generators = tuple(gens)
        self._gb = None

    @property
    def gb(self) -> tuple:
        if self._gb is None:
            self._gb = tuple(buchberger(list(self.generators) + list(self.ring.ideal_gb)))
        return self._gb

    def is_unit(self) -> bool:
        z = self.ring.ambient.zero_mono
        return any(set(g.terms) == {z} for g in self.gb)

    def is_zero(self) -> bool:
        return not self.generators

    def contains(self, f: Poly) -> bool:
        return ideal_membership(f, self)

    def reduce(self, f: Poly) -> Poly:
        from .polyring import Reducer

        red = Reducer(self.gb, self.ring.order.key, self.ring.field)
        return Poly(self.ring.ambient, red.reduce(f.terms))

    def __repr__(self):
        return "(" + ", ".join(str(g) for g in self.generators) + ")"

    def quotient_ring(self, name="R/I") -> QuotientRing:
        """R/I as a QuotientRing of the same ambient ring."""
        if self.is_unit():
            raise UnitIdeal("quotient by the unit ideal")
        return QuotientRing(self.ring.ambient, list(self.gb), name)

    def same_as(self, other: "Ideal") -> bool:
        return [g.terms for g in self.gb] == [g.terms for g in other.gb]


class PrimeSpec:
    """A prime of R; primality is asserted by the caller, properness is checked."""

    def __init__(self, ideal: Ideal, asserted_prime: bool = True, name: str = "p"):
        if ideal.is_unit():
            raise NotProper(f"prime {name} is the unit ideal")
        self.ideal = ideal
        self.asserted_prime = asserted_prime
        self.name = name
        self.height_cached = None

    @property
    def ring(self) -> QuotientRing:
        return self.ideal.ring

    def is_maximal_graded(self) -> bool:
        """True when this is the ideal of all variables."""
        m = Ideal(self.ring, self.ring.ambient.gens())
        return self.ideal.same_as(m)

    def contains(self, f: Poly) -> bool:
        return self.ideal.contains(f)

    def __repr__(self):
        return f"PrimeSpec({self.name}={self.ideal})"


def ideal_membership(f: Poly, I: Ideal) -> bool:
    return not I.reduce(f).terms


def _kernel_first(R, cols, nrows, count):
    """Kernel of [cols], projected onto the first ``count`` coordinates."""
    out = []
    for v in kernel(R, cols, nrows):
        w = {(c, m): x for (c, m), x in v.items() if c < count}
        if w:
            out.append(w)
    return out


def _gens_from_gb(ring, polys) -> list[Poly]:
    gb = buchberger(list(polys) + list(ring.ideal_gb))
    out = []
    for g in gb:
        g = ring.reduce(g)
        if g.terms:
            out.append(g)
    return out


def ideal_ops(I: Ideal, J: Ideal, op: str) -> Ideal:
    R = I.ring
    if J.ring != R:
        raise ValueError("ideals from different rings")
    if op == "sum":
        return Ideal(R, list(I.generators) + list(J.generators))
    if op == "product":
        return Ideal(R, [R.reduce(f * g) for f in I.generators for g in J.generators])
    if op == "intersection":
        if I.is_zero() or J.is_zero():
            return Ideal(R, [])
        # a in I and J: sum r_i f_i - sum s_j g_j = 0, result sum r_i f_i
        fs, gs = I.generators, J.generators
        cols = [_poly_to_vec(f) for f in fs] + [_poly_to_vec(-g) for g in gs]
        res = []
        for v in _kernel_first(R, cols, 1, len(fs)):
            total = R.zero()
            for (c, m), x in v.items():
                total = total + fs[c].mul_term(x, m)
            total = R.reduce(total)
            if total.terms:
                res.append(total)
        return Ideal(R, _gens_from_gb(R, res))
    if op == "quotient":
        result = None
        for g in J.generators:
            cur = colon_element(I, g)
            result = cur if result is None else ideal_ops(result, cur, "intersection")
        if result is None:
            return Ideal(R, [R.one()])
        return result
    raise ValueError(f"unknown op {op!r}")


def colon_element(I: Ideal, g: Poly) -> Ideal:
    """(I : g) = {r : r g in I}."""
    R = I.ring
    cols = [_poly_to_vec(R.reduce(g))] + [_poly_to_vec(f) for f in I.generators]
    res = []
    for v in _kernel_first(R, cols, 1, 1):
        res.append(R.reduce(Poly(R.ambient, {m: x for (_, m), x in v.items()})))
    return Ideal(R, _gens_from_gb(R, res))


def annihilator(M) -> Ideal:
    """Ann(M) for a presentation M = coker(relations) of R^g, as the
    intersection over generators e_j of (relations : e_j)."""
    R = M.ring
    g = M.rank
    rels = [dict(col) for col in M.relations]
    current = [R.one()]
    for j in range(g):
        cols = [{(j, m): x for m, x in f.terms.items()} for f in current]
        cols += rels
        res = []
        for v in _kernel_first(R, cols, g, len(current)):
            total = R.zero()
            for (c, m), x in v.items():
                total = total + current[c].mul_term(x, m)
            total = R.reduce(total)
            if total.terms:
                res.append(total)
        current = _gens_from_gb(R, res)
        if not current:
            break
    return Ideal(R, current)


# ---------------------------------------------------------------------------
# dimension


def monomial_dim(leads, n: int) -> int:
    """Krull dimension of P/J for the monomial ideal J generated by
    ``leads``: the largest set of variables containing no support of a
    generator. Returns -1 when J is the unit ideal."""
    supports = []
    for m in leads:
        s = frozenset(i for i, e in enumerate(m) if e)
        if not s:
            return -1
        supports.append(s)
    best = 0
    for size in range(n, 0, -1):
        for S in combinations(range(n), size):
            Sset = set(S)
            if all(not s <= Sset for s in supports):
                return size
    return best


def krull_dim(I) -> int:
    """dim P/I for an ideal (``Ideal`` of a quotient ring, meaning the
    lifted ideal, or a list of polynomials of an ambient ring)."""
    if isinstance(I, Ideal):
        gb = I.gb
        n = I.ring.nvars
    elif isinstance(I, QuotientRing):
        gb = I.ideal_gb
        n = I.nvars
    else:
        gb = buchberger(list(I))
        n = I[0].ring.nvars if I else 0
    leads = [g.lead_mono() for g in gb]
    d = monomial_dim(leads, n)
    if d < 0:
        raise UnitIdeal("dimension of the unit ideal")
    return d


@dataclass(frozen=True)
class HeightInfo:
    height_equidim: int
    height_upper: int
    height_exact: int | None = None  # monomial primes of monomial rings only

    def pick(self, mode: str) -> int:
        if mode == "conservative":
            return self.height_upper
        if mode == "equidim":
            return self.height_equidim
        if mode == "exact":
            if self.height_exact is None:
                raise ValueError("exact height needs a monomial prime of a monomial ring")
            return self.height_exact
        raise ValueError(f"unknown height mode {mode!r}")


def _monomial_height(p: PrimeSpec, R: QuotientRing):
    """dim R_p for p = (x_S) over R = P/J with J monomial: the minimal
    primes of J inside p are (x_T) for minimal covers T of the supports of
    J's generators, so dim R_p = |S| - min |T| over covers T within S."""
    if not R.is_monomial:
        return None
    S = set()
    for g in p.ideal.generators:
        if len(g.terms) != 1:
            return None
        (m,) = g.terms
        if sum(m) != 1:
            return None
        S.add(m.index(1))
    supports = [frozenset(i for i, e in enumerate(g.lead_mono()) if e) for g in R.ideal_gb]
    S |= {i for s in supports if len(s) == 1 for i in s}  # variables lying in J
    for size in range(len(S) + 1):
        for T in combinations(sorted(S), size):
            if all(s & set(T) for s in supports):
                return len(S) - size
    return None


def height(p: PrimeSpec, R: QuotientRing = None) -> HeightInfo:
    """dim R - dim R/p (exact for the equidimensional catenary gallery rings),
    together with the conservative bound dim R."""
    R = R or p.ring
    if p.ideal.is_unit():
        raise NotProper("unit ideal has no height")
    dR = krull_dim(R)
    dp = krull_dim(p.ideal)
    info = HeightInfo(dR - dp, dR, _monomial_height(p, R))
    p.height_cached = info.height_equidim
    return info


# ---------------------------------------------------------------------------
# Hilbert series of monomial quotients


def _minimalize_monos(monos):
    monos = sorted(set(monos), key=sum)
    out = []
    for m in monos:
        if not any(_divides(a, m) for a in out):
            out.append(m)
    return out


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_add(a, b):
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] += x
    return out


def hilbert_numerator(leads, n: int) -> list[int]:
    """K(t) with HS(P/J) = K(t)/(1-t)^n for the monomial ideal J = (leads),
    as a coefficient list (constant term first)."""
    gens = _minimalize_monos(leads)
    if not gens:
        return [1]
    if any(sum(m) == 0 for m in gens):
        return [0]
    # pairwise coprime generators: product formula
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in gens]
    seen: set = set()
    coprime = True
    for s in supports:
        if s & seen:
            coprime = False
            break
        seen |= s
    if coprime:
        out = [1]
        for m in gens:
            f = [0] * (sum(m) + 1)
            f[0], f[-1] = 1, -1
            out = _poly_mul(out, f)
        return out
    # pivot on the variable shared by the most generators
    counts = [0] * n
    for s in supports:
        for i in s:
            counts[i] += 1
    x = max(range(n), key=lambda i: counts[i])
    var = tuple(1 if i == x else 0 for i in range(n))
    # J = (J + x) and (J : x) give K(J) = K(J + x) + t K(J : x)
    plus = [m for m in gens if m[x] == 0] + [var]
    colon = [tuple(e - 1 if i == x and e > 0 else e for i, e in enumerate(m)) for m in gens]
    a = hilbert_numerator(plus, n)
    b = hilbert_numerator(colon, n)
    return _poly_add(a, [0] + b)


def dim_and_multiplicity(leads, n: int):
    """(Krull dimension, multiplicity) of P/J for a monomial ideal J;
    (-1, 0) for the unit ideal."""
    K = hilbert_numerator(leads, n)
    while K and K[-1] == 0:
        K.pop()
    if not K:
        return -1, 0
    k = 0
    while sum(K) == 0:
        # divide by (1 - t)
        q = []
        acc = 0
        for c in K[:-1]:
            acc += c
            q.append(acc)
        K = q
        k += 1
    return n - k, sum(K)
