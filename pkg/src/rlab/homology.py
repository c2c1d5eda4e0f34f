"""Koszul complexes, Tor and Ext tables against R/p, generic ranks over
R/p and support tests.

Complexes whose terms are finitely presented (a free module modulo a
relation submodule) are handled by :class:`PresentedComplex`; tensor and
Hom total complexes against free complexes are built as such.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .groebner import (
    Ideal,
    ModuleOrder,
    PrimeSpec,
    annihilator,
    buchberger,
    dim_and_multiplicity,
    module_gb,
)
from .modres import (
    FreeComplex,
    Matrix,
    ModulePresentation,
    Resolution,
    free_resolution,
    infer_degrees,
    reduce_vec,
    subquotient_homology,
    vec_degree,
)
from .polyring import Poly, QuotientRing

__all__ = [
    "ElementNotInMaximalIdeal",
    "BoundTooSmall",
    "PresentedComplex",
    "KoszulComplex",
    "koszul_complex",
    "koszul_homology",
    "TorTable",
    "ExtTable",
    "tor_table",
    "ext_table",
    "rank_at_prime",
    "matrix_rank_at_prime",
    "rank_by_minors",
    "localized_vanishing",
    "quotient_by_prime",
    "residue_resolution",
]


class ElementNotInMaximalIdeal(ValueError):
    pass


class BoundTooSmall(ValueError):
    pass


# ---------------------------------------------------------------------------
# complexes of presented modules


@dataclass
class _Term:
    rank: int
    rels: list
    shifts: list | None


class PresentedComplex:
    """Homologically indexed complex whose i-th term is R^rank / rels and
    whose differential ``maps[i]`` goes from term i to term i-1."""

    def __init__(self, ring: QuotientRing, terms: dict, maps: dict):
        self.ring = ring
        self.terms = terms
        self.maps = maps

    def term(self, i) -> _Term:
        return self.terms.get(i, _Term(0, [], []))

    def degrees(self):
        return sorted(i for i, t in self.terms.items() if t.rank)

    def homology(self, i: int) -> ModulePresentation:
        R = self.ring
        t = self.term(i)
        if t.rank == 0:
            return ModulePresentation(R, 0, [], degrees=[], name="H")
        below = self.term(i - 1)
        above = self.term(i + 1)
        out_map = self.maps.get(i) if below.rank else None
        in_map = self.maps.get(i + 1) if above.rank else None
        graded = t.shifts is not None and (below.rank == 0 or below.shifts is not None)
        return subquotient_homology(
            R,
            t.rank,
            out_map,
            below.rels,
            in_map,
            t.rels,
            shifts=t.shifts if graded else None,
            target_shifts=below.shifts if graded else None,
        )


def _module_as_complex(X):
    """A module or free complex as {degree: (rank, rels, shifts)} plus its
    differentials {degree: Matrix}."""
    if isinstance(X, ModulePresentation):
        degs = X.degrees
        return {0: _Term(X.rank, list(X.relations), list(degs) if degs is not None else None)}, {}
    if isinstance(X, FreeComplex):
        g = X.infer_grading()
        terms = {}
        for i in range(X.bottom, X.top + 1):
            sh = list(g[i]) if g and i in g else None
            terms[i] = _Term(X.rank(i), [], sh)
        maps = {i: X.diff(i) for i in range(X.bottom + 1, X.top + 1)}
        return terms, maps
    raise TypeError(f"expected a module or a free complex, got {type(X).__name__}")


def _block(v: dict, offset: int, stride: int, outer: int) -> dict:
    """Move a vector of R^stride into block ``outer`` of a direct sum."""
    base = offset + outer * stride
    return {(base + c, m): x for (c, m), x in v.items()}


def tensor_total(F: FreeComplex, X) -> PresentedComplex:
    """Total complex of F (x) X for a free complex F and a module or free
    complex X; sign (-1)^i on the X differential for F-degree i."""
    R = F.ring
    p = R.field.characteristic
    Xt, Xd = _module_as_complex(X)
    Fg = F.infer_grading()
    lo = F.bottom + min(Xt)
    hi = F.top + max(Xt)
    # block layout per total degree n: list of (i, b, offset)
    layout = {}
    terms = {}
    for n in range(lo, hi + 1):
        off = 0
        blocks = []
        rels = []
        shifts = []
        graded = True
        for i in range(F.bottom, F.top + 1):
            b = n - i
            if b not in Xt:
                continue
            fr, xt = F.rank(i), Xt[b]
            blocks.append((i, b, off))
            for s in range(fr):
                for u in xt.rels:
                    rels.append(_block(u, off, xt.rank, s))
            fdeg = Fg.get(i) if Fg else None
            if fdeg is None or xt.shifts is None:
                graded = False
            else:
                for s in range(fr):
                    for j in range(xt.rank):
                        shifts.append(fdeg[s] + xt.shifts[j])
            off += fr * xt.rank
        layout[n] = (blocks, off)
        terms[n] = _Term(off, rels, shifts if graded else None)
    maps = {}
    for n in range(lo + 1, hi + 1):
        blocks, size = layout[n]
        tgt_blocks = {(i, b): o for i, b, o in layout[n - 1][0]}
        cols = []
        for i, b, off in blocks:
            xr = Xt[b].rank
            dF = F.diff(i).cols if F.rank(i - 1) else None
            dX = Xd.get(b)
            sign = -1 if i % 2 else 1
            for s in range(F.rank(i)):
                for j in range(xr):
                    col: dict = {}
                    if dF is not None and (i - 1, b) in tgt_blocks:
                        o2 = tgt_blocks[(i - 1, b)]
                        for (s2, m), x in dF[s].items():
                            col[(o2 + s2 * xr + j, m)] = x
                    if dX is not None and Xt.get(b - 1) and (i, b - 1) in tgt_blocks:
                        o2 = tgt_blocks[(i, b - 1)]
                        xr2 = Xt[b - 1].rank
                        for (j2, m), x in dX.cols[j].items():
                            t = (o2 + s * xr2 + j2, m)
                            y = col.get(t, 0) + sign * x
                            if p:
                                y %= p
                            if y:
                                col[t] = y
                            else:
                                col.pop(t, None)
                    cols.append(col)
        maps[n] = Matrix(R, layout[n - 1][1], cols)
    return PresentedComplex(R, terms, maps)


def hom_total(G: FreeComplex, X, top: int = None) -> PresentedComplex:
    """Hom(G, X) for a free complex G (homological, bottom 0) and a module
    or free complex X. Cohomological degree n = a - b collects
    Hom(G_a, X_b); it is stored at homological index -n. The differential
    is D(f) = d_X f - (-1)^n f d_G. Only G_a with a <= ``top`` is used."""
    R = G.ring
    p = R.field.characteristic
    Xt, Xd = _module_as_complex(X)
    Gg = G.infer_grading()
    top = G.top if top is None else min(top, G.top)
    amin, amax = G.bottom, top
    nmin, nmax = amin - max(Xt), amax - min(Xt)
    layout = {}
    terms = {}
    for n in range(nmin, nmax + 1):
        off = 0
        blocks = []
        rels = []
        shifts = []
        graded = True
        for a in range(amin, amax + 1):
            b = a - n
            if b not in Xt:
                continue
            ga, xt = G.rank(a), Xt[b]
            blocks.append((a, b, off))
            for k in range(ga):
                for u in xt.rels:
                    rels.append(_block(u, off, xt.rank, k))
            gdeg = Gg.get(a) if Gg else None
            if gdeg is None or xt.shifts is None:
                graded = False
            else:
                for k in range(ga):
                    for j in range(xt.rank):
                        shifts.append(xt.shifts[j] - gdeg[k])
            off += ga * xt.rank
        layout[n] = (blocks, off)
        terms[-n] = _Term(off, rels, shifts if graded else None)
    # transpose of each d_G, as row lists: dG_rows[a+1][k] = [(f, m, x)]
    maps = {}
    for n in range(nmin, nmax):
        blocks, size = layout[n]
        tgt = {(a, b): o for a, b, o in layout[n + 1][0]}
        sign = -1 if n % 2 else 1  # (-1)^n
        cols = []
        for a, b, off in blocks:
            xr = Xt[b].rank
            dX = Xd.get(b)
            nxt = None
            if a + 1 <= amax and (a + 1, b) in tgt:
                nxt = [dict() for _ in range(G.rank(a))]
                for f, col in enumerate(G.diff(a + 1).cols):
                    for (k, m), x in col.items():
                        nxt[k][(f, m)] = x
            for k in range(G.rank(a)):
                for j in range(xr):
                    col: dict = {}
                    if dX is not None and (a, b - 1) in tgt and Xt.get(b - 1):
                        o2 = tgt[(a, b - 1)]
                        xr2 = Xt[b - 1].rank
                        for (j2, m), x in dX.cols[j].items():
                            col[(o2 + k * xr2 + j2, m)] = x
                    if nxt is not None:
                        o2 = tgt[(a + 1, b)]
                        for (f, m), x in nxt[k].items():
                            t = (o2 + f * xr + j, m)
                            y = col.get(t, 0) - sign * x
                            if p:
                                y %= p
                            if y:
                                col[t] = y
                            else:
                                col.pop(t, None)
                    cols.append(col)
        maps[-n] = Matrix(R, layout[n + 1][1], cols)
    return PresentedComplex(R, terms, maps)


# ---------------------------------------------------------------------------
# Koszul complexes


@dataclass
class KoszulComplex:
    elements: list
    complex: FreeComplex

    def ranks(self):
        return self.complex.ranks


def koszul_complex(xs, R: QuotientRing) -> KoszulComplex:
    """K(x_1..x_c): basis of K_i the i-subsets S (in lexicographic order),
    d(e_S) = sum_k (-1)^k x_{s_k} e_{S - s_k}."""
    xs = [R(x) if not isinstance(x, Poly) else R.reduce(x) for x in xs]
    if not xs:
        raise ValueError("Koszul complex needs at least one element")
    z = R.ambient.zero_mono
    for x in xs:
        if x.terms.get(z):
            raise ElementNotInMaximalIdeal(f"{x} is not in the maximal ideal")
    c = len(xs)
    p = R.field.characteristic
    subsets = {i: list(combinations(range(c), i)) for i in range(c + 1)}
    index = {i: {S: k for k, S in enumerate(subsets[i])} for i in subsets}
    graded = all(x.is_homogeneous() for x in xs)
    xdeg = [x.degree() if x.terms else 0 for x in xs]
    d = {}
    for i in range(1, c + 1):
        cols = []
        for S in subsets[i]:
            col: dict = {}
            for k, s in enumerate(S):
                T = S[:k] + S[k + 1:]
                row = index[i - 1][T]
                sign = -1 if k % 2 else 1
                for m, x in xs[s].terms.items():
                    y = sign * x
                    col[(row, m)] = y % p if p else y
            cols.append(col)
        d[i] = Matrix(R, len(subsets[i - 1]), cols)
    degrees = None
    if graded:
        degrees = {i: [sum(xdeg[s] for s in S) for S in subsets[i]] for i in subsets}
    F = FreeComplex(R, 0, [len(subsets[i]) for i in range(c + 1)], d, degrees, check=False)
    return KoszulComplex(xs, F)


def koszul_homology(xs, X, R: QuotientRing = None) -> dict:
    """{j: H_j(K(xs) (x) X)} over the degrees where the total complex lives."""
    R = R or X.ring
    K = koszul_complex(xs, R).complex
    T = tensor_total(K, X)
    return {j: T.homology(j) for j in T.degrees()}


# ---------------------------------------------------------------------------
# ranks over R/p


def quotient_by_prime(p: PrimeSpec) -> QuotientRing:
    """R/p as a quotient of the same ambient ring."""
    cache = getattr(p, "_quotient", None)
    if cache is None:
        cache = QuotientRing(p.ring.ambient, list(p.ideal.gb), name=f"R/{p.name}")
        p._quotient = cache
    return cache


def _coker_rank_gb(D: QuotientRing, nrows: int, cols, shifts):
    """rank over the domain D of coker(cols), via leading-term multiplicities
    (requires a degree-compatible order and homogeneous data)."""
    n = D.nvars
    ring_leads = [g.lead_mono() for g in D.ideal_gb]
    dimD, eD = dim_and_multiplicity(ring_leads, n)
    if nrows == 0:
        return 0
    cols = [c for c in cols if c]
    if not cols:
        return nrows
    order = ModuleOrder(D.order, nrows, shifts)
    gb = module_gb(D.ambient, nrows, cols, order, D.ideal_gb)
    leads = [list(ring_leads) for _ in range(nrows)]
    for c, m in gb.leads():
        leads[c].append(m)
    total = 0
    for L in leads:
        dL, eL = dim_and_multiplicity(L, n)
        if dL == dimD:
            total += eL
    if total % eD:
        raise ArithmeticError("multiplicity is not a multiple of e(R/p)")
    return total // eD


def rank_by_minors(D: QuotientRing, A: Matrix) -> int:
    """Largest r with a nonzero r x r minor over the domain D (exhaustive;
    for small matrices and cross-checks)."""
    rows = A.rows()
    nr, nc = A.nrows, A.ncols
    best = 0
    for r in range(1, min(nr, nc) + 1):
        found = False
        for I in combinations(range(nr), r):
            for J in combinations(range(nc), r):
                sub = [[rows[i][j] for j in J] for i in I]
                if D.reduce(_det(sub, D)).terms:
                    found = True
                    break
            if found:
                break
        if not found:
            break
        best = r
    return best


def _det(M, D):
    n = len(M)
    if n == 1:
        return M[0][0]
    total = D.zero()
    for j in range(n):
        if not M[0][j].terms:
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = D.reduce(M[0][j] * _det(minor, D))
        total = total + term if j % 2 == 0 else total - term
    return D.reduce(total)


def _rank_by_elimination(D: QuotientRing, A: Matrix) -> int:
    """Fraction-free Gaussian elimination over the domain D (zero tests by
    normal forms)."""
    rows = [[D.reduce(f) for f in row] for row in A.rows()]
    rank = 0
    ncols = A.ncols
    col = 0
    while rows and col < ncols:
        piv = next((k for k, r in enumerate(rows) if r[col].terms), None)
        if piv is None:
            col += 1
            continue
        prow = rows.pop(piv)
        a = prow[col]
        new = []
        for r in rows:
            b = r[col]
            if b.terms:
                r = [D.reduce(a * r[j] - b * prow[j]) for j in range(ncols)]
            new.append(r)
        rows = new
        rank += 1
        col += 1
    return rank


def matrix_rank_at_prime(A: Matrix, p: PrimeSpec, row_shifts=None) -> int:
    """Rank of A over the domain R/p."""
    D = quotient_by_prime(p)
    cols = [reduce_vec(D, c) for c in A.cols]
    cols = [c for c in cols if c]
    if not cols or A.nrows == 0:
        return 0
    if row_shifts is None:
        row_shifts = infer_degrees(D, A.nrows, cols)
    if row_shifts is not None and D.order.degree_compatible and D.is_homogeneous:
        return A.nrows - _coker_rank_gb(D, A.nrows, cols, row_shifts)
    return _rank_by_elimination(D, Matrix(D, A.nrows, cols))


def rank_at_prime(T: ModulePresentation, p: PrimeSpec) -> int:
    """Generic rank of T over R/p: dim over k(p) of k(p) (x) T."""
    return T.rank - matrix_rank_at_prime(T.matrix, p, T.degrees)


# ---------------------------------------------------------------------------
# support


def localized_vanishing(E: ModulePresentation, p: PrimeSpec) -> bool:
    """True iff E_p = 0, i.e. Ann(E) is not contained in p."""
    if E.rank == 0 or E.is_zero():
        return True
    ann = annihilator(E)
    return any(not p.contains(a) for a in ann.generators)


# ---------------------------------------------------------------------------
# Tor


@dataclass
class TorTable:
    prime: PrimeSpec
    bound: int
    ranks: list
    complex: FreeComplex  # F (x) R/p, including degree bound + 1
    source: object = None
    _modules: dict = field(default_factory=dict)

    def module(self, i: int) -> ModulePresentation:
        """Tor_i as a module over R/p (computed on demand)."""
        if i not in self._modules:
            F = self.complex
            self._modules[i] = homology_free(F, i)
        return self._modules[i]

    @property
    def modules(self) -> list:
        return [self.module(i) for i in range(self.bound + 1)]

    def first_nonzero(self):
        return next((i for i, t in enumerate(self.ranks) if t), None)


def homology_free(F: FreeComplex, i: int) -> ModulePresentation:
    terms, maps = _module_as_complex(F)
    return PresentedComplex(F.ring, terms, maps).homology(i)


def _resolution(M: ModulePresentation, bound: int) -> Resolution:
    """Minimal resolution of M, cached on the module object."""
    hit = getattr(M, "_resolution", None)
    if hit is not None and hit.bound == bound:
        return hit
    res = free_resolution(M, bound)
    M._resolution = res
    return res


def resolution_complex(res: Resolution, extra: bool = True) -> FreeComplex:
    """F_0..F_bound, plus F_{bound+1} built from the top syzygies when
    ``extra`` (their image is ker d_bound, which is all that matters for
    homology at degree bound)."""
    F = res.complex
    if not extra:
        return F
    R = F.ring
    top = res.top_syzygies
    ranks = list(F.ranks) + [len(top)]
    d = dict(F.d)
    d[res.bound + 1] = Matrix(R, F.rank(res.bound), top)
    degs = dict(F.degrees) if F.degrees else None
    if degs is not None:
        sh = degs[res.bound]
        degs[res.bound + 1] = [vec_degree(v, sh) for v in top]
    return FreeComplex(R, F.bottom, ranks, d, degs, check=False)


def tor_table(M, p: PrimeSpec, bound: int = 8) -> TorTable:
    """Tor_i^R(R/p, M) for 0 <= i <= bound with ranks over R/p."""
    if bound < 0:
        raise BoundTooSmall("bound must be >= 0")
    R = p.ring
    if isinstance(M, ModulePresentation):
        res = _resolution(M, bound)
        F = resolution_complex(res)
        lo = 0
    elif isinstance(M, FreeComplex):
        F = M
        lo = M.bottom
    else:
        raise TypeError("tor_table expects a module or a free complex")
    D = quotient_by_prime(p)
    FD = F.tensor_quotient(D)
    grading = F.infer_grading()
    image_rank = {}

    def rk(i):
        if i not in image_rank:
            if F.rank(i) == 0 or F.rank(i - 1) == 0:
                image_rank[i] = 0
            else:
                sh = grading.get(i - 1) if grading else None
                image_rank[i] = matrix_rank_at_prime(F.diff(i), p, sh)
        return image_rank[i]

    ranks = []
    for i in range(0, bound + 1):
        if isinstance(M, FreeComplex) and (i < lo or i > M.top):
            ranks.append(0)
            continue
        ranks.append(F.rank(i) - rk(i) - rk(i + 1))
    del R
    return TorTable(p, bound, ranks, FD, M)


# ---------------------------------------------------------------------------
# Ext


@dataclass
class ExtTable:
    prime: PrimeSpec
    bound: int
    hom: PresentedComplex
    maximal: bool
    source: object = None
    _modules: dict = field(default_factory=dict)
    _local: dict = field(default_factory=dict)
    _mu: dict = field(default_factory=dict)

    def module(self, i: int) -> ModulePresentation:
        if i not in self._modules:
            self._modules[i] = self.hom.homology(-i)
        return self._modules[i]

    @property
    def modules(self) -> list:
        return [self.module(i) for i in range(self.bound + 1)]

    def localized(self, i: int) -> bool:
        """(E^i)_p != 0."""
        if i not in self._local:
            E = self.module(i)
            if self.maximal:
                self._local[i] = self.mu(i) > 0
            else:
                self._local[i] = not localized_vanishing(E, self.prime)
        return self._local[i]

    @property
    def localized_nonzero(self) -> list:
        return [self.localized(i) for i in range(self.bound + 1)]

    def mu(self, i: int) -> int:
        """dim_k Ext^i(k, M) (only for the maximal ideal)."""
        if not self.maximal:
            raise ValueError("Bass numbers are computed at the maximal ideal only")
        if i not in self._mu:
            E = self.module(i)
            n = 0 if E.rank == 0 else E.k_dim()
            if n is None:
                raise ArithmeticError(f"Ext^{i}(k, M) is not of finite length")
            self._mu[i] = n
        return self._mu[i]

    @property
    def mus(self) -> list:
        return [self.mu(i) for i in range(self.bound + 1)]


def residue_resolution(p: PrimeSpec, bound: int) -> Resolution:
    """Minimal free resolution of R/p, cached on the prime."""
    cache = getattr(p, "_residue_res", None)
    if cache is not None and cache.bound >= bound:
        return cache
    Mp = ModulePresentation.cyclic(p.ring, list(p.ideal.generators), name=f"R/{p.name}")
    res = free_resolution(Mp, bound)
    p._residue_res = res
    return res


def ext_table(M, p: PrimeSpec, bound: int = 8) -> ExtTable:
    """Ext^i_R(R/p, M) for 0 <= i <= bound from the minimal resolution of
    R/p through degree bound + 1 (plus its top for a complex target)."""
    if bound < 0:
        raise BoundTooSmall("bound must be >= 0")
    extra = 0
    if isinstance(M, FreeComplex):
        extra = max(0, M.top)
    need = bound + extra
    res = residue_resolution(p, need)
    G = resolution_complex(res)
    H = hom_total(G, M, top=need + 1)
    maximal = p.is_maximal_graded()
    return ExtTable(p, bound, H, maximal, M)
