"""Finitely presented modules, free complexes and minimal free resolutions.

Matrices are stored column-wise: a map R^c -> R^g is a list of c vector
dicts ``{(row, monomial): coeff}``. The cokernel of such a matrix is the
module with g generators and the columns as relations, and composition
d_i . d_{i+1} is the usual matrix product.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

from .groebner import ModuleOrder, kernel, module_gb, monomial_dim
from .polyring import Poly, QuotientRing, monomials_of_degree

__all__ = [
    "InhomogeneousInput",
    "Matrix",
    "ModulePresentation",
    "FreeComplex",
    "Resolution",
    "EMPTY",
    "module_kernel",
    "free_resolution",
    "minimize",
    "homology_at",
    "subquotient_homology",
    "sup_inf_homology",
    "minimal_generators",
    "prune",
    "infer_degrees",
    "reduce_vec",
    "vec_degree",
]


class InhomogeneousInput(ValueError):
    pass


EMPTY = "empty"


# ---------------------------------------------------------------------------
# vectors


def reduce_vec(R: QuotientRing, v: dict) -> dict:
    """Normal form of a vector modulo I, componentwise."""
    red = R.reducer
    if not red.entries:
        return {t: c for t, c in v.items() if c}
    if red.monomial_only:
        find = red.find
        return {t: c for t, c in v.items() if c and find(t[1]) is None}
    by_comp: dict = {}
    for (c, m), x in v.items():
        by_comp.setdefault(c, {})[m] = x
    out = {}
    for c, terms in by_comp.items():
        for m, x in red.reduce(terms).items():
            out[(c, m)] = x
    return out


def _vadd(acc: dict, v: dict, scale, shift, p, comp_map=None):
    """acc += scale * x^shift * v (in place), with optional row relabeling."""
    for (c, m), x in v.items():
        if comp_map is not None:
            c = comp_map(c)
        t = (c, tuple([a + b for a, b in zip(m, shift)]) if shift is not None else m)
        y = acc.get(t, 0) + scale * x
        if p:
            y %= p
        if y:
            acc[t] = y
        else:
            acc.pop(t, None)


def vec_degree(v: dict, shifts) -> int:
    c, m = next(iter(v))
    return sum(m) + shifts[c]


def _poly_entries(R, v: dict) -> dict:
    rows: dict = {}
    for (c, m), x in v.items():
        rows.setdefault(c, {})[m] = x
    return {c: Poly(R.ambient, t) for c, t in rows.items()}


# ---------------------------------------------------------------------------
# matrices


class Matrix:
    """A ``nrows`` x ``len(cols)`` matrix over R, column-major."""

    __slots__ = ("ring", "nrows", "cols")

    def __init__(self, ring: QuotientRing, nrows: int, cols):
        self.ring = ring
        self.nrows = nrows
        self.cols = [reduce_vec(ring, dict(c)) for c in cols]
        for c in self.cols:
            for (r, _m) in c:
                if not 0 <= r < nrows:
                    raise ValueError(f"row index {r} out of range for {nrows} rows")

    @classmethod
    def from_rows(cls, ring: QuotientRing, rows, ncols: int = None):
        """Build from a list of rows of Polys (or strings)."""
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        cols = [dict() for _ in range(ncols)]
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged matrix")
            for j, f in enumerate(row):
                if isinstance(f, str):
                    f = ring.ambient.parse(f)
                elif isinstance(f, int):
                    f = ring.ambient.const(f)
                for m, x in f.terms.items():
                    cols[j][(i, m)] = x
        return cls(ring, nrows, cols)

    @classmethod
    def zero(cls, ring, nrows, ncols):
        return cls(ring, nrows, [{} for _ in range(ncols)])

    @classmethod
    def identity(cls, ring, n):
        z = ring.ambient.zero_mono
        one = ring.field.one()
        return cls(ring, n, [{(j, z): one} for j in range(n)])

    @property
    def ncols(self) -> int:
        return len(self.cols)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def entry(self, i: int, j: int) -> Poly:
        return Poly(self.ring.ambient, {m: x for (r, m), x in self.cols[j].items() if r == i})

    def rows(self) -> list[list[Poly]]:
        out = [[self.ring.zero() for _ in range(self.ncols)] for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for r, f in _poly_entries(self.ring, col).items():
                out[r][j] = f
        return out

    def is_zero(self) -> bool:
        return all(not c for c in self.cols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        p = self.ring.field.characteristic
        out = []
        for col in other.cols:
            acc: dict = {}
            for (k, m), x in col.items():
                _vadd(acc, self.cols[k], x, m, p)
            out.append(acc)
        return Matrix(self.ring, self.nrows, out)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.shape == other.shape
            and self.cols == other.cols
        )

    def transpose(self) -> "Matrix":
        cols = [dict() for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for (r, m), x in col.items():
                cols[r][(j, m)] = x
        return Matrix(self.ring, self.ncols, cols)

    def mod(self, R2: QuotientRing) -> "Matrix":
        """The same matrix over a quotient R2 of the same ambient ring."""
        return Matrix(R2, self.nrows, self.cols)

    def entries_in_max_ideal(self) -> bool:
        z = self.ring.ambient.zero_mono
        return all(m != z for col in self.cols for (_r, m) in col)

    def __repr__(self):
        rows = self.rows()
        body = "; ".join(", ".join(str(f) for f in row) for row in rows)
        return f"Matrix({self.nrows}x{self.ncols}: [{body}])"


# ---------------------------------------------------------------------------
# degrees


def infer_degrees(R: QuotientRing, nrows: int, cols, fixed=None):
    """Generator degrees making every column homogeneous, or None.

    Each entry f in row i of column j forces deg f + deg e_i = deg col_j;
    the resulting difference constraints are solved by propagation. Rows
    with no constraint get degree 0 (or ``fixed[i]`` when given).
    """
    if not R.is_homogeneous:
        return None
    deg: list = [None] * nrows
    if fixed is not None:
        deg = list(fixed)
    # column constraints: all (row, entry degree) pairs of a column
    cons = []
    for col in cols:
        ents: dict = {}
        for (r, m), _x in col.items():
            d = sum(m)
            if ents.setdefault(r, d) != d:
                return None
        if ents:
            cons.append(list(ents.items()))
    # rows linked through columns: deg e_r - deg e_s = entry_s - entry_r
    adj: dict = {i: [] for i in range(nrows)}
    for ents in cons:
        r0, d0 = ents[0]
        for r, d in ents[1:]:
            adj[r0].append((r, d0 - d))
            adj[r].append((r0, d - d0))
    def propagate(seeds):
        stack = list(seeds)
        comp = list(seeds)
        while stack:
            u = stack.pop()
            for v, off in adj[u]:
                want = deg[u] + off
                if deg[v] is None:
                    deg[v] = want
                    comp.append(v)
                    stack.append(v)
                elif deg[v] != want:
                    return None
        return comp

    seeds = [i for i in range(nrows) if deg[i] is not None]
    if seeds and propagate(seeds) is None:
        return None
    for start in range(nrows):
        if deg[start] is not None:
            continue
        deg[start] = 0
        comp = propagate([start])
        if comp is None:
            return None
        low = min(deg[v] for v in comp)
        for v in comp:
            deg[v] -= low
    return deg


def _col_degrees(cols, row_deg):
    out = []
    for col in cols:
        if not col:
            out.append(None)
            continue
        (r, m) = next(iter(col))
        out.append(sum(m) + row_deg[r])
    return out


# ---------------------------------------------------------------------------
# modules


class ModulePresentation:
    """M = coker(relations), a quotient of R^rank; ``relations`` are columns."""

    def __init__(self, ring: QuotientRing, rank: int, relations=(), degrees=None, name: str = "M"):
        self.ring = ring
        self.rank = rank
        rel = Matrix(ring, rank, relations).cols
        self.relations = [c for c in rel if c]
        self.name = name
        self._degrees = tuple(degrees) if degrees is not None else None
        self._degrees_done = degrees is not None
        self._gb = None

    @classmethod
    def from_matrix(cls, A: Matrix, name="M"):
        return cls(A.ring, A.nrows, A.cols, name=name)

    @classmethod
    def free(cls, R, rank=1, name="F"):
        return cls(R, rank, [], degrees=[0] * rank, name=name)

    @classmethod
    def cyclic(cls, R, ideal_gens, name="M"):
        """R/(gens)."""
        cols = []
        for g in ideal_gens:
            if isinstance(g, str):
                g = R.ambient.parse(g)
            cols.append({(0, m): x for m, x in g.terms.items()})
        return cls(R, 1, cols, name=name)

    @property
    def matrix(self) -> Matrix:
        return Matrix(self.ring, self.rank, self.relations)

    @property
    def degrees(self):
        """Generator degrees (None if the presentation is not homogeneous)."""
        if not self._degrees_done:
            d = infer_degrees(self.ring, self.rank, self.relations)
            self._degrees = tuple(d) if d is not None else None
            self._degrees_done = True
        return self._degrees

    def is_homogeneous(self) -> bool:
        return self.degrees is not None

    def require_homogeneous(self):
        if self.degrees is None:
            raise InhomogeneousInput(
                f"module {self.name} has no grading making its relations homogeneous"
            )
        return self.degrees

    @property
    def gb(self):
        if self._gb is None:
            shifts = self.degrees or [0] * self.rank
            order = ModuleOrder(self.ring.order, max(self.rank, 1), shifts)
            self._gb = module_gb(
                self.ring.ambient, max(self.rank, 1), self.relations, order, self.ring.ideal_gb
            )
        return self._gb

    def contains(self, v: dict) -> bool:
        """Whether a vector of R^rank lies in the relation submodule."""
        return self.gb.contains(reduce_vec(self.ring, v))

    def is_zero(self) -> bool:
        if self.rank == 0:
            return True
        gb = self.gb
        return all(gb.is_unit_component(j) for j in range(self.rank))

    def lead_ideals(self):
        """Per generator, the leading monomials of the relation module
        (together with the leading monomials of I)."""
        ring_leads = [g.lead_mono() for g in self.ring.ideal_gb]
        out = [list(ring_leads) for _ in range(self.rank)]
        for c, m in self.gb.leads():
            out[c].append(m)
        return out

    def k_dim(self):
        """dim_k M, or None when M is not finite dimensional."""
        n = self.ring.nvars
        total = 0
        for leads in self.lead_ideals():
            d = monomial_dim(leads, n)
            if d > 0:
                return None
            if d < 0:
                continue
            total += _count_standard(leads, n)
        return total

    def __repr__(self):
        return f"ModulePresentation({self.name}: rank {self.rank}, {len(self.relations)} relations)"


def _count_standard(leads, n):
    """Number of monomials outside an artinian monomial ideal."""
    bounds = [0] * n
    for m in leads:
        s = [i for i, e in enumerate(m) if e]
        if len(s) == 1:
            i = s[0]
            b = m[i]
            if bounds[i] == 0 or b < bounds[i]:
                bounds[i] = b
    count = 0
    for mono in product(*[range(b) for b in bounds]):
        if not any(all(a >= b for a, b in zip(mono, m)) for m in leads):
            count += 1
    return count


# ---------------------------------------------------------------------------
# pruning and minimal generators


def prune(R: QuotientRing, nrows: int, cols, degrees=None):
    """Remove generator/relation pairs joined by a unit (constant) entry.

    Returns (new_rank, new_cols, kept_rows). Iterated to a fixpoint; for
    graded data the result is a minimal set of generators.
    """
    p = R.field.characteristic
    z = R.ambient.zero_mono
    cols = [dict(c) for c in cols if c]
    rows = list(range(nrows))
    while True:
        hit = None
        for j, col in enumerate(cols):
            for (r, m), x in col.items():
                if m == z:
                    hit = (j, r, x)
                    break
            if hit:
                break
        if hit is None:
            break
        j, r, x = hit
        pivot = cols.pop(j)
        inv = R.field.inv(x)
        new = []
        for col in cols:
            # the coefficient of e_r in this column, as a polynomial
            coeff_r = {m: y for (rr, m), y in col.items() if rr == r}
            if coeff_r:
                acc = dict(col)
                for m, y in coeff_r.items():
                    _vadd(acc, pivot, -y * inv, m, p)
                col = reduce_vec(R, acc)
            new.append({t: y for t, y in col.items() if t[0] != r})
        cols = [c for c in new if c]
        rows.remove(r)
    # relabel the remaining rows 0..k-1
    index = {r: i for i, r in enumerate(rows)}
    out = [{(index[r], m): x for (r, m), x in col.items()} for col in cols]
    return len(rows), out, rows


class _Echelon:
    """Row echelon form of vectors over k keyed by their largest term."""

    def __init__(self, p):
        self.p = p
        self.rows: dict = {}

    def reduce(self, v: dict) -> dict:
        p = self.p
        v = dict(v)
        while v:
            t = max(v)
            row = self.rows.get(t)
            if row is None:
                return v
            c = v[t]
            for s, x in row.items():
                y = v.get(s, 0) - c * x
                if p:
                    y %= p
                if y:
                    v[s] = y
                else:
                    v.pop(s, None)
        return v

    def add(self, v: dict) -> bool:
        v = self.reduce(v)
        if not v:
            return False
        t = max(v)
        c = v[t]
        if c != 1:
            inv = pow(c, -1, self.p) if self.p else 1 / c
            v = {s: (x * inv) % self.p if self.p else x * inv for s, x in v.items()}
        self.rows[t] = v
        return True


def minimal_generators(R: QuotientRing, vecs, shifts):
    """A minimal generating set (in nondecreasing degree) of the graded
    submodule spanned by homogeneous vectors ``vecs`` of R^n.

    Degree by degree, a candidate is kept iff it is not in the k-span of
    the monomial multiples of the generators already kept.
    """
    p = R.field.characteristic
    n = R.nvars
    vecs = [reduce_vec(R, v) for v in vecs]
    vecs = [v for v in vecs if v]
    by_deg: dict = {}
    for v in vecs:
        by_deg.setdefault(vec_degree(v, shifts), []).append(v)
    kept: list = []
    kept_deg: list = []
    for d in sorted(by_deg):
        ech = _Echelon(p)
        for u, du in zip(kept, kept_deg):
            for mono in monomials_of_degree(n, d - du):
                w = {(c, tuple([a + b for a, b in zip(m, mono)])): x for (c, m), x in u.items()}
                w = reduce_vec(R, w)
                if w:
                    ech.add(w)
        for v in sorted(by_deg[d], key=lambda v: (len(v), sorted(v))):
            if ech.add(v):
                kept.append(v)
                kept_deg.append(d)
    return kept, kept_deg


def _minimal_presentation(M: ModulePresentation):
    """(degrees, relation columns) of a minimal presentation of graded M."""
    degs = M.require_homogeneous()
    R = M.ring
    rank, cols, rows = prune(R, M.rank, M.relations)
    degs = [degs[r] for r in rows]
    cols, _ = minimal_generators(R, cols, degs)
    return degs, cols


def module_kernel(A: Matrix, row_shifts=None, col_shifts=None) -> ModulePresentation:
    """ker A as the submodule of R^ncols spanned by the returned columns
    (a presentation-free ``ModulePresentation`` whose relations are the
    kernel generators, i.e. the matrix of generators)."""
    R = A.ring
    if row_shifts is None and col_shifts is None:
        degs = infer_degrees(R, A.nrows, A.cols)
        if degs is not None:
            cdeg = _col_degrees(A.cols, degs)
            if all(d is not None for d in cdeg):
                row_shifts, col_shifts = degs, cdeg
    gens = kernel(R, A.cols, A.nrows, row_shifts, col_shifts)
    gens = [g for g in (reduce_vec(R, v) for v in gens) if g]
    if col_shifts is not None:
        gens, _ = minimal_generators(R, gens, col_shifts)
    return ModulePresentation(R, A.ncols, gens, name="ker")


# ---------------------------------------------------------------------------
# complexes


class FreeComplex:
    """A bounded complex of finite free modules, homologically indexed:
    F_i sits in degree i and ``d[i]`` maps F_i -> F_{i-1}."""

    def __init__(self, ring: QuotientRing, bottom: int, ranks, differentials=None, degrees=None, check=True):
        self.ring = ring
        self.bottom = bottom
        self.ranks = list(ranks)
        self.d: dict = {}
        for i, A in (differentials or {}).items():
            if not isinstance(A, Matrix):
                A = Matrix(ring, self.rank(i - 1), A)
            if A.shape != (self.rank(i - 1), self.rank(i)):
                raise ValueError(
                    f"d{i} has shape {A.shape}, expected {(self.rank(i - 1), self.rank(i))}"
                )
            self.d[i] = A
        self.degrees = degrees  # optional {i: [generator degrees]}
        if check:
            self.check_dd()

    @property
    def top(self) -> int:
        return self.bottom + len(self.ranks) - 1

    def rank(self, i: int) -> int:
        k = i - self.bottom
        if 0 <= k < len(self.ranks):
            return self.ranks[k]
        return 0

    def diff(self, i: int) -> Matrix:
        A = self.d.get(i)
        if A is None:
            return Matrix.zero(self.ring, self.rank(i - 1), self.rank(i))
        return A

    def degrees_at(self, i):
        if self.degrees is None:
            return None
        return self.degrees.get(i)

    def check_dd(self):
        for i in range(self.bottom + 1, self.top + 1):
            if self.rank(i - 2) == 0 or self.rank(i) == 0:
                continue
            if not (self.diff(i - 1) @ self.diff(i)).is_zero():
                raise ValueError(f"d{i - 1} . d{i} != 0")

    def dd_zero(self) -> bool:
        try:
            self.check_dd()
        except ValueError:
            return False
        return True

    def infer_grading(self):
        """Degrees for all free modules making the differentials homogeneous
        of degree 0, or None."""
        if self.degrees is not None:
            return self.degrees
        R = self.ring
        degs = {}
        prev = None
        for i in range(self.bottom, self.top + 1):
            r = self.rank(i)
            if i == self.bottom:
                prev = [0] * r
                degs[i] = prev
                continue
            A = self.diff(i)
            rows_deg = infer_degrees(R, A.nrows, A.cols, fixed=prev)
            if rows_deg is None or rows_deg != prev:
                return None
            cd = _col_degrees(A.cols, prev)
            # zero columns: any degree works, pick 0
            cur = [x if x is not None else 0 for x in cd]
            degs[i] = cur
            prev = cur
        self.degrees = degs
        return degs

    def shift(self, k: int) -> "FreeComplex":
        """Sigma^k: the same complex moved up by k (differential signs (-1)^k)."""
        sign = -1 if k % 2 else 1
        p = self.ring.field.characteristic
        d = {}
        for i, A in self.d.items():
            cols = [{t: (sign * x) % p if p else sign * x for t, x in c.items()} for c in A.cols]
            d[i + k] = Matrix(self.ring, A.nrows, cols)
        return FreeComplex(self.ring, self.bottom + k, self.ranks, d, check=False)

    def tensor_quotient(self, R2: QuotientRing) -> "FreeComplex":
        """R2 (x) F for a quotient ring R2 of the same ambient ring."""
        d = {i: A.mod(R2) for i, A in self.d.items()}
        return FreeComplex(R2, self.bottom, self.ranks, d, self.degrees, check=False)

    def __repr__(self):
        return f"FreeComplex(bottom={self.bottom}, ranks={self.ranks})"

    @classmethod
    def from_module(cls, M: ModulePresentation) -> "FreeComplex":
        """M = coker(R^c -> R^g) as the complex F_1 -> F_0 (its homology is
        M in degree 0 only when the relations are independent; used for
        presentations, not as a resolution)."""
        A = M.matrix
        return cls(M.ring, 0, [M.rank, A.ncols], {1: A})


def minimize(F: FreeComplex) -> FreeComplex:
    """Cancel unit entries (Gaussian elimination on the complex) until every
    differential has entries in the maximal ideal."""
    R = F.ring
    p = R.field.characteristic
    z = R.ambient.zero_mono
    ranks = {i: F.rank(i) for i in range(F.bottom, F.top + 1)}
    d = {i: [dict(c) for c in F.diff(i).cols] for i in range(F.bottom + 1, F.top + 1)}
    degs = dict(F.degrees) if F.degrees else None
    changed = True
    while changed:
        changed = False
        for i in sorted(d):
            cols = d[i]
            hit = None
            for j, col in enumerate(cols):
                for (r, m), x in col.items():
                    if m == z:
                        hit = (j, r, x)
                        break
                if hit:
                    break
            if hit is None:
                continue
            j, r, x = hit
            inv = R.field.inv(x)
            pivot = cols[j]
            new_cols = []
            for jj, col in enumerate(cols):
                if jj == j:
                    continue
                coeff_r = {m: y for (rr, m), y in col.items() if rr == r}
                if coeff_r:
                    acc = dict(col)
                    for m, y in coeff_r.items():
                        _vadd(acc, pivot, -y * inv, m, p)
                    col = reduce_vec(R, acc)
                new_cols.append(
                    {(rr - (rr > r), m): y for (rr, m), y in col.items() if rr != r}
                )
            d[i] = new_cols
            # d_{i+1}: drop row j; d_{i-1}: drop column r
            if i + 1 in d:
                d[i + 1] = [
                    {(rr - (rr > j), m): y for (rr, m), y in col.items() if rr != j}
                    for col in d[i + 1]
                ]
            if i - 1 in d:
                del d[i - 1][r]
            ranks[i] -= 1
            ranks[i - 1] -= 1
            if degs:
                degs[i] = [g for k, g in enumerate(degs[i]) if k != j]
                degs[i - 1] = [g for k, g in enumerate(degs[i - 1]) if k != r]
            changed = True
            break
    out_ranks = [ranks[i] for i in range(F.bottom, F.top + 1)]
    mats = {i: Matrix(R, ranks[i - 1], cols) for i, cols in d.items()}
    return FreeComplex(R, F.bottom, out_ranks, mats, degs, check=False)


# ---------------------------------------------------------------------------
# homology


def _project(vecs, count):
    out = []
    for v in vecs:
        w = {(c, m): x for (c, m), x in v.items() if c < count}
        out.append(w)
    return out


def _combine_cols(R, gens, coeffs_vec, nrows):
    """Sum_k coeffs[k] * gens[k] for a coefficient vector over R."""
    p = R.field.characteristic
    acc: dict = {}
    for (k, m), x in coeffs_vec.items():
        _vadd(acc, gens[k], x, m, p)
    return reduce_vec(R, acc)


def subquotient_homology(
    R: QuotientRing,
    rank: int,
    out_map: Matrix = None,
    target_rel=(),
    in_map: Matrix = None,
    own_rel=(),
    shifts=None,
    target_shifts=None,
) -> ModulePresentation:
    """Homology at G = R^rank of  G_in --in_map--> G --out_map--> G_out,
    where G and G_out carry relation submodules ``own_rel`` and
    ``target_rel`` (the terms are the cokernels). Returns

        {z in G : out_map z in target_rel} / (own_rel + im in_map)

    presented on the kernel generators, then pruned.
    """
    # cycles
    if out_map is None or out_map.nrows == 0:
        z0 = R.ambient.zero_mono
        one = R.field.one()
        Z = [{(j, z0): one} for j in range(rank)]
    else:
        cols = list(out_map.cols) + [dict(c) for c in target_rel]
        tsh = None
        csh = None
        if shifts is not None and target_shifts is not None:
            tsh = list(target_shifts)
            csh = list(shifts) + [vec_degree(c, tsh) if c else 0 for c in target_rel]
        K = kernel(R, cols, out_map.nrows, tsh, csh)
        Z = [v for v in (reduce_vec(R, w) for w in _project(K, rank)) if v]
        if shifts is not None:
            Z, _ = minimal_generators(R, Z, shifts)
    if not Z:
        return ModulePresentation(R, 0, [], degrees=[], name="H")
    zdeg = [vec_degree(v, shifts) for v in Z] if shifts is not None else None
    # boundaries and own relations, expressed in terms of Z
    bcols = []
    if in_map is not None:
        bcols += [c for c in in_map.cols if c]
    bcols += [dict(c) for c in own_rel if c]
    # relations among the cycles themselves are needed even without boundaries
    csh = None
    if zdeg is not None:
        csh = list(zdeg) + [vec_degree(c, shifts) for c in bcols]
    K = kernel(R, Z + bcols, rank, shifts, csh)
    rel = [v for v in (reduce_vec(R, w) for w in _project(K, len(Z))) if v]
    nr, rel, rows = prune(R, len(Z), rel)
    degs = [zdeg[r] for r in rows] if zdeg is not None else None
    if degs is not None and rel:
        rel, _ = minimal_generators(R, rel, degs)
    H = ModulePresentation(R, nr, rel, degrees=degs, name="H")
    H.cycle_gens = [Z[r] for r in rows]
    return H


def homology_at(F: FreeComplex, i: int) -> ModulePresentation:
    """H_i(F) = ker d_i / im d_{i+1}, as a finitely presented module."""
    R = F.ring
    r = F.rank(i)
    if r == 0:
        return ModulePresentation(R, 0, [], degrees=[], name="H")
    degs = F.infer_grading()
    shifts = degs.get(i) if degs else None
    tshifts = degs.get(i - 1) if degs else None
    out_map = F.diff(i) if F.rank(i - 1) else None
    in_map = F.diff(i + 1) if F.rank(i + 1) else None
    return subquotient_homology(
        R, r, out_map, (), in_map, (), shifts=shifts,
        target_shifts=tshifts if tshifts is not None else None,
    )


def sup_inf_homology(F: FreeComplex):
    """(inf, sup) of the degrees with nonzero homology, or EMPTY."""
    nz = [i for i in range(F.bottom, F.top + 1) if not homology_at(F, i).is_zero()]
    if not nz:
        return EMPTY
    return (min(nz), max(nz))


# ---------------------------------------------------------------------------
# resolutions


@dataclass
class Resolution:
    """Minimal free resolution F_0 <- F_1 <- ... <- F_bound of a module.

    ``complex`` holds F_0..F_bound; ``top_syzygies`` are generators (not
    necessarily minimal) of ker d_bound, the image of the next differential.
    """

    module: ModulePresentation
    complex: FreeComplex
    bound: int
    minimal: bool = True
    top_syzygies: list = field(default_factory=list)
    terminated: bool = False

    @property
    def length_computed(self) -> int:
        return self.bound

    @property
    def betti(self) -> list[int]:
        return [self.complex.rank(i) for i in range(self.bound + 1)]

    @property
    def degrees(self):
        return self.complex.degrees

    def graded_betti(self) -> dict:
        """{(i, j): beta_{i,j}} for the minimal resolution."""
        out: dict = {}
        for i in range(self.bound + 1):
            for dj in self.complex.degrees.get(i, []):
                out[(i, dj)] = out.get((i, dj), 0) + 1
        return out


def free_resolution(M: ModulePresentation, bound: int = 8) -> Resolution:
    """Minimal graded free resolution of M through homological degree
    ``bound``; raises InhomogeneousInput for non-graded data."""
    if bound < 0:
        raise ValueError("bound must be >= 0")
    R = M.ring
    degs0, rel = _minimal_presentation(M)
    ranks = [len(degs0)]
    degrees = {0: list(degs0)}
    d = {}
    prev_cols, prev_deg = rel, degs0
    top = list(rel)
    for i in range(1, bound + 1):
        cur_deg = [vec_degree(c, prev_deg) for c in prev_cols]
        ranks.append(len(prev_cols))
        degrees[i] = cur_deg
        d[i] = Matrix(R, len(prev_deg), prev_cols)
        if not prev_cols:
            for k in range(i + 1, bound + 1):
                ranks.append(0)
                degrees[k] = []
            top = []
            break
        gens = kernel(R, prev_cols, len(prev_deg), prev_deg, cur_deg)
        gens = [g for g in (reduce_vec(R, v) for v in gens) if g]
        if i == bound:
            top = gens
            break
        prev_cols, _ = minimal_generators(R, gens, cur_deg)
        prev_deg = cur_deg
    terminated = not top
    F = FreeComplex(R, 0, ranks[: bound + 1], d, degrees, check=False)
    return Resolution(M, F, bound, True, top, terminated)
