"""Independent reference computations for the test suite.

Everything here works degree by degree with dense linear algebra over F_p
(numpy int64, reduced mod p) on monomial quotient rings, and shares no code
with the Groebner machinery it is used to check.
"""

from __future__ import annotations

from itertools import combinations_with_replacement

import numpy as np


# ---------------------------------------------------------------------------
# dense linear algebra mod p


def row_reduce(A: np.ndarray, p: int):
    """Reduced row echelon form of A mod p; returns (R, pivot columns)."""
    A = np.array(A, dtype=np.int64) % p
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = (A[r] * pow(int(A[r, c]), p - 2, p)) % p
        others = np.nonzero(A[:, c])[0]
        others = others[others != r]
        if others.size:
            A[others] = (A[others] - np.outer(A[others, c], A[r])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank_mod_p(A, p: int) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(row_reduce(A, p)[1])


def nullspace_mod_p(A: np.ndarray, p: int) -> np.ndarray:
    """Basis of {v : A v = 0} as rows."""
    rows, cols = A.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    R, piv = row_reduce(A, p)
    free = [c for c in range(cols) if c not in set(piv)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, pc in enumerate(piv):
            basis[k, pc] = (-R[i, f]) % p
    return basis


def independent_complement(span: np.ndarray, cand: np.ndarray, p: int) -> list[int]:
    """Indices of rows of ``cand`` extending the row space of ``span``."""
    cur = span.copy() if span.size else np.zeros((0, cand.shape[1]), dtype=np.int64)
    r = rank_mod_p(cur, p) if cur.size else 0
    keep = []
    for i in range(cand.shape[0]):
        trial = np.vstack([cur, cand[i:i + 1]])
        rt = rank_mod_p(trial, p)
        if rt > r:
            keep.append(i)
            cur, r = trial, rt
    return keep


# ---------------------------------------------------------------------------
# monomial quotient rings


class MonomialRing:
    """k[x_1..x_n]/(monomials) with the standard grading."""

    def __init__(self, n: int, gens, p: int):
        self.n = n
        self.gens = [tuple(g) for g in gens]
        self.p = p
        self._basis = {}

    def is_zero(self, m) -> bool:
        return any(all(a >= b for a, b in zip(m, g)) for g in self.gens)

    def basis(self, d: int) -> list[tuple]:
        if d < 0:
            return []
        if d not in self._basis:
            out = []
            for combo in combinations_with_replacement(range(self.n), d):
                e = [0] * self.n
                for i in combo:
                    e[i] += 1
                e = tuple(e)
                if not self.is_zero(e):
                    out.append(e)
            self._basis[d] = sorted(out)
        return self._basis[d]

    def hilbert(self, d: int) -> int:
        return len(self.basis(d))


def _mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


class GradedFree:
    """A graded free module over a MonomialRing with a fixed basis per degree."""

    def __init__(self, R: MonomialRing, degs):
        self.R = R
        self.degs = list(degs)
        self._index = {}

    def basis(self, j: int):
        if j not in self._index:
            items = [(g, m) for g, a in enumerate(self.degs) for m in self.R.basis(j - a)]
            self._index[j] = (items, {t: k for k, t in enumerate(items)})
        return self._index[j][0]

    def index(self, j: int):
        self.basis(j)
        return self._index[j][1]

    def vec(self, j: int, terms: dict) -> np.ndarray:
        """Dense vector in degree j from {(g, m): c}; zero monomials dropped."""
        idx = self.index(j)
        v = np.zeros(len(idx), dtype=np.int64)
        for (g, m), c in terms.items():
            if self.R.is_zero(m):
                continue
            v[idx[(g, m)]] = (v[idx[(g, m)]] + c) % self.R.p
        return v

    def times_mono(self, j: int, v: np.ndarray, mono) -> tuple[int, np.ndarray]:
        d = sum(mono)
        out = np.zeros(len(self.basis(j + d)), dtype=np.int64)
        idx = self.index(j + d)
        for k, (g, m) in enumerate(self.basis(j)):
            if v[k]:
                mm = _mul(m, mono)
                if not self.R.is_zero(mm):
                    out[idx[(g, mm)]] = (out[idx[(g, mm)]] + v[k]) % self.R.p
        return j + d, out


def _unit(n, i):
    e = [0] * n
    e[i] = 1
    return tuple(e)


def _submodule_span(F: GradedFree, gens, j: int) -> np.ndarray:
    """Rows spanning the degree j part of the submodule generated by
    ``gens`` = [(degree, dense vector in F_degree)]."""
    rows = []
    R = F.R
    for a, v in gens:
        for m in R.basis(j - a) if j >= a else []:
            rows.append(F.times_mono(a, v, m)[1])
    if not rows:
        return np.zeros((0, len(F.basis(j))), dtype=np.int64)
    return np.array(rows, dtype=np.int64)


def truncated_betti(R: MonomialRing, degs, relations, nhom: int, maxdeg: int) -> dict:
    """Graded Betti numbers beta_{i,j} of coker(relations) for i <= nhom and
    internal degree j <= maxdeg.

    ``relations`` is a list of dicts {(row, exponent tuple): coeff}, each
    homogeneous for the generator degrees ``degs``. The minimal resolution
    is built one internal degree at a time: in degree j the new generators
    of F_{i+1} are a complement of m*K_i inside K_i = ker(F_i -> F_{i-1}).
    """
    p = R.p
    W = GradedFree(R, degs)
    rel_gens = []
    for c in relations:
        j = {sum(m) + degs[r] for (r, m) in c}
        assert len(j) == 1, "relation not homogeneous"
        j = j.pop()
        rel_gens.append((j, W.vec(j, c)))
    gen_vecs = [(a, W.vec(a, {(g, (0,) * R.n): 1})) for g, a in enumerate(degs)]

    betti = {}
    # stage 0: minimal generators of M = W/U among the e_g
    F0_degs, F0_imgs = [], []
    for j in range(min(degs, default=0), maxdeg + 1):
        cands = [v for a, v in gen_vecs if a == j]
        if not cands:
            continue
        U = _submodule_span(W, rel_gens, j)
        mW = _submodule_span(W, [(a, v) for a, v in zip(F0_degs, F0_imgs)], j)
        span = np.vstack([U, mW]) if U.size or mW.size else np.zeros((0, len(W.basis(j))), dtype=np.int64)
        keep = independent_complement(span, np.array(cands), p)
        for k in keep:
            F0_degs.append(j)
            F0_imgs.append(cands[k])
            betti[(0, j)] = betti.get((0, j), 0) + 1

    # kernel of F0 -> W/U in each degree
    prev = GradedFree(R, F0_degs)

    def map_matrix(src: GradedFree, imgs, tgt: GradedFree, j: int) -> np.ndarray:
        cols = []
        for g, m in src.basis(j):
            _, w = tgt.times_mono(src.degs[g], imgs[g], m)
            cols.append(w)
        if not cols:
            return np.zeros((len(tgt.basis(j)), 0), dtype=np.int64)
        return np.array(cols, dtype=np.int64).T

    def kernel0(j):
        A = map_matrix(prev, F0_imgs, W, j)
        U = _submodule_span(W, rel_gens, j)
        if U.shape[0]:
            # kernel of F0_j -> W_j / U_j: solve A x in rowspace(U)
            Ub, _ = row_reduce(U, p)
            big = np.hstack([A, -Ub.T % p]) if Ub.size else A
            ns = nullspace_mod_p(big % p, p)
            return ns[:, : A.shape[1]] if ns.size else np.zeros((0, A.shape[1]), dtype=np.int64)
        return nullspace_mod_p(A, p)

    kernel = kernel0
    imgs_prev = F0_imgs
    for i in range(1, nhom + 1):
        new_degs, new_imgs = [], []
        for j in range(0, maxdeg + 1):
            K = kernel(j)
            K = row_reduce(K, p)[0] if K.size else K
            if not K.shape[0]:
                continue
            mK = []
            for a, v in zip(new_degs, new_imgs):
                for m in R.basis(j - a):
                    mK.append(prev.times_mono(a, v, m)[1])
            mK = np.array(mK, dtype=np.int64) if mK else np.zeros((0, K.shape[1]), dtype=np.int64)
            keep = independent_complement(mK, K, p)
            for k in keep:
                new_degs.append(j)
                new_imgs.append(K[k])
                betti[(i, j)] = betti.get((i, j), 0) + 1
        cur = GradedFree(R, new_degs)
        src_prev, src_imgs = prev, new_imgs

        def kernel(j, cur=cur, src_prev=src_prev, src_imgs=src_imgs):
            A = map_matrix(cur, src_imgs, src_prev, j)
            return nullspace_mod_p(A, p)

        prev, imgs_prev = cur, new_imgs
    return betti


def hilbert_function(R: MonomialRing, degs, relations, j: int) -> int:
    """dim_k (coker relations)_j."""
    W = GradedFree(R, degs)
    rel = []
    for c in relations:
        a = {sum(m) + degs[r] for (r, m) in c}.pop()
        rel.append((a, W.vec(a, c)))
    U = _submodule_span(W, rel, j)
    return len(W.basis(j)) - (rank_mod_p(U, R.p) if U.size else 0)


def socle_dim(R: MonomialRing, j: int) -> int:
    """dim_k of {f in R_j : x_i f = 0 for all i}."""
    B = R.basis(j)
    if not B:
        return 0
    rows = []
    for i in range(R.n):
        tgt = {m: k for k, m in enumerate(R.basis(j + 1))}
        block = np.zeros((len(tgt), len(B)), dtype=np.int64)
        for k, m in enumerate(B):
            mm = _mul(m, _unit(R.n, i))
            if not R.is_zero(mm):
                block[tgt[mm], k] = 1
        rows.append(block)
    A = np.vstack(rows) if rows else np.zeros((0, len(B)), dtype=np.int64)
    return len(B) - rank_mod_p(A, R.p)


def complex_homology_dim(R: MonomialRing, degs: dict, diffs: dict, i: int, j: int) -> int:
    """dim_k H_i(F)_j for a complex of graded free modules: ``degs[i]`` the
    generator degrees of F_i, ``diffs[i]`` the columns of d_i as
    {(row, exponent tuple): coeff} dicts."""
    p = R.p

    def mat(k):
        if k not in diffs or not degs.get(k) or not degs.get(k - 1):
            return None
        src, tgt = GradedFree(R, degs[k]), GradedFree(R, degs[k - 1])
        cols = []
        for g, m in src.basis(j):
            col = {}
            for (r, mm), c in diffs[k][g].items():
                prod = _mul(mm, m)
                col[(r, prod)] = (col.get((r, prod), 0) + c) % p
            cols.append(tgt.vec(j, col))
        if not cols:
            return None
        return np.array(cols, dtype=np.int64).T

    dim = len(GradedFree(R, degs.get(i, [])).basis(j))
    A, B = mat(i), mat(i + 1)
    ra = rank_mod_p(A, p) if A is not None else 0
    rb = rank_mod_p(B, p) if B is not None else 0
    return dim - ra - rb
