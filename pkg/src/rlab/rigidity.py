"""Rigidity checks for Tor and Ext against residue fields, the dimension
formulas they come with, and the sharpness example.

Every check returns a :class:`RigidityReport`. The verdict VIOLATION means
a proved statement failed on computed data, i.e. a bug somewhere below.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .coeff import FieldSpec, GF
from .groebner import Ideal, PrimeSpec, height, krull_dim
from .homology import ext_table, localized_vanishing, tor_table
from .invariants import (
    INF,
    AtLeast,
    depth,
    depth_at_prime,
    dim_module,
    fmt_value,
    homology_bounds,
    inj_dim,
    maximal_prime,
    proj_flat_dim,
)
from .modres import EMPTY, FreeComplex, Matrix, ModulePresentation, free_resolution
from .polyring import PolyRing, QuotientRing

__all__ = [
    "RigidityReport",
    "NotMaximal",
    "PrimeListIncomplete",
    "VERDICTS",
    "check_tor_rigidity",
    "check_ext_rigidity_local",
    "check_ext_rigidity_global_maximal",
    "check_nonvanishing_window",
    "check_chouinard",
    "check_ab_and_bass",
    "gallery_ring",
    "gallery_example4",
    "Fixture",
    "random_fixture",
    "fixture_corpus",
]

VERDICTS = (
    "rigid-confirmed",
    "no-zero-below-bound",
    "threshold-not-met",
    "VIOLATION",
    "rigid-threshold-sharp",
)


class NotMaximal(ValueError):
    pass


class PrimeListIncomplete(ValueError):
    pass


@dataclass
class RigidityReport:
    theorem_id: str
    threshold: int
    first_zero: int | None
    tail_all_zero: bool
    bound: int
    verdict: str
    values: list = field(default_factory=list)
    formula_lhs: object = None
    formula_rhs: object = None
    extra: dict = field(default_factory=dict)

    @property
    def violation(self) -> bool:
        return self.verdict == "VIOLATION"

    def as_dict(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "threshold": self.threshold,
            "first_zero": self.first_zero,
            "tail_all_zero": self.tail_all_zero,
            "bound": self.bound,
            "verdict": self.verdict,
            "values": [fmt_value(v) for v in self.values],
            "formula_lhs": _fmt(self.formula_lhs),
            "formula_rhs": _fmt(self.formula_rhs),
            "extra": {k: _fmt(v) for k, v in sorted(self.extra.items())},
        }


def _fmt(v):
    if isinstance(v, dict):
        return {str(k): _fmt(x) for k, x in sorted(v.items(), key=lambda kv: str(kv[0]))}
    if isinstance(v, (list, tuple)):
        return [_fmt(x) for x in v]
    if isinstance(v, (int, float, AtLeast)) and not isinstance(v, bool):
        return fmt_value(v)
    return v


def _sup_nonzero(values, start=0):
    nz = [start + i for i, v in enumerate(values) if v]
    return max(nz) if nz else -INF


def _tail(values, threshold, bound):
    """(first zero at index >= threshold, whether all later values vanish)."""
    first = next((n for n in range(max(threshold, 0), bound + 1) if not values[n]), None)
    if first is None:
        return None, False
    return first, all(not values[i] for i in range(first, bound + 1))


def _sup_homology(M) -> int | float:
    hb = homology_bounds(M)
    return -INF if hb == EMPTY else hb[1]


def _inf_homology(M) -> int | float:
    hb = homology_bounds(M)
    return INF if hb == EMPTY else hb[0]


def _height(p: PrimeSpec, mode: str) -> int:
    return height(p).pick(mode)


# ---------------------------------------------------------------------------
# Tor


def check_tor_rigidity(M, p: PrimeSpec, bound: int = 8, height_mode: str = "equidim") -> RigidityReport:
    """Tor_n(k(p), M) = 0 for some n >= dim R_p + sup H_*(M) forces the
    tail to vanish, and then sup Tor = depth R_p - depth M_p."""
    sup_h = _sup_homology(M)
    h = _height(p, height_mode)
    threshold = h + (sup_h if sup_h != -INF else 0)
    T = tor_table(M, p, bound)
    t = T.ranks
    rep = RigidityReport("T1", threshold, None, False, bound, "threshold-not-met", list(t))
    rep.extra["height"] = h
    rep.extra["height_mode"] = height_mode
    rep.extra["prime"] = p.name
    zeros_below = [i for i in range(0, min(threshold, bound + 1)) if not t[i]]
    rep.extra["zeros_below_threshold"] = zeros_below
    if bound < threshold:
        return rep
    first, tail = _tail(t, threshold, bound)
    rep.first_zero, rep.tail_all_zero = first, tail
    if first is None:
        rep.verdict = "no-zero-below-bound"
        return rep
    if not tail:
        rep.verdict = "VIOLATION"
        return rep
    lhs = _sup_nonzero(t)
    rhs = depth_at_prime(ModulePresentation.free(p.ring), p) - depth_at_prime(M, p)
    rep.formula_lhs, rep.formula_rhs = lhs, rhs
    rep.verdict = "rigid-confirmed" if lhs == rhs else "VIOLATION"
    return rep


# ---------------------------------------------------------------------------
# Ext


def _width(M, p, bound):
    t = tor_table(M, p, bound).ranks
    return next((i for i, v in enumerate(t) if v), INF)


def check_ext_rigidity_local(M, p: PrimeSpec, bound: int = 8, height_mode: str = "equidim") -> RigidityReport:
    """Ext^n_{R_p}(k(p), M_p) = 0 for some n >= dim R_p (+ sup H^*(M) for
    complexes) forces the tail to vanish; then
    sup Ext = depth R_p - width M_p."""
    h = _height(p, height_mode)
    inf_h = _inf_homology(M)
    sup_coh = -inf_h if inf_h != INF else 0
    threshold = h + max(sup_coh, 0) if isinstance(M, FreeComplex) else h
    E = ext_table(M, p, bound)
    loc = [E.localized(i) for i in range(bound + 1)]
    values = [E.mu(i) for i in range(bound + 1)] if E.maximal else [int(x) for x in loc]
    rep = RigidityReport("T2", threshold, None, False, bound, "threshold-not-met", values)
    rep.extra["prime"] = p.name
    rep.extra["height"] = h
    if bound < threshold:
        return rep
    first, tail = _tail(loc, threshold, bound)
    rep.first_zero, rep.tail_all_zero = first, tail
    if first is None:
        rep.verdict = "no-zero-below-bound"
        return rep
    if not tail:
        rep.verdict = "VIOLATION"
        return rep
    lhs = _sup_nonzero(loc)
    R = p.ring
    rhs = depth_at_prime(ModulePresentation.free(R), p) - _width(M, p, bound)
    rep.formula_lhs, rep.formula_rhs = lhs, rhs
    rep.verdict = "rigid-confirmed" if lhs == rhs else "VIOLATION"
    return rep


def check_ext_rigidity_global_maximal(M, m: PrimeSpec, bound: int = 8) -> RigidityReport:
    """Global Ext_R(k, M) at the graded maximal ideal, against the
    thresholds 2 dim R and dim R + sup H^*(M)."""
    if not m.is_maximal_graded():
        raise NotMaximal(f"{m.name} is not the maximal ideal of the variables")
    R = m.ring
    dR = krull_dim(R)
    inf_h = _inf_homology(M)
    sup_coh = -inf_h if inf_h != INF else 0
    sharp = dR + sup_coh
    coarse = 2 * dR
    E = ext_table(M, m, bound)
    mu = [E.mu(i) for i in range(bound + 1)]
    rep = RigidityReport("T3max", sharp, None, False, bound, "threshold-not-met", mu)
    results = {}
    worst = None
    for name, thr in (("sharp", sharp), ("two_dim", coarse)):
        if bound < thr:
            results[name] = {"threshold": thr, "verdict": "threshold-not-met"}
            continue
        first, tail = _tail(mu, thr, bound)
        if first is None:
            v = "no-zero-below-bound"
        elif not tail:
            v = "VIOLATION"
        else:
            v = "rigid-confirmed"
        results[name] = {"threshold": thr, "first_zero": first, "verdict": v}
        if v == "VIOLATION":
            worst = "VIOLATION"
    rep.extra["thresholds"] = results
    first, tail = _tail(mu, max(sharp, 0), bound) if bound >= sharp else (None, False)
    rep.first_zero, rep.tail_all_zero = first, tail
    rep.verdict = worst or results["sharp"]["verdict"]
    return rep


def check_nonvanishing_window(M, bound: int = 8) -> RigidityReport:
    """Within [sup H^*(M) + depth R + 1, bound], a vanishing Bass number
    mu_n forces mu_i = 0 for every i of the window below n; equivalently a
    nonzero mu is never followed by a zero inside the window."""
    R = M.ring
    inf_h = _inf_homology(M)
    rep_values = []
    if inf_h == INF:
        return RigidityReport("P34", 0, None, True, bound, "rigid-confirmed", [])
    sup_coh = -inf_h
    dR = depth(None, ModulePresentation.free(R))
    lo = sup_coh + dR + 1
    E = ext_table(M, maximal_prime(R), bound)
    mu = [E.mu(i) for i in range(bound + 1)]
    rep_values = mu
    rep = RigidityReport("P34", lo, None, False, bound, "rigid-confirmed", rep_values)
    window = list(range(max(lo, 0), bound + 1))
    zeros = [n for n in window if mu[n] == 0]
    rep.first_zero = zeros[0] if zeros else None
    rep.tail_all_zero = bool(zeros) and all(mu[i] == 0 for i in range(zeros[0], bound + 1))
    bad = [n for n in zeros if any(mu[i] for i in range(max(lo, 0), n))]
    rep.extra["nonzero_then_zero_at"] = bad
    rep.extra["zero_then_nonzero"] = any(
        mu[a] == 0 and mu[b] != 0 for a in window for b in window if b > a
    )
    if bound < lo:
        rep.verdict = "threshold-not-met"
    elif bad:
        rep.verdict = "VIOLATION"
    return rep


# ---------------------------------------------------------------------------
# Chouinard formulas


def check_chouinard(M, primes, mode: str = "flat", bound: int = 8) -> RigidityReport:
    """flat: proj dim M = max_p (depth R_p - depth M_p);
    injective: inj dim M = max_p (depth R_p - width M_p)."""
    if not primes:
        raise PrimeListIncomplete("no primes supplied")
    R = primes[0].ring
    if not any(p.is_maximal_graded() for p in primes):
        raise PrimeListIncomplete("the prime list must contain the maximal ideal")
    if mode == "flat":
        dim_value = proj_flat_dim(M, bound)
        tid = "CF"
    elif mode == "injective":
        dim_value = inj_dim(M, bound)
        tid = "C57" if isinstance(M, FreeComplex) else "P52"
    else:
        raise ValueError(f"unknown mode {mode!r}")
    rep = RigidityReport(tid, 0, None, False, bound, "threshold-not-met")
    rep.formula_lhs = dim_value
    if isinstance(dim_value, AtLeast):
        rep.extra["reason"] = "dimension not certified finite within the bound"
        return rep
    Rfree = ModulePresentation.free(R)
    per = {}
    for p in primes:
        dRp = depth_at_prime(Rfree, p)
        if mode == "flat":
            other = depth_at_prime(M, p)
        else:
            other = _width(M, p, bound)
            if other == INF and isinstance(M, ModulePresentation) and localized_vanishing(M, p):
                other = INF
        per[p.name] = dRp - other
    best = max(per.values())
    attained = sorted(name for name, v in per.items() if v == best)
    rep.formula_rhs = best
    rep.extra["per_prime"] = per
    rep.extra["attained_at"] = attained
    rep.tail_all_zero = True
    rep.verdict = "rigid-confirmed" if best == dim_value else "VIOLATION"
    return rep


def check_ab_and_bass(M: ModulePresentation, bound: int = 8, which: str = "both") -> RigidityReport:
    """Auslander-Buchsbaum when proj dim is finite, Bass when inj dim is.
    ``which`` restricts to "ab" or "bass"."""
    if which not in ("both", "ab", "bass"):
        raise ValueError(f"unknown selector {which!r}")
    R = M.ring
    m = maximal_prime(R)
    dR = depth(None, ModulePresentation.free(R))
    dM = depth(None, M)
    rep = RigidityReport("BASS" if which == "bass" else "AB", 0, None, True, bound, "rigid-confirmed")
    pd = proj_flat_dim(M, bound)
    ok = True
    checked = []
    if which != "bass" and not isinstance(pd, AtLeast):
        betti = tor_table(M, m, bound).ranks
        sup_tor = _sup_nonzero(betti)
        rep.extra["ab"] = {"depth_M": dM, "depth_R": dR, "sup_tor": sup_tor}
        rep.formula_lhs, rep.formula_rhs = dM, dR - sup_tor
        ok &= dM == dR - sup_tor
        checked.append("AB")
    if which != "ab" and bound >= krull_dim(R):
        idim = inj_dim(M, bound)
        if not isinstance(idim, AtLeast):
            w = _width(M, m, bound)
            E = ext_table(M, m, bound)
            sup_ext = _sup_nonzero([E.mu(i) for i in range(bound + 1)])
            rep.extra["bass"] = {
                "inj_dim": idim,
                "depth_R": dR,
                "width_M": w,
                "sup_ext": sup_ext,
            }
            if M.is_zero():
                ok &= idim == -INF
            else:
                ok &= idim == dR and w == dR - sup_ext
            checked.append("BASS")
    rep.extra["checked"] = checked
    if not checked:
        rep.verdict = "threshold-not-met"
        rep.tail_all_zero = False
    elif not ok:
        rep.verdict = "VIOLATION"
    return rep


# ---------------------------------------------------------------------------
# the sharpness example


def gallery_ring(d: int, field: FieldSpec = None) -> QuotientRing:
    """k[x_1..x_{d+1}]/(x_1^2, x_1 x_2, ..., x_1 x_{d+1}), standard graded."""
    field = field or GF(101)
    P = PolyRing(field, [f"x{i}" for i in range(1, d + 2)])
    gens = [P.parse(f"x1*x{i}") for i in range(1, d + 2)]
    return QuotientRing(P, gens, name=f"R{d}")


def gallery_example4(d: int, bound: int = None, field: FieldSpec = None) -> RigidityReport:
    """Dimension d, depth 0 ring with the Cohen-Macaulay module N = R/(x_1).
    For M = H^d_m(N) (never built) the identity Tor_i(k, M) = Tor_{i-d}(k, N)
    gives a Tor table vanishing exactly below d although d - 1 < dim R,
    so a zero below the threshold does not propagate."""
    if not 1 <= d <= 3:
        raise ValueError("d must be in 1..3")
    if bound is None:
        bound = d + 8
    if bound < d + 6:
        raise ValueError(f"bound must be at least d + 6 = {d + 6}")
    R = gallery_ring(d, field)
    m = maximal_prime(R)
    N = ModulePresentation.cyclic(R, ["x1"], name="N")
    Rfree = ModulePresentation.free(R, 1, name="R")
    dim_R = krull_dim(R)
    depth_R = depth(None, Rfree)
    depth_N = depth(None, N)
    dim_N = dim_module(N)
    nb = bound - d
    betti = tor_table(N, m, nb).ranks
    shifted = [0] * d + betti  # Tor_i(k, M) for 0 <= i <= bound, via shift identity
    threshold = dim_R
    rep = RigidityReport("E4", threshold, None, False, bound, "rigid-threshold-sharp", shifted)
    first, tail = _tail(shifted, threshold, bound)
    rep.first_zero, rep.tail_all_zero = first, tail
    zeros = [i for i, v in enumerate(shifted) if not v]
    rep.extra.update(
        {
            "d": d,
            "dim_R": dim_R,
            "depth_R": depth_R,
            "depth_N": depth_N,
            "dim_N": dim_N,
            "cohen_macaulay_N": depth_N == dim_N,
            "betti_N": betti,
            "zeros": zeros,
            "method": "via shift identity",
            "field": R.field.name,
        }
    )
    ok = (
        dim_R == d
        and depth_R == 0
        and depth_N == d
        and dim_N == d
        and all(b > 0 for b in betti)
        and zeros == list(range(d))
    )
    if not ok:
        rep.verdict = "VIOLATION"
    return rep


# ---------------------------------------------------------------------------
# random fixtures


@dataclass
class Fixture:
    ident: str
    ring: QuotientRing
    module: ModulePresentation
    prime: PrimeSpec
    seed: int

    def describe(self) -> dict:
        return {
            "id": self.ident,
            "ring": repr(self.ring),
            "module_rank": self.module.rank,
            "relations": [str(c) for c in self.module.matrix.rows()],
            "prime": [str(g) for g in self.prime.ideal.generators],
        }


def _random_monomial(rng, n, deg):
    e = [0] * n
    for _ in range(deg):
        e[rng.randrange(n)] += 1
    return tuple(e)


def _random_ring(rng, field):
    n = rng.randint(1, 4)
    P = PolyRing(field, [f"x{i}" for i in range(1, n + 1)])
    gens = []
    for _ in range(rng.randint(0, min(3, n + 1))):
        deg = rng.choice((2, 2, 3))
        gens.append(P.monomial(_random_monomial(rng, n, deg)))
    return QuotientRing(P, gens, name="R")


def _random_module(rng, R):
    P = R.ambient
    n = R.nvars
    g = rng.randint(1, 3)
    degs = [rng.choice((0, 0, 1)) for _ in range(g)]
    cols = []
    for _ in range(rng.randint(0, 3)):
        cdeg = max(degs) + rng.choice((1, 1, 2))
        col = {}
        for r in range(g):
            if rng.random() < 0.4:
                continue
            k = cdeg - degs[r]
            for _ in range(rng.randint(1, 2)):
                m = _random_monomial(rng, n, k)
                col[(r, m)] = (col.get((r, m), 0) + R.field.random_element(rng, True)) % (
                    R.field.characteristic or 1 << 62
                )
        col = {t: c for t, c in col.items() if c}
        if col:
            cols.append(col)
    return ModulePresentation(R, g, cols, degrees=degs, name="M")


def _random_prime(rng, R):
    """A monomial prime (x_S) containing the defining ideal."""
    n = R.nvars
    leads = [g.lead_mono() for g in R.ideal_gb]
    while True:
        S = [i for i in range(n) if rng.random() < 0.5]
        if all(any(m[i] for i in S) for m in leads):
            break
    P = R.ambient
    gens = [P.gen(i) for i in S]
    name = "(" + ",".join(R.variables[i] for i in S) + ")" if S else "(0)"
    return PrimeSpec(Ideal(R, gens), name=name)


def random_fixture(seed: int, field: FieldSpec = None) -> Fixture:
    rng = random.Random(seed)
    field = field or GF(101)
    R = _random_ring(rng, field)
    M = _random_module(rng, R)
    p = _random_prime(rng, R)
    return Fixture(f"fx{seed:05d}", R, M, p, seed)


def fixture_corpus(count: int = 500, seed: int = 20240601, bound: int = 8, cap: int = 150, field: FieldSpec = None):
    """``count`` seeded fixtures, skipping those whose resolutions (of M,
    of k and of R/p through bound + 1) have a free module of rank > cap.
    Returns (fixtures, number rejected)."""
    out = []
    rejected = 0
    s = seed
    while len(out) < count:
        fx = random_fixture(s, field)
        s += 1
        if fixture_size_ok(fx, bound, cap):
            out.append(fx)
        else:
            rejected += 1
    return out, rejected


def fixture_size_ok(fx: Fixture, bound: int, cap: int) -> bool:
    from .homology import residue_resolution

    R = fx.ring
    for ideal_gens in (R.ambient.gens(), list(fx.prime.ideal.generators)):
        Q = ModulePresentation.cyclic(R, ideal_gens)
        if not _small(Q, bound + 1, cap):
            return False
    return _small(fx.module, bound + 1, cap)


def _small(M, bound, cap) -> bool:
    """Resolve degree by degree, stopping as soon as a rank exceeds cap."""
    for b in range(1, bound + 1):
        res = free_resolution(M, b)
        if max(res.betti) > cap or len(res.top_syzygies) > 4 * cap:
            return False
        if res.terminated:
            return True
    return True
