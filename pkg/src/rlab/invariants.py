"""Depth, width, dimension and homological dimensions in the graded-local
model (R standard graded, maximal ideal generated by the variables)."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .groebner import Ideal, PrimeSpec, annihilator, krull_dim
from .homology import (
    BoundTooSmall,
    ext_table,
    koszul_homology,
    localized_vanishing,
    tor_table,
)
from .modres import EMPTY, FreeComplex, InhomogeneousInput, ModulePresentation, free_resolution, sup_inf_homology
from .polyring import QuotientRing

__all__ = [
    "INF",
    "AtLeast",
    "ZeroModule",
    "InvariantReport",
    "maximal_prime",
    "depth",
    "depth_at_prime",
    "depth_ext",
    "width",
    "dim_module",
    "proj_flat_dim",
    "inj_dim",
    "homology_bounds",
    "invariant_report",
    "fmt_value",
]

INF = math.inf


class ZeroModule(ValueError):
    pass


@dataclass(frozen=True)
class AtLeast:
    """A lower bound certificate, used where a computation ran out of room."""

    bound: int

    def __str__(self):
        return f">={self.bound}"


def fmt_value(v):
    """JSON-friendly rendering of integers, infinities and lower bounds."""
    if isinstance(v, AtLeast):
        return str(v)
    if v == INF:
        return "inf"
    if v == -INF:
        return "-inf"
    return v


def maximal_prime(R: QuotientRing) -> PrimeSpec:
    cache = getattr(R, "_max_prime", None)
    if cache is None:
        cache = PrimeSpec(Ideal(R, R.ambient.gens()), name="m")
        R._max_prime = cache
    return cache


def _ring(M):
    return M.ring


def _as_ideal(a, R):
    if a is None:
        return maximal_prime(R).ideal
    if isinstance(a, PrimeSpec):
        return a.ideal
    return a


def depth(a, M) -> int | float:
    """c - sup{j : H_j(K(a) (x) M) != 0} for the c generators of a, or INF
    when all Koszul homology vanishes."""
    R = _ring(M)
    I = _as_ideal(a, R)
    gens = list(I.generators)
    if not gens:
        # the zero ideal: depth is -sup H(M)
        return _zero_ideal_depth(M)
    H = koszul_homology(gens, M, R)
    nz = [j for j, h in H.items() if not h.is_zero()]
    if not nz:
        return INF
    return len(gens) - max(nz)


def _zero_ideal_depth(M):
    if isinstance(M, ModulePresentation):
        return INF if M.is_zero() else 0
    b = sup_inf_homology(M)
    return INF if b == EMPTY else -b[1]


def depth_at_prime(M, p: PrimeSpec) -> int | float:
    """depth of M_p over R_p: Koszul homology on generators of p, each
    module tested for vanishing after localization at p."""
    R = _ring(M)
    gens = list(p.ideal.generators)
    if not gens:
        if isinstance(M, ModulePresentation):
            return INF if localized_vanishing(M, p) else 0
        nz = [
            i for i in range(M.bottom, M.top + 1)
            if not localized_vanishing(_homology(M, i), p)
        ]
        return INF if not nz else -max(nz)
    if p.is_maximal_graded():
        return depth(p.ideal, M)
    H = koszul_homology(gens, M, R)
    nz = [j for j, h in H.items() if not localized_vanishing(h, p)]
    if not nz:
        return INF
    return len(gens) - max(nz)


def _homology(F, i):
    from .modres import homology_at

    return homology_at(F, i)


def depth_ext(M, bound: int = 8):
    """inf{i : Ext^i(k, M) != 0} for i <= bound, else AtLeast(bound + 1)."""
    R = _ring(M)
    E = ext_table(M, maximal_prime(R), bound)
    for i in range(bound + 1):
        if E.mu(i):
            return i
    return AtLeast(bound + 1)


def width(M, p: PrimeSpec = None, bound: int = 8):
    """inf{i : t_i(p) != 0} from the Tor table, else AtLeast(bound)."""
    R = _ring(M)
    p = p or maximal_prime(R)
    T = tor_table(M, p, bound)
    first = T.first_nonzero()
    if first is None:
        return AtLeast(bound)
    return first


def dim_module(M: ModulePresentation) -> int:
    """Krull dimension of R/Ann(M)."""
    if M.is_zero():
        raise ZeroModule(f"module {M.name} is zero")
    ann = annihilator(M)
    return krull_dim(ann)


def proj_flat_dim(M: ModulePresentation, bound: int = 8):
    """Projective (= flat) dimension from the minimal resolution."""
    M.require_homogeneous()
    res = getattr(M, "_resolution", None)
    if res is None or res.bound != bound:
        res = free_resolution(M, bound)
        M._resolution = res
    b = res.betti
    if b[0] == 0:
        return -INF
    for d in range(bound):
        if b[d + 1] == 0:
            return d
    if res.terminated:
        return bound
    return AtLeast(bound)


def homology_bounds(M):
    """(inf H_*, sup H_*) of a module (0, 0) or free complex; EMPTY if exact."""
    if isinstance(M, ModulePresentation):
        return EMPTY if M.is_zero() else (0, 0)
    return sup_inf_homology(M)


def inj_dim(M, bound: int = 8):
    """Injective dimension at the maximal ideal from the Bass numbers
    mu_i = dim_k Ext^i(k, M), i <= bound. A vanishing mu_n with
    n >= dim R + sup H^*(M) certifies the value by rigidity; otherwise the
    answer is AtLeast(bound)."""
    R = _ring(M)
    if isinstance(M, ModulePresentation):
        M.require_homogeneous()
    elif M.infer_grading() is None:
        raise InhomogeneousInput("complex is not graded")
    dR = krull_dim(R)
    if bound < dR:
        raise BoundTooSmall(f"bound {bound} is below dim R = {dR}")
    hb = homology_bounds(M)
    if hb == EMPTY:
        return -INF
    sup_coh = -hb[0]
    threshold = max(dR + sup_coh, 0)
    E = ext_table(M, maximal_prime(R), bound)
    lo = 0
    if isinstance(M, FreeComplex):
        lo = min(0, -M.top)
    mus = {i: E.mu(i) for i in range(lo, bound + 1)}
    for n in range(threshold, bound + 1):
        if mus[n] == 0:
            nz = [i for i in range(lo, n) if mus[i]]
            return max(nz) if nz else -INF
    return AtLeast(bound)


@dataclass
class InvariantReport:
    depth: object
    width: object
    dim_module: int
    proj_dim: object
    inj_dim: object
    depth_method: str
    bound_used: int
    depth_ext: object = None
    ideal: str = "m"

    def as_dict(self):
        return {
            "depth": fmt_value(self.depth),
            "depth_ext": fmt_value(self.depth_ext) if self.depth_ext is not None else None,
            "depth_method": self.depth_method,
            "width": fmt_value(self.width),
            "dim_module": fmt_value(self.dim_module),
            "proj_dim": fmt_value(self.proj_dim),
            "inj_dim": fmt_value(self.inj_dim),
            "bound_used": self.bound_used,
            "ideal": self.ideal,
        }


def invariant_report(M: ModulePresentation, a: Ideal = None, bound: int = 8, both: bool = True) -> InvariantReport:
    """All invariants of a f.g. graded module; depth by Koszul homology, and
    also by Ext when ``both`` (the two must agree)."""
    R = M.ring
    d_k = depth(a, M)
    d_e = None
    method = "koszul"
    if both and a is None:
        d_e = depth_ext(M, bound)
        method = "koszul+ext"
    zero = M.is_zero()
    return InvariantReport(
        depth=d_k,
        width=width(M, None, bound),
        dim_module=-INF if zero else dim_module(M),
        proj_dim=proj_flat_dim(M, bound),
        inj_dim=inj_dim(M, bound) if bound >= krull_dim(R) else AtLeast(0),
        depth_method=method,
        bound_used=bound,
        depth_ext=d_e,
        ideal="m" if a is None else str(a),
    )
