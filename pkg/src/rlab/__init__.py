"""Exact commutative algebra for checking rigidity of Tor and Ext against
residue fields, in the graded-local model."""

__version__ = "0.1.0"

from .coeff import GF, QQ, FieldSpec, parse_field
from .polyring import PolyRing, QuotientRing
from .groebner import Ideal, PrimeSpec, krull_dim, height
from .modres import FreeComplex, Matrix, ModulePresentation, free_resolution
from .homology import ext_table, koszul_homology, tor_table
from .invariants import depth, depth_at_prime, inj_dim, invariant_report, proj_flat_dim, width
from .rigidity import (
    check_ab_and_bass,
    check_chouinard,
    check_ext_rigidity_global_maximal,
    check_ext_rigidity_local,
    check_nonvanishing_window,
    check_tor_rigidity,
    gallery_example4,
)
from .session import parse_session, render_session

__all__ = [
    "GF", "QQ", "FieldSpec", "parse_field",
    "PolyRing", "QuotientRing",
    "Ideal", "PrimeSpec", "krull_dim", "height",
    "FreeComplex", "Matrix", "ModulePresentation", "free_resolution",
    "ext_table", "koszul_homology", "tor_table",
    "depth", "depth_at_prime", "inj_dim", "invariant_report", "proj_flat_dim", "width",
    "check_ab_and_bass", "check_chouinard", "check_ext_rigidity_global_maximal",
    "check_ext_rigidity_local", "check_nonvanishing_window", "check_tor_rigidity",
    "gallery_example4",
    "parse_session", "render_session",
]
