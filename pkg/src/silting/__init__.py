"""Exact decision procedures for tau_n-rigid, silting, tau_n-tilting and n-tilting
modules over finite-dimensional quiver algebras, with a brute-force oracle and
a fixture harness."""

from .algebra import Arrow, BasedAlgebra, QuiverPresentation, algebra_from_json, algebra_iso, build_algebra, quotient_algebra
from .complexes import ProjComplex, from_resolution, hom_homotopy, is_presilting, is_silting
from .decisions import (
    check_NAIR34,
    check_p4,
    check_TEO,
    check_compatible_class,
    check_findim_bound,
    check_perp_equals_gen,
    check_perp_routes,
    check_tilting_equivalences,
    is_n_tilting,
    is_tau_n_tilting,
    is_tau_nm_tilting,
    relative_preenvelope,
)
from .decompose import decompose, is_indecomposable, is_iso, isomorphic
from .fixtures import load_pack
from .homology import ext, in_perp_tau_n, is_tau_n_rigid, min_resolution, pd_up_to, tau, tau_n
from .linalg import PrimeField, Rationals, parse_field
from .modules import Module, ModuleMap, direct_sum_module, hom, injective, projective, restrict, simple
from .oracle import EnumerationConfig, classify_tau_n_rigid, enumerate_indecomposables, findim_lower_bound
from .verdict import Outcome, Verdict

__version__ = "0.1.0"
