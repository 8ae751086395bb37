"""Exact non-Gorenstein loci of affine toric varieties, Hibi rings and Segre secants."""
from __future__ import annotations

from .cone import Cone, Face, FaceLattice, dualize, face_lattice, faces, quotient_by_lineality, restrict_to_span
from .errors import InputError, InvariantError, ResourceError, ToricLociError
from .gorenstein import (
    AffineSlice,
    LocusReport,
    Monomial,
    contributing_flags,
    f_one,
    face_contributes,
    gorenstein_at_cone,
    in_radical,
    non_gorenstein_locus,
    trace_generators_bounded,
)
from .hibi import (
    CompleteSubset,
    QuotientPoset,
    build_cone,
    complete_subsets,
    formula_locus_report,
    locus_dimension,
    minimal_nongraded_complete,
    quotient_from_face,
    radical_member_mp,
)
from .lattice import IntegerMatrix, hnf, kernel_basis, solve_affine_lattice
from .posets import Poset
from .segre import SegreParams, analyze_secant, closed_form_dimension, pair_face_dimension, verify_secant

__version__ = "0.1.0"

__all__ = [
    "AffineSlice",
    "CompleteSubset",
    "Cone",
    "Face",
    "FaceLattice",
    "InputError",
    "IntegerMatrix",
    "InvariantError",
    "LocusReport",
    "Monomial",
    "Poset",
    "QuotientPoset",
    "ResourceError",
    "SegreParams",
    "ToricLociError",
    "analyze_secant",
    "build_cone",
    "closed_form_dimension",
    "complete_subsets",
    "contributing_flags",
    "dualize",
    "f_one",
    "face_contributes",
    "face_lattice",
    "faces",
    "formula_locus_report",
    "gorenstein_at_cone",
    "hnf",
    "in_radical",
    "kernel_basis",
    "locus_dimension",
    "minimal_nongraded_complete",
    "non_gorenstein_locus",
    "pair_face_dimension",
    "quotient_by_lineality",
    "quotient_from_face",
    "radical_member_mp",
    "restrict_to_span",
    "solve_affine_lattice",
    "trace_generators_bounded",
    "verify_secant",
]
