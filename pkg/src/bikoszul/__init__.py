"""Bigraded Koszul algebra toolkit.

Exact computations over GF(p) with bigraded polynomial rings: Groebner
bases, graded components, minimal free resolutions, diagonal subalgebras
and strands, symmetric and Rees algebras, and affine semigroup rings.
"""
from .bipoly import (Bidegree, DEFAULT_ORDER, DEFAULT_PRIME, Polynomial, PrimeField,
                     RingPresentation, TermOrder, compare, polarize)
from .constructions import (DiagonalSpec, Offset, diagonal_presentation, index_set_contains,
                            product_algebra, rees_presentation, shift_decompose,
                            strand_betti, strand_linearity_test, strand_module, symmetric_algebra_presentation,
                            theorem32_candidate_basis, theorem32_pipeline)
from .errors import AlgebraError
from .gradedlin import GradedModulePresentation, hilbert_value, standard_monomial_basis
from .groebner import (buchberger, condition_star, eliminate, generic_initial_ideal,
                       initial_ideal, is_groebner_basis, normal_form)
from .resolution import (BettiTable, CertifiedKoszul, CertifiedNonKoszul, KoszulUpTo, betti,
                         koszul_test, linearity_test, regularity, regularity_bound,
                         residue_field_betti, table_linearity)
from .semigroup import AffineSemigroup, cm_scan, semigroup_diagonal, toric_presentation, validate
from .textio import parse_polynomial, parse_ring, parse_semigroup, serialize_ring

__version__ = "0.1.0"


def clear_caches() -> None:
    """Drop every memoized Groebner basis, graded ring and diagonal kernel."""
    from . import bipoly, constructions, gradedlin
    for fn in (bipoly._revlex_key, bipoly._block_key, gradedlin.ring_gb, gradedlin._graded_ring,
               gradedlin._joint_grading, gradedlin._module_space, constructions._diagonal_kernel):
        fn.cache_clear()
