"""Exact calculator for degeneracy-locus classes of vexillary permutations.

The same class is computed three independent ways: a signed sum over
flagged set-valued tableaux, and two determinant formulas whose entries
are Segre coefficients over Z[B], where B is the K-theoretic deformation
parameter (B = 0 recovers cohomology, B = -1 the Grothendieck ring).  A
fourth path generalizes the determinant expansion to an arbitrary formal
group law given by a truncated logarithm.  All paths agree exactly and the
test suite cross-validates them.
"""

from .perms import (Box, FlaggingSet, FlaggingError, NotVexillaryError,
                    Partition, Permutation, all_permutations,
                    canonical_flagging, diagram, enumerate_flaggings,
                    essential_set, is_flagging_set, is_vexillary, length,
                    parse_flagging, parse_permutation, rank, shape,
                    shape_position, vexillary_permutations)
from .poly import (Polynomial, PolynomialError, USeries, WindowError,
                   b, beta, const, determinant, formal_bar, m, one,
                   poly_from_json, poly_to_json, t, useries_coeff,
                   useries_mul, x, zero)
from .ktheory import (DET_VARIANTS, GrothConfig, SetValuedTableau,
                      TruncationError, binomial, det_entry, enumerate_fsvt,
                      groth_det, groth_det_stable, groth_tableau, oplus,
                      segre_coeff, specialize)
from .cobordism import (CobordismSeries, FormalGroupLaw,
                        fgl_exp_inverse, find_flagging_dependence_witness,
                        formal_inverse, p_deformation, p_product_coeffs,
                        projective_class_series, relative_segre,
                        resolution_class, schur_delta, specialize_log_coeffs,
                        w_classes)

__version__ = "1.0.0"
