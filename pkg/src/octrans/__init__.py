"""Exact truncated operator calculus for operator-valued convolutions.

The package computes, over exact rational scalars and at a finite
truncation order, the transform calculus of operator-valued free,
monotone, conditionally free and conditionally monotone multiplicative
convolutions, together with the twisted-product machinery behind it
(translation operators, # products, e-transforms, crossed products) and
their Hopf-algebraic counterparts on truncated universal envelopes.
Every factorization theorem ships with an independent combinatorial
oracle; all checks are exact equalities of rational tensors.
"""

from .algebra import (AlgElement, BaseAlgebra, alg_mul, algebra_from_json,
                      algebra_from_table, algebra_to_json, diagonal_algebra,
                      scalar_algebra, upper_triangular_algebra)
from .series import (CrossedPair, MultiSeries, OOperator, act,
                     cauchy_inverse, cauchy_product, comp_inverse, compose,
                     crossed_inverse, crossed_mul, crossed_mul_opposite,
                     e_inverse, e_transform, from_scalar_coeffs,
                     geometric_identity_series, identity_series, o_operator,
                     one_series, relative_e, relative_e_inverse,
                     series_from_json, series_to_json, sharp_group, star,
                     star_inverse, star_opposite, zero_series)
from .ncpart import (ColoredWord, CumulantFamily, MixedMomentOracle,
                     NCPartition, VariableData, conditional_cumulants_nc,
                     cumulants_from_moments_nc, enumerate_nc,
                     family_from_k_series, k_series_from_family, kappa_eval,
                     kreweras, make_partition, mixed_moment,
                     moments_from_cumulants_nc, product_moment_series)
from .prob import (OVDistribution, Subordination, TransformPair,
                   conditional_cumulants, conditional_h, conditional_t,
                   conditional_t_inverse, cumulants, cumulants_from_t,
                   distribution_from_cumulants, distribution_from_moments,
                   h_transform, k_from_h, kc_from_hc, moments,
                   multiplicative_convolve, phi_moments_from_pair,
                   subordination, t_transform)
from .envelope import (Envelope, LieAlgebra, LieModule, PBW,
                       end_operad_module, envelope, gl2_triangular_module,
                       lie_algebra_from_constants,
                       lie_module_from_constants)
from .hopf import (EnvMap, antipode_of_twisted, cocycle_from_matrix,
                   compose_maps, conv_inverse, convolve, e_closed_inverse,
                   e_map, exp_sharp, go_extend, sharp, sharp_inverse,
                   sol_map, star_t)
from .fliess import (WordSeries, at_product, feedback, ff_compose, shuffle,
                     star as fliess_star, star_inverse as fliess_star_inverse,
                     wordseries_from_json, wordseries_to_json)

__version__ = "0.1.0"
