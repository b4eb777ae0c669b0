"""entropylab: operator and functional relative entropies, cross-checked.

Two backends compute the same objects: spectral matrix calculus on positive
definite matrices, and discretized convex analysis on 1-D grids. The suites
in entropylab.suites verify every identity and inequality connecting them.
"""
from .matrices import (PDMatrix, SymMatrix, SpectralDecomposition, sym_eig,
                       matrix_fn, congruence, loewner_leq, random_spd,
                       load_matrix, save_matrix, MatrixError,
                       NotPositiveDefiniteError)
from .operator_means import (arithmetic_mean, harmonic_mean, geometric_mean,
                             geometric_mean_integral, gauss_jacobi_unit,
                             check_mean_symmetry, check_agh)
from .operator_entropy import (relative_entropy, relative_entropy_integral,
                               tsallis_entropy, parametric_entropy,
                               parametric_entropy_via_identity, check_identity_routes,
                               check_congruence_property,
                               check_entropy_bounds,
                               check_parametric_sandwich,
                               parametric_entropy_bounds)
from .grids import (ExtendedReal, GridSpec, GridFunctional,
                    QuadraticFunctional, SubdifferentialInterval,
                    conjugate_bruteforce, conjugate_fast, conjugate_at,
                    biconjugate, subdifferential, fenchel_young_check,
                    quadratic_conjugate, sample_quadratic, default_dual_grid,
                    GridError)
from .functional_means import (func_arithmetic, func_harmonic,
                               func_geometric, check_func_symmetry,
                               check_pointwise_order)
from .functional_entropy import (func_relative_entropy, func_tsallis,
                                 func_tsallis_conj, tsallis_conj_at,
                                 func_parametric, check_tsallis_conj_bounds, check_entropy_sandwich,
                                 check_skew_symmetry, check_parametric_sandwich_at,
                                 check_gradient_sandwich)
from .records import (VerificationRecord, SuiteConfig, VerificationReport,
                      TOOL_VERSION)

__version__ = TOOL_VERSION
