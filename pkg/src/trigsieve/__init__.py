"""Sharp sampling-sum (large sieve) bounds for trigonometric polynomials.

Closed-form constants for sums of |s(x_j)|^p over separated nodes, the
convolution-operator inverse that proves them (reciprocal Fourier series,
folded atomic measure, norm and spectral identities), and an empirical
verifier with campaigns, extremal search, and a CLI.
"""

from .bounds import (BoundReport, Separation, classical_bounds,
                     covering_multiplicity, overlap_count, relaxed_bound,
                     sieve_constant, sieve_constant_exact)
from .errors import (DomainError, FoldConsistencyError, IdentityViolationError,
                     KernelAdmissibilityError, QuadratureConvergenceError,
                     TruncationError, ValidationError)
from .inverse_op import (AtomicMeasure, InversionReport, ReciprocalSeries,
                         build_inverse_measure, check_inversion, convolve,
                         deconvolve, fold_coefficients, measure_fourier,
                         measure_norm, reciprocal_series, reconstruct,
                         spectral_radius)
from .kernels import (Kernel, check_admissible, extremal_kernel,
                      extremal_uhat_value, fourier_coeff, lq_norm,
                      random_kernel)
from .quadrature import QuadratureConfig, integrate, integrate_with_error
from .special import (ExactConstant, cos_power_integral, double_factorial,
                      gamma_fn, half_integer_gamma)
from .trigpoly import (NodeSet, TrigPoly, evaluate, lp_norm, random_poly,
                       separation, sieve_sum)
from .verifier import (CampaignSummary, SearchConfig, VerifyResult,
                       clustered_nodes, compare_bounds, extremal_search,
                       make_nodes, random_campaign, random_separated_nodes,
                       verify_instance, verify_replay)

__version__ = "0.1.0"
