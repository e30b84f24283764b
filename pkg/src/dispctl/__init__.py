"""Spectral control synthesis and feedback stabilization for linearized
dispersive equations on the torus.

The package works entirely on truncated Fourier coefficients: a dispersion
symbol fixes the diagonal dynamics, a smooth localized actuator profile fixes
the mean-free control operator, and the moment method produces exact steering
controls plus two stabilizing feedback laws with verified decay rates.
"""

from .biortho import (BiorthogonalFamily, biorthogonality_residual,
                      biorthogonalize, frame_bounds, gram_matrix)
from .dynamics import (FEEDBACK_GG_STAR, FEEDBACK_GRAMIAN, FeedbackLaw,
                       TrajectoryReport, build_feedback, closed_loop, duhamel,
                       mean_free_norm, observability_constant, propagate)
from .errors import (AmbiguousClusteringError, ConfigError,
                     CriterionInapplicableError, HypothesisViolation,
                     IllConditionedGramError, SingularClusterError,
                     UnobservableError)
from .moment import (ControlSignal, control_norm, moment_residuals,
                     synthesize)
from .spectral import (ControlShape, FourierField, apply_G, basis_mode,
                       bump_values, diag_lower_bound, field_values, l2_inner,
                       make_bump, mode_numbers, shape_from_json,
                       shape_to_json, sobolev_norm, zero_field)
from .spectrum import (CRITERION_I, CRITERION_II, CRITERION_NONE,
                       SpectrumAnalysis, cluster_spectrum,
                       controllability_time, gap_constants)
from .symbols import (DispersionSymbol, asymptotic_gap_divergence, benjamin,
                      benjamin_ono, custom_table, dgbo, eigenvalue,
                      eigenvalues, eval_symbol, fourth_order_nls,
                      higher_order, kdv, schrodinger, smith,
                      symbol_from_config)

__version__ = "0.1.0"
