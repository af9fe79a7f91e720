"""Scattering theory for discrete Schrodinger operators on the half-line.

Jost solutions and the Jost function, phase shifts and Levinson's relation,
stationary wave operators in the spectral representation, their
pseudo-differential form in the rescaled (tanh) energy variable, and the
winding-number version of Levinson's theorem.
"""

from .errors import (AssumptionError, CheckFailure, ConfigError, HalflineError,
                     NumericsError)
from .model import (GridSpec, OffAxisPoint, Potential, SpectralPoint,
                    TridiagonalTruncation, hamiltonian_truncation, make_potential,
                    random_decaying, rank_one, table_potential, zero_potential,
                    zeta_of)
from .solutions import (DecayReport, SolutionSequence, decay_diagnostic,
                        decay_scan, free_regular, jost_at_threshold,
                        jost_solution, regular_solution, volterra_jost)
from .scattering import (ScatteringData, bound_states, classify_thresholds,
                         eta_endpoints, jost_function, levinson_residual,
                         scattering_grid, wronskian)
from .specops import (CorrectionOperator, OperatorMatrix, QuadratureGrid,
                      completeness_defect, correction_operator, cos_sin_coupling,
                      cosine_transform, coupling_pv_matrix, jost_transforms,
                      pv_action_gap, quadrature_grid, scattering_operator,
                      shift_identity_residual, sine_transform,
                      wave_identity_residual, wave_isometry_defect, wave_operator)
from .rescaled import (BetaGrid, SingularReport, b_weight, beta_grid,
                       coupling_symbol_remainder, coupling_symbol_stability,
                       energy_rescale_matrix, hyperbolic_pv_matrix, pdo_composite,
                       pv_kernel_action_gap, rescale_intertwining_defect,
                       shift_identity_check, shift_symbol_composite,
                       wave_symbol_remainder, wave_symbol_stability,
                       weyl_commutation_defect)
from .topology import (BoundaryCurve, WindingReport, assemble_boundary,
                       gamma_curve, index_theorem_check, winding_number,
                       winding_report)

__version__ = "0.1.0"
