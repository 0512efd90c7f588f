"""Early-stopped dual gradient descent for low-complexity linear inverse
problems: solvers, model-consistency analysis, and a synthetic experiment
harness."""

from .analysis import (ConsistencyReport, InsufficientDataError, LocalRateReport,
                       RateNotApplicableError, build_mdgd, consistency_report,
                       error_envelope_check, fit_rate)
from .linops import diff_operator, mask_operator, spectral_norm
from .problems import (ProblemInstance, apply_noise, gen_problem,
                       instance_for_delta, noisy_instance)
from .regularizers import (CertificateReport, GroupL12Norm, L1Norm, ModelDescriptor,
                           NuclearNorm, SingularModelError, TV1DNorm,
                           UnsupportedModelError, check_source_condition,
                           contiguous_groups)
from .solvers import (ConvergenceFailure, DivergenceError, IterateRecord,
                      SolverConfig, Trace, adgd_run, dgd_run, dual_objective,
                      ode_run, solve_noiseless, stopping_schedule)
from .experiments import (ExperimentConfig, build_problem, local_analysis,
                          ode_compare, run_experiment, snr_sweep)

__all__ = [name for name in dir() if not name.startswith("_")]
