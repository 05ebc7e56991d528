"""Recursive aggregation of estimators by stochastic mirror descent with averaging."""

from .data import (BaseClass, FiniteDistribution, ReplayStream, SampleStream,
                   benchmark_classification, benchmark_regression, decision_rule, draw,
                   load_dataset, stump_basis)
from .engine import (EngineConfig, EngineState, RunResult, Trajectory, eg_step, init, run,
                     sgd_step, step)
from .errors import (DataExhaustedError, DomainError, NumericalError, ParseError, SmdaggError,
                     UnsupportedError, UsageError)
from .harness import (BatchResult, ExperimentConfig, RegretReport, RiskReport, batch_minimizer,
                      exact_gradient, exact_phi_risk, misclassification, noise_check,
                      schedule_bound, regret_diagnostic, regret_violation, run_experiment,
                      theoretical_bound, write_csv)
from .losses import (GeneralLossOracle, LossFunction, SubgradientSample,
                     classification_oracle, classification_subgradient, lipschitz_constant,
                     loss_derivative, loss_value, regression_lipschitz, regression_oracle,
                     regression_subgradient)
from .proxy import (MirrorMapResult, ProxyFunction, entropy_conjugate_value, entropy_hessian,
                    entropy_mirror_map, entropy_proxy, entropy_value, euclidean_proxy,
                    generic_mirror_map, make_proxy, performance_ratio, pnorm_proxy,
                    pnorm_value, power_mirror_map, power_proxy, power_value)
from .simplex import (DualVector, Schedule, Weights, make_schedule_anytime,
                      make_schedule_custom, make_schedule_fixed_horizon, norm_l1, norm_linf,
                      project_simplex)

__version__ = "0.1.0"
