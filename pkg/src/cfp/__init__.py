"""Partition functions, saddle-point asymptotics, local-limit diagnostics
and equilibrium simulation for reversible merge/split (coagulation-
fragmentation) dynamics on integer partitions."""

from .params import ParameterFunction, ewens, from_config, power_law, rescale, table
from .partitions import Partition, c_exact_bruteforce, enumerate_partitions, mu_exact, weight
from .exact_seq import CnSequence, compute_cn, ratio_table, recurrence_residual
from .saddle import SaddlePoint, gamma_sum_diagnostic, sigma_trend, solve_sigma, tilt_sum
from .llt import (TiltedModel, char_fn, char_fn_log_modulus, integral_T, llt_ratio,
                  lyapunov_ratio, shifted_ratio, split_T, tilted_model, v_n_alpha,
                  y_distribution)
from .asympt import (AsymptoticEstimate, cn_asymptotic, conjecture_check,
                     powerlaw_prediction)
from .stats import (covariance, equilibrium_report, expected_counts,
                    gelation_diagnostic, sample_mu, sample_mu_many, total_groups_mean)
from .sim import (Move, RateKernel, Trajectory, canonical_kernel,
                  detailed_balance_check, kernel_ratio_violation, simulate,
                  state_rates)

__version__ = "0.1.0"

__all__ = [
    "ParameterFunction", "power_law", "ewens", "table", "rescale", "from_config",
    "Partition", "enumerate_partitions", "weight", "c_exact_bruteforce", "mu_exact",
    "CnSequence", "compute_cn", "ratio_table", "recurrence_residual",
    "SaddlePoint", "tilt_sum", "solve_sigma", "gamma_sum_diagnostic", "sigma_trend",
    "TiltedModel", "tilted_model", "y_distribution", "char_fn", "char_fn_log_modulus",
    "integral_T", "split_T", "v_n_alpha", "llt_ratio", "shifted_ratio", "lyapunov_ratio",
    "AsymptoticEstimate", "cn_asymptotic", "powerlaw_prediction", "conjecture_check",
    "expected_counts", "total_groups_mean", "covariance", "gelation_diagnostic",
    "equilibrium_report", "sample_mu", "sample_mu_many",
    "Move", "RateKernel", "canonical_kernel", "kernel_ratio_violation", "state_rates",
    "detailed_balance_check", "simulate", "Trajectory",
    "__version__",
]
