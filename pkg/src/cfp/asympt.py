"""Saddle-point asymptotics for log c_n and the ratio-limit diagnostics.

The main estimate assembles

    log c_n ~ n sigma_n + sum_j a_j e^{-j sigma_n} - (1/2) log(2 pi B_n^2)

from the tilt solution. For pure power laws a_j = j^(p-1) every
ingredient has a closed form in Gamma functions, giving the explicit
leading constant A(p) = (1 + 1/p) Gamma(p+1)^{1/(p+1)}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

from scipy.special import gammaln

from .exact_seq import CnSequence
from .params import ParameterFunction
from .saddle import solve_sigma, tilt_sum


@dataclass(frozen=True)
class PowerLawPrediction:
    """Closed-form power-law asymptotics at a finite n."""

    p: float
    n: int
    sigma_pred: float
    b2_pred: float
    n_sigma_pred: float
    s_pred: float
    a_p: float
    log_cn_pred: float


def powerlaw_prediction(p: float, n: int) -> PowerLawPrediction:
    """Evaluate the explicit Gamma-function asymptotics for a_j = j^(p-1).

    n*sigma_n is Gamma(p+1)^{1/(p+1)} n^{p/(p+1)}: the n-power follows
    from sigma_n ~ (n/Gamma(p+1))^{-1/(p+1)} and is required for the
    leading constant A(p) below to come out right.
    """
    if p <= 0:
        raise ValueError("p must be positive")
    g1 = math.exp(gammaln(p + 1.0))          # Gamma(p+1)
    g2 = math.exp(gammaln(p + 2.0))          # Gamma(p+2)
    expo = 1.0 / (p + 1.0)
    sigma_pred = (n / g1) ** (-expo)
    b2_pred = (n / g1) ** ((p + 2.0) * expo) * g2
    n_sigma_pred = g1 ** expo * n ** (p * expo)
    s_pred = (1.0 / p) * g1 ** expo * n ** (p * expo)
    a_p = (1.0 + 1.0 / p) * g1 ** expo
    log_cn_pred = (a_p * n ** (p * expo)
                   - 0.5 * math.log(2.0 * math.pi)
                   - (p + 2.0) / (2.0 * p + 2.0) * (math.log(n) - math.log(g1))
                   - 0.5 * math.log(g2))
    return PowerLawPrediction(p=p, n=n, sigma_pred=sigma_pred, b2_pred=b2_pred,
                              n_sigma_pred=n_sigma_pred, s_pred=s_pred, a_p=a_p,
                              log_cn_pred=log_cn_pred)


@dataclass(frozen=True)
class AsymptoticEstimate:
    n: int
    log_cn_est: float
    n_sigma: float
    s_at_tilt: float
    half_log_2pi_b2: float
    family_constants: Optional[PowerLawPrediction] = None


def cn_asymptotic(f: ParameterFunction, n: int, tol: float = 1e-12) -> AsymptoticEstimate:
    """Assemble the saddle-point estimate of log c_n for any family."""
    if n < 2:
        raise ValueError("n must be >= 2")
    sp = solve_sigma(f, n, tol=tol)
    n_sigma = n * sp.sigma
    half_log = 0.5 * math.log(2.0 * math.pi * sp.b2)
    est = n_sigma + sp.s_at_tilt - half_log
    constants = powerlaw_prediction(f.p, n) if f.kind == "power_law" else None
    return AsymptoticEstimate(n=n, log_cn_est=est, n_sigma=n_sigma,
                              s_at_tilt=sp.s_at_tilt, half_log_2pi_b2=half_log,
                              family_constants=constants)


@dataclass(frozen=True)
class ConjectureRow:
    """One comparison row for the successive-coefficient ratio law."""

    n: int
    lhs: float        # c_{n+1} / c_n
    rhs: float        # e^{sigma_n} + a_{n+1} / c_n
    gap: float        # |lhs - rhs| / lhs
    a_over_c: float   # a_n / c_n, which must tend to 0


def conjecture_check(f: ParameterFunction, n_values: Sequence[int],
                     seq: CnSequence, tol: float = 1e-12) -> List[ConjectureRow]:
    """Compare exact successive ratios with the tilt-based prediction.

    seq must cover c_0 .. c_{max(n_values)+1}.
    """
    rows = []
    for n in n_values:
        if n < 3:
            raise ValueError("rows need n >= 3")
        if n + 1 > seq.N:
            raise ValueError(f"sequence too short for n={n}")
        lhs = 1.0 / seq.ratio(n)
        sp = solve_sigma(f, n, tol=tol)
        log_a_next = math.log(f.eval_a(n + 1))
        a_over_c_next = math.exp(log_a_next - seq.log_values[n]) \
            if log_a_next - seq.log_values[n] > -745 else 0.0
        log_a_n = math.log(f.eval_a(n))
        a_over_c = math.exp(log_a_n - seq.log_values[n]) \
            if log_a_n - seq.log_values[n] > -745 else 0.0
        rhs = math.exp(sp.sigma) + a_over_c_next
        rows.append(ConjectureRow(n=n, lhs=lhs, rhs=rhs,
                                  gap=abs(lhs - rhs) / lhs, a_over_c=a_over_c))
    return rows
