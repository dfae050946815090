"""Equilibrium observables and exact sampling of the partition measure.

Group-count moments at equilibrium are ratios of partition-function
values: E n_k = a_k c_{N-k} / c_N, and for k != l

    cov(n_k, n_l) = a_k a_l (c_{N-k-l}/c_N - c_{N-k} c_{N-l} / c_N^2).

Sampling uses the conditional representation: independent Poisson
counts Z_i with means a_i x^i, accepted on the event sum i Z_i = N, are
exactly equilibrium-distributed, for every x > 0 (the tilt x cancels in
the conditional law; x = e^{-sigma_N} maximizes the acceptance rate,
which itself equals Pr(Y = N) of the tilted array).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from .errors import CfpError
from .exact_seq import CnSequence
from .params import ParameterFunction
from .partitions import Partition
from .saddle import solve_sigma

Number = Union[Fraction, float]


def expected_counts(f: ParameterFunction, N: int, seq: CnSequence,
                    exact: bool = False):
    """Vector of E n_k = a_k c_{N-k} / c_N for k = 1..N.

    Float path works in log space (c_N may be astronomically large);
    exact path requires a rational-mode sequence.
    """
    if seq.N < N:
        raise ValueError(f"sequence covers c_0..c_{seq.N}, need c_{N}")
    if exact:
        if seq.rational_values is None:
            raise CfpError("exact expected_counts needs a rational-mode sequence")
        cN = seq.rational_values[N]
        return [f.eval_a_exact(k) * seq.rational_values[N - k] / cN for k in range(1, N + 1)]
    ks = np.arange(1, N + 1, dtype=float)
    log_a = f.log_eval_array(ks)
    log_c = seq.log_values
    return np.exp(log_a + log_c[N - np.arange(1, N + 1)] - log_c[N])


def total_groups_mean(f: ParameterFunction, N: int, seq: CnSequence) -> float:
    """v_N = sum_k a_k c_{N-k} / c_N, the mean number of groups."""
    return float(math.fsum(expected_counts(f, N, seq).tolist()))


def covariance(f: ParameterFunction, N: int, k: int, l: int, seq: CnSequence,
               exact: bool = False) -> Number:
    """cov(n_k, n_l) for distinct sizes with k + l <= N (the formula's
    domain; equal sizes are not covered by it)."""
    if k == l:
        raise ValueError("covariance formula requires k != l")
    if k < 1 or l < 1 or k + l > N:
        raise ValueError(f"need 1 <= k, l and k + l <= N, got k={k}, l={l}, N={N}")
    if seq.N < N:
        raise ValueError(f"sequence covers c_0..c_{seq.N}, need c_{N}")
    if exact:
        if seq.rational_values is None:
            raise CfpError("exact covariance needs a rational-mode sequence")
        c = seq.rational_values
        return f.eval_a_exact(k) * f.eval_a_exact(l) * (c[N - k - l] / c[N] - c[N - k] * c[N - l] / c[N] ** 2)
    lc = seq.log_values
    ak_al = math.exp(math.log(f.eval_a(k)) + math.log(f.eval_a(l)))
    return ak_al * (math.exp(lc[N - k - l] - lc[N])
                    - math.exp(lc[N - k] + lc[N - l] - 2.0 * lc[N]))


def gelation_diagnostic(f: ParameterFunction, N: int, alpha: float,
                        seq: CnSequence) -> float:
    """Growth gap v_N - v_{floor(alpha N) - 1}; a strictly positive limit
    of this gap signals mass escaping to an infinite cluster."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    m = int(math.floor(alpha * N)) - 1
    if int(math.floor(alpha * N)) < 2:
        raise ValueError(f"floor(alpha*N) = {m + 1} < 2: diagnostic degenerate")
    return total_groups_mean(f, N, seq) - total_groups_mean(f, m, seq)


@dataclass(frozen=True)
class EquilibriumReport:
    N: int
    expected: np.ndarray
    v_n: float
    cov_entries: List[Tuple[int, int, float]]


def equilibrium_report(f: ParameterFunction, N: int, seq: CnSequence,
                       pairs: Optional[List[Tuple[int, int]]] = None) -> EquilibriumReport:
    exp_counts = expected_counts(f, N, seq)
    covs = [(k, l, float(covariance(f, N, k, l, seq))) for k, l in (pairs or [])]
    return EquilibriumReport(N=N, expected=exp_counts,
                             v_n=float(math.fsum(exp_counts.tolist())),
                             cov_entries=covs)


# ---------------------------------------------------------------------------
# Exact sampling by Poisson rejection
# ---------------------------------------------------------------------------


class AttemptsExhausted(CfpError):
    def __init__(self, attempts: int, accepted: int):
        self.attempts = attempts
        self.accepted = accepted
        rate = accepted / attempts if attempts else 0.0
        super().__init__(
            f"no acceptance within {attempts} attempts (running rate {rate:.3g})")


def _poisson_means(f: ParameterFunction, N: int, tilt: float) -> np.ndarray:
    ks = np.arange(1, N + 1, dtype=float)
    return np.exp(f.log_eval_array(ks) - tilt * ks)


def sample_mu(f: ParameterFunction, N: int, tilt: Optional[float] = None,
              seed: Optional[int] = None,
              max_attempts: int = 1_000_000) -> Tuple[Partition, int]:
    """Draw one exact equilibrium partition; returns (partition, attempts)."""
    counts, attempts = sample_mu_many(f, N, 1, tilt=tilt, seed=seed,
                                      max_attempts=max_attempts)
    (eta,) = counts
    return eta, attempts


def sample_mu_many(f: ParameterFunction, N: int, n_samples: int,
                   tilt: Optional[float] = None, seed: Optional[int] = None,
                   max_attempts: int = 100_000_000, batch: int = 8192,
                   replica: int = 0) -> Tuple[Dict[Partition, int], int]:
    """Vectorized rejection sampling; returns ({partition: count}, attempts).

    Deterministic for fixed (seed, replica, batch). Parallel replicas
    should share the master seed and use distinct replica indices: the
    streams are then independent and the merged result does not depend
    on how replicas were scheduled.
    """
    if max_attempts < 1:
        raise ValueError("max_attempts must be >= 1")
    if tilt is None:
        tilt = solve_sigma(f, N).sigma
    lam = _poisson_means(f, N, tilt)
    sizes = np.arange(1, N + 1)
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(replica,)))
    out: Dict[Tuple[int, ...], int] = {}
    accepted = 0
    attempts = 0
    while accepted < n_samples:
        if attempts >= max_attempts:
            raise AttemptsExhausted(attempts, accepted)
        take = min(batch, max_attempts - attempts)
        z = rng.poisson(lam=lam, size=(take, N))
        attempts += take
        mass = z @ sizes
        for row in z[mass == N]:
            key = tuple(int(x) for x in row)
            out[key] = out.get(key, 0) + 1
            accepted += 1
            if accepted == n_samples:
                break
    return ({Partition.from_counts(key): cnt for key, cnt in out.items()}, attempts)
