"""Continuous-time Markov simulation of merge/split dynamics on partitions.

Groups of sizes i and j merge at rate psi(i,j) per unordered pair, and a
group of size i+j splits into (i,j) at rate phi(i,j). Only the ratio
psi/phi = a_{i+j}/(a_i a_j) is dictated by the equilibrium measure; the
absolute-rate conventions used here (n_i n_j pairs for i < j,
n_i(n_i-1)/2 for i = j, n_{i+j} targets, halved for the equal-half
split) are exactly the ones that make the chain reversible for that
measure, which the rational-arithmetic detailed-balance check proves
for every small N rather than assuming.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from .errors import CfpError
from .params import ParameterFunction
from .partitions import (DEFAULT_ENUMERATION_CAP, Partition, enumerate_partitions,
                         weight)

Number = Union[Fraction, float]


@dataclass(frozen=True)
class Move:
    kind: str  # "coag" | "frag"
    i: int
    j: int


@dataclass(frozen=True)
class RateKernel:
    """Symmetric rate pair; psi(i,j) merges, phi(i,j) splits."""

    psi: Callable[[int, int], Number]
    phi: Callable[[int, int], Number]


def canonical_kernel(f: ParameterFunction, exact: bool = False) -> RateKernel:
    """psi = a_{i+j}, phi = a_i a_j: one admissible choice realizing the
    equilibrium rate ratio."""
    if exact:
        return RateKernel(psi=lambda i, j: f.eval_a_exact(i + j),
                          phi=lambda i, j: f.eval_a_exact(i) * f.eval_a_exact(j))
    return RateKernel(psi=lambda i, j: f.eval_a(i + j),
                      phi=lambda i, j: f.eval_a(i) * f.eval_a(j))


def kernel_ratio_violation(kernel: RateKernel, f: ParameterFunction, N: int) -> float:
    """max over 2 <= i+j <= N of |psi/phi * (a_i a_j / a_{i+j}) - 1|."""
    worst = 0.0
    for i in range(1, N):
        for j in range(i, N - i + 1):
            ratio = kernel.psi(i, j) / kernel.phi(i, j)
            expect = f.eval_a(i + j) / (f.eval_a(i) * f.eval_a(j))
            worst = max(worst, abs(float(ratio / expect) - 1.0))
    return worst


def state_rates(eta: Partition, kernel: RateKernel) -> List[Tuple[Move, Number]]:
    """All strictly positive transition rates out of a state."""
    counts = eta.counts()
    N = eta.n
    out: List[Tuple[Move, Number]] = []
    for i in range(1, N + 1):
        for j in range(i, N - i + 1):
            ni = counts[i - 1]
            nj = counts[j - 1]
            nij = counts[i + j - 1]
            if i == j:
                pairs = ni * (ni - 1) // 2 if ni >= 2 else 0
                targets_halved = True
            else:
                pairs = ni * nj
                targets_halved = False
            if pairs:
                out.append((Move("coag", i, j), kernel.psi(i, j) * pairs))
            if nij:
                r = kernel.phi(i, j) * nij
                if targets_halved:
                    r = r / 2
                out.append((Move("frag", i, j), r))
    return out


def apply_move(eta: Partition, move: Move) -> Partition:
    counts = list(eta.counts())
    i, j = move.i, move.j
    if move.kind == "coag":
        counts[i - 1] -= 1
        counts[j - 1] -= 1
        counts[i + j - 1] += 1
    elif move.kind == "frag":
        counts[i + j - 1] -= 1
        counts[i - 1] += 1
        counts[j - 1] += 1
    else:
        raise ValueError(f"unknown move kind {move.kind!r}")
    if min(counts) < 0:
        raise CfpError(f"move {move} not applicable in state {eta.run_length()}")
    return Partition.from_counts(counts)


def detailed_balance_check(f: ParameterFunction, N: int,
                           kernel: Optional[RateKernel] = None,
                           exact: bool = True,
                           cap: int = DEFAULT_ENUMERATION_CAP) -> Number:
    """max over connected ordered pairs of the relative defect
    |w(eta) q(eta,eta') - w(eta') q(eta',eta)| / max(...); exactly zero
    (as a Fraction) for the canonical kernel in exact mode."""
    if kernel is None:
        kernel = canonical_kernel(f, exact=exact)
    states = list(enumerate_partitions(N, cap=cap))
    weights = {eta: weight(eta, f, exact=exact) for eta in states}
    reverse = {"coag": "frag", "frag": "coag"}
    worst: Number = Fraction(0) if exact else 0.0
    for eta in states:
        w = weights[eta]
        for move, rate in state_rates(eta, kernel):
            target = apply_move(eta, move)
            back = Move(reverse[move.kind], move.i, move.j)
            back_rate = dict(state_rates(target, kernel)).get(back, 0)
            flux = w * rate
            flux_back = weights[target] * back_rate
            denom = max(flux, flux_back)
            defect = abs(flux - flux_back) / denom
            if defect > worst:
                worst = defect
    return worst


@dataclass
class Trajectory:
    initial: Partition
    occupation: Dict[Partition, float]
    total_time: float
    n_events: int
    events: List[Tuple[float, Move]] = field(default_factory=list)

    def occupation_fractions(self) -> Dict[Partition, float]:
        return {eta: t / self.total_time for eta, t in self.occupation.items()}


def simulate(f: ParameterFunction, N: int, *, events: Optional[int] = None,
             t_max: Optional[float] = None, seed: Optional[int] = None,
             kernel: Optional[RateKernel] = None,
             initial: Optional[Partition] = None,
             record_events: bool = False,
             replica: int = 0) -> Trajectory:
    """Exact event-driven simulation (exponential holding times, moves
    chosen proportionally to rate). Occupation is holding-time weighted,
    matching the invariant measure of the continuous-time chain.
    """
    if events is None and t_max is None:
        raise ValueError("give an event cap or a time horizon")
    if events is not None and events < 1:
        raise ValueError("event cap must be >= 1")
    if t_max is not None and t_max <= 0:
        raise ValueError("time horizon must be positive")
    if kernel is None:
        kernel = canonical_kernel(f, exact=False)
    if initial is None:
        initial = Partition(n=N, parts=((1, N),))
    if initial.n != N:
        raise ValueError(f"initial state has mass {initial.n}, expected {N}")

    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(replica,)))
    # per-state move table, cached: states revisit constantly for small N
    cache: Dict[Partition, Tuple[list, np.ndarray, float]] = {}

    def tables(eta: Partition):
        hit = cache.get(eta)
        if hit is None:
            mv = state_rates(eta, kernel)
            rates = np.array([float(r) for _, r in mv])
            cum = np.cumsum(rates)
            hit = (mv, cum, float(cum[-1]) if len(mv) else 0.0)
            cache[eta] = hit
        return hit

    state = initial
    occupation: Dict[Partition, float] = {}
    log: List[Tuple[float, Move]] = []
    t = 0.0
    n_done = 0
    block = 65536
    exp_buf = rng.exponential(size=block)
    u_buf = rng.random(size=block)
    buf_i = 0
    while True:
        if events is not None and n_done >= events:
            break
        mv, cum, total = tables(state)
        if total == 0.0:  # single-state space (N = 1): nothing ever moves
            if t_max is not None:
                occupation[state] = occupation.get(state, 0.0) + (t_max - t)
                t = t_max
            break
        if buf_i == block:
            exp_buf = rng.exponential(size=block)
            u_buf = rng.random(size=block)
            buf_i = 0
        dt = exp_buf[buf_i] / total
        if t_max is not None and t + dt > t_max:
            occupation[state] = occupation.get(state, 0.0) + (t_max - t)
            t = t_max
            break
        occupation[state] = occupation.get(state, 0.0) + dt
        t += dt
        k = int(np.searchsorted(cum, u_buf[buf_i] * total, side="right"))
        k = min(k, len(mv) - 1)
        buf_i += 1
        move = mv[k][0]
        if record_events:
            log.append((t, move))
        state = apply_move(state, move)
        n_done += 1
    return Trajectory(initial=initial, occupation=occupation, total_time=t,
                      n_events=n_done, events=log)
