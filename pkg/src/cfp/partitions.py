"""Brute-force oracle over the set of integer partitions of N.

A state is an occupancy vector (n_1, ..., n_N) with sum k*n_k = N: n_k
groups of size k. The equilibrium measure puts mass proportional to
prod_k a_k^{n_k} / n_k! on each state; summing those weights over all
partitions gives the normalizing constant c_N. Everything here is
exhaustive enumeration, intended as an independent check of the
recurrence code for small N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, Tuple, Union

from .errors import CapExceededError, ExactChannelError
from .params import ParameterFunction

DEFAULT_ENUMERATION_CAP = 40

Number = Union[Fraction, float]


@dataclass(frozen=True)
class Partition:
    """A partition of n, stored sparsely as ((size, multiplicity), ...)
    with sizes strictly decreasing. Immutable and hashable."""

    n: int
    parts: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        total = 0
        prev = None
        for size, mult in self.parts:
            if size < 1 or mult < 1:
                raise ValueError(f"invalid part ({size}, {mult})")
            if prev is not None and size >= prev:
                raise ValueError("parts must be strictly decreasing in size")
            prev = size
            total += size * mult
        if total != self.n:
            raise ValueError(f"parts sum to {total}, expected {self.n}")

    @classmethod
    def from_counts(cls, counts) -> "Partition":
        """Build from a dense occupancy vector (n_1, ..., n_N)."""
        parts = tuple((k, int(m)) for k, m in
                      sorted(((i + 1, m) for i, m in enumerate(counts) if m), reverse=True))
        n = sum(size * mult for size, mult in parts)
        return cls(n=n, parts=parts)

    def counts(self) -> Tuple[int, ...]:
        """Dense occupancy vector (n_1, ..., n_n)."""
        dense = [0] * self.n
        for size, mult in self.parts:
            dense[size - 1] = mult
        return tuple(dense)

    def count_of(self, size: int) -> int:
        for s, m in self.parts:
            if s == size:
                return m
        return 0

    def num_groups(self) -> int:
        return sum(m for _, m in self.parts)

    def run_length(self) -> str:
        """Ascending run-length form, e.g. '1^2 3^1' for 1+1+3."""
        return " ".join(f"{size}^{mult}" for size, mult in reversed(self.parts))


def enumerate_partitions(N: int, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[Partition]:
    """Yield all partitions of N, largest-part-first (decreasing lex order).

    The cap keeps exhaustive-oracle usage honest; raise it explicitly via
    the `cap` argument if you really want more than p(40)=37338 states.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if N > cap:
        raise CapExceededError(
            f"N={N} exceeds the enumeration cap {cap}; pass cap={N} to override")

    def rec(remaining: int, max_size: int, acc):
        if remaining == 0:
            yield tuple(acc)
            return
        for size in range(min(remaining, max_size), 0, -1):
            if size == 1:
                acc.append((1, remaining))
                yield tuple(acc)
                acc.pop()
                continue
            for mult in range(remaining // size, 0, -1):
                acc.append((size, mult))
                yield from rec(remaining - size * mult, size - 1, acc)
                acc.pop()

    for parts in rec(N, N, []):
        yield Partition(n=N, parts=parts)


def weight(eta: Partition, f: ParameterFunction, exact: bool = True) -> Number:
    """Unnormalized mass prod_k a_k^{n_k} / n_k! of one state."""
    if exact and f.has_exact_channel:
        w = Fraction(1)
        for size, mult in eta.parts:
            w *= f.eval_a_exact(size) ** mult / math.factorial(mult)
        return w
    w = 1.0
    for size, mult in eta.parts:
        w *= f.eval_a(size) ** mult / math.factorial(mult)
    return w


def c_exact_bruteforce(N: int, f: ParameterFunction, exact: bool = True,
                       cap: int = DEFAULT_ENUMERATION_CAP) -> Number:
    """Normalizing constant c_N by direct summation over all partitions."""
    if exact and not f.has_exact_channel:
        raise ExactChannelError(f"{f.label()} has no exact channel")
    total = Fraction(0) if exact and f.has_exact_channel else 0.0
    for eta in enumerate_partitions(N, cap=cap):
        total += weight(eta, f, exact=exact)
    return total


def mu_exact(N: int, f: ParameterFunction, exact: bool = True,
             cap: int = DEFAULT_ENUMERATION_CAP) -> Dict[Partition, Number]:
    """The full equilibrium measure as {partition: probability}."""
    etas = list(enumerate_partitions(N, cap=cap))
    use_exact = exact and f.has_exact_channel
    weights = [weight(eta, f, exact=use_exact) for eta in etas]
    total = sum(weights)
    return {eta: w / total for eta, w in zip(etas, weights)}
