"""Shared oracles and small statistical utilities for the test suite."""

import math
from fractions import Fraction

# Number of integer partitions p(0)..p(40) (Euler's function; reference
# enumeration is checked against these hard-coded values).
PARTITION_COUNTS = [
    1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135, 176, 231, 297,
    385, 490, 627, 792, 1002, 1255, 1575, 1958, 2436, 3010, 3718, 4565,
    5604, 6842, 8349, 10143, 12310, 14883, 17977, 21637, 26015, 31185,
    37338,
]

# Fixed "random" positive rational table (frozen once; 10 entries).
RATIONAL_TABLE_10 = [
    Fraction(3, 2), Fraction(5, 7), Fraction(2, 9), Fraction(7, 3),
    Fraction(1, 4), Fraction(9, 5), Fraction(4, 7), Fraction(8, 3),
    Fraction(5, 6), Fraction(11, 8),
]


def harmonic(n: int) -> float:
    return math.fsum(1.0 / k for k in range(1, n + 1))


def harmonic_exact(n: int) -> Fraction:
    return sum(Fraction(1, k) for k in range(1, n + 1))


def rising_factorial(x: Fraction, n: int) -> Fraction:
    out = Fraction(1)
    for i in range(n):
        out *= x + i
    return out


def chi2_gof(observed: dict, probs: dict, total=None) -> float:
    """Pearson statistic of observed masses against exact cell
    probabilities; `total` defaults to the observed total (pass the
    total holding time for occupation measures)."""
    if total is None:
        total = sum(observed.values())
    stat = 0.0
    for key, p in probs.items():
        expected = total * float(p)
        stat += (observed.get(key, 0.0) - expected) ** 2 / expected
    return stat


def chi2_two_sample(counts1: dict, counts2: dict):
    """Two-sample homogeneity statistic; returns (stat, dof)."""
    n1 = sum(counts1.values())
    n2 = sum(counts2.values())
    k1 = math.sqrt(n2 / n1)
    k2 = math.sqrt(n1 / n2)
    stat = 0.0
    cells = 0
    for key in set(counts1) | set(counts2):
        o1 = counts1.get(key, 0)
        o2 = counts2.get(key, 0)
        if o1 + o2 == 0:
            continue
        stat += (k1 * o1 - k2 * o2) ** 2 / (o1 + o2)
        cells += 1
    return stat, cells - 1
