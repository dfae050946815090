import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cfp import (Partition, c_exact_bruteforce, enumerate_partitions, ewens,
                 mu_exact, power_law, weight)
from cfp.errors import CapExceededError

from helpers import PARTITION_COUNTS, harmonic_exact, rising_factorial


def test_singleton_space():
    etas = list(enumerate_partitions(1))
    assert len(etas) == 1
    assert etas[0].counts() == (1,)


@pytest.mark.parametrize("N,count", [(4, 5), (6, 11)])
def test_small_counts(N, count):
    assert len(list(enumerate_partitions(N))) == count


def test_counts_match_table_up_to_cap():
    for N in range(1, 41):
        assert sum(1 for _ in enumerate_partitions(N)) == PARTITION_COUNTS[N]


def test_cap_enforced():
    with pytest.raises(CapExceededError):
        list(enumerate_partitions(41))
    # explicit override works
    assert sum(1 for _ in enumerate_partitions(41, cap=41)) == 44583


def test_enumeration_order_is_decreasing_lex():
    seen = [eta.parts for eta in enumerate_partitions(6)]
    # largest-part-first: flatten to descending part lists and compare
    def flat(parts):
        out = []
        for size, mult in parts:
            out.extend([size] * mult)
        return out
    flats = [flat(p) for p in seen]
    assert flats == sorted(flats, reverse=True)
    assert flats[0] == [6]
    assert flats[-1] == [1] * 6


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=1, max_value=28))
def test_partitions_satisfy_mass_constraint(N):
    etas = list(enumerate_partitions(N))
    assert len(etas) == PARTITION_COUNTS[N]
    assert len(set(etas)) == len(etas)
    for eta in etas:
        assert sum(k * m for k, m in eta.parts) == N
        counts = eta.counts()
        assert all(0 <= c <= N for c in counts)


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition(n=3, parts=((2, 1),))
    with pytest.raises(ValueError):
        Partition(n=4, parts=((1, 2), (2, 1)))  # sizes must decrease


def test_run_length_string():
    eta = Partition.from_counts((2, 0, 1))
    assert eta.run_length() == "1^2 3^1"


def test_weight_examples():
    # two singletons under ewens(1): (1/1)^2 / 2!
    eta = Partition.from_counts((2,))
    assert weight(eta, ewens(1)) == Fraction(1, 2)
    # one pair under j^0 weights
    assert weight(Partition.from_counts((0, 1)), power_law(1)) == 1
    # mixed state under ewens(2)
    eta3 = Partition.from_counts((1, 1, 0))
    assert weight(eta3, ewens(2)) == 2


def test_cn_bruteforce_permutation_family():
    for N in range(1, 21):
        assert c_exact_bruteforce(N, ewens(1)) == 1


def test_cn_bruteforce_examples():
    assert c_exact_bruteforce(2, power_law(1)) == Fraction(3, 2)
    # rising-factorial closed form beta(beta+1).../N! for ewens(beta)
    assert c_exact_bruteforce(2, ewens(2)) == 3
    for N in range(1, 9):
        expect = rising_factorial(Fraction(2), N) / math.factorial(N)
        assert c_exact_bruteforce(N, ewens(2)) == expect


def test_mu_exact_sums_to_one_and_examples():
    assert mu_exact(1, ewens(1)) == {Partition.from_counts((1,)): Fraction(1)}

    mu3 = mu_exact(3, ewens(1))
    assert mu3[Partition.from_counts((0, 0, 1))] == Fraction(1, 3)
    assert mu3[Partition.from_counts((1, 1, 0))] == Fraction(1, 2)
    assert mu3[Partition.from_counts((3, 0, 0))] == Fraction(1, 6)

    mu2 = mu_exact(2, power_law(1))
    assert mu2[Partition.from_counts((0, 1))] == Fraction(2, 3)
    assert mu2[Partition.from_counts((2, 0))] == Fraction(1, 3)

    for N in (5, 12):
        for f in (ewens(1), ewens(2), power_law(2)):
            assert sum(mu_exact(N, f).values()) == 1


def test_mu_float_mode_sums_to_one():
    mu = mu_exact(10, power_law(1.5), exact=False)
    assert math.fsum(mu.values()) == pytest.approx(1.0, abs=1e-14)
