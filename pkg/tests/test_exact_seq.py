import math
from fractions import Fraction

import pytest

from cfp import (c_exact_bruteforce, compute_cn, ewens, power_law, ratio_table,
                 recurrence_residual, rescale)
from cfp.errors import ExactChannelError, PrecisionError


def test_boundary_values():
    seq = compute_cn(power_law(2), 1, mode="rational")
    assert seq.rational_values == (Fraction(1), Fraction(1))
    seq0 = compute_cn(ewens(3), 0, mode="rational")
    assert seq0.rational_values == (Fraction(1),)


def test_permutation_family_all_ones():
    seq = compute_cn(ewens(1), 200, mode="rational")
    assert all(x == 1 for x in seq.rational_values)


def test_power_law_small_values():
    seq = compute_cn(power_law(1), 3, mode="rational")
    assert seq.rational_values[2] == Fraction(3, 2)
    assert seq.rational_values[3] == Fraction(13, 6)


def test_ewens2_closed_form():
    # beta = 2 gives the rising factorial (2)_n / n! = n + 1
    seq = compute_cn(ewens(2), 5, mode="rational")
    assert [int(x) for x in seq.rational_values] == [1, 2, 3, 4, 5, 6]


def test_matches_bruteforce_oracle(families):
    for name, f in families.items():
        n_top = min(20, f.max_index or 20)
        seq = compute_cn(f, n_top, mode="rational")
        for N in range(1, n_top + 1):
            assert seq.rational_values[N] == c_exact_bruteforce(N, f), (name, N)


def test_float_mode_agrees_with_rational():
    from cfp.precision import float_context, mpfr_from_fraction

    for f in (ewens(2), power_law(2), power_law(3)):
        r = compute_cn(f, 60, mode="rational")
        x = compute_cn(f, 60, mode="float")
        for n in range(61):
            assert x.log_values[n] == pytest.approx(r.log_values[n], abs=1e-12)
        # the 128-bit value tracks the exact rational far below 1e-30
        with float_context(128):
            exact = mpfr_from_fraction(r.rational_values[60])
            rel = abs(float((x.value(60) - exact) / exact))
        assert rel < 1e-30


def test_rational_mode_log_view_consistent():
    seq = compute_cn(power_law(2), 40, mode="rational")
    for n in (0, 1, 7, 40):
        assert math.exp(seq.log_values[n]) == pytest.approx(float(seq.rational_values[n]), rel=1e-13)


def test_ratio_examples():
    assert all(r == 1.0 for _, r in ratio_table(compute_cn(ewens(1), 30, mode="rational")))

    seq2 = compute_cn(ewens(2), 30, mode="rational")
    for n, r in ratio_table(seq2):
        assert r == pytest.approx((n + 1) / (n + 2), rel=1e-15)

    half = compute_cn(rescale(ewens(1), 0.5), 30, mode="rational")
    for _, r in ratio_table(half):
        assert r == pytest.approx(2.0, rel=1e-15)


def test_positivity_and_residuals():
    for f, p in ((power_law(1), 1), (power_law(2), 2), (power_law(3), 3)):
        seq = compute_cn(f, 2000)
        # spot-check the recurrence defect at 128 bits over a spread of n
        for n in [1, 2, 3, 5, 10, 50, 100, 500, 1000, 1999]:
            assert recurrence_residual(seq, n - 1 if n else 0) <= 1e-20, (p, n)


def test_rejects_bad_inputs():
    with pytest.raises(ExactChannelError):
        compute_cn(power_law(1.5), 5, mode="rational")
    with pytest.raises(PrecisionError):
        compute_cn(power_law(1), 5, precision_bits=40)
    with pytest.raises(ValueError):
        compute_cn(power_law(1), -1)
    with pytest.raises(IndexError):
        # 10-entry tables cannot reach c_11
        from cfp import table
        compute_cn(table([1] * 10), 11, mode="rational")
