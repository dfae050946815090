import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cfp import compute_cn, ewens, from_config, power_law, rescale, table
from cfp.errors import ConfigError


def test_power_law_examples():
    assert power_law(1).eval_a(5) == 1.0          # j^0
    assert power_law(3).eval_a(4) == 16.0         # 4^2
    assert power_law(3).eval_a_exact(4) == Fraction(16)


def test_ewens_is_beta_over_k():
    f = ewens(2)
    for k in (1, 2, 7):
        assert f.eval_a(k) == 2.0 / k
        assert f.eval_a_exact(k) == Fraction(2, k)


def test_rescale_pointwise():
    assert rescale(power_law(1), 2.0).eval_a(3) == 8.0
    f = power_law(1)
    g = rescale(f, 1.0)
    for j in range(1, 20):
        assert g.eval_a(j) == f.eval_a(j)


def test_rescale_exact_channel():
    g = rescale(ewens(1), 0.5)
    assert g.eval_a_exact(3) == Fraction(1, 8) / 3


def test_noninteger_power_has_no_exact_channel():
    f = power_law(1.5)
    assert f.eval_a_exact(4) is None
    assert not f.has_exact_channel
    assert f.eval_a(4) == pytest.approx(2.0)


def test_constructor_validation():
    with pytest.raises(ConfigError):
        power_law(0)
    with pytest.raises(ConfigError):
        ewens(-1)
    with pytest.raises(ConfigError):
        table([1, 0, 2])
    with pytest.raises(ConfigError):
        rescale(power_law(1), -2)


def test_table_bounds():
    f = table([Fraction(1, 2), Fraction(3)])
    assert f.eval_a(2) == 3.0
    with pytest.raises(IndexError):
        f.eval_a(3)
    with pytest.raises(IndexError):
        f.eval_a(0)


def test_log_eval_array_matches_scalar():
    for f in (power_law(2.5), ewens(3), rescale(power_law(1), 0.5)):
        js = np.arange(1, 30)
        logs = f.log_eval_array(js)
        for j, lv in zip(js, logs):
            assert lv == pytest.approx(math.log(f.eval_a(int(j))), rel=1e-13)


def test_rescale_consistency_cn_scaling():
    # c_N computed from the rescaled family must equal R^N times the
    # original c_N, exactly, for rational scale factors
    for base in (ewens(1), power_law(1), power_law(2)):
        base_seq = compute_cn(base, 30, mode="rational")
        for R in (Fraction(1, 2), Fraction(1), Fraction(2)):
            scaled = rescale(base, R)
            seq = compute_cn(scaled, 30, mode="rational")
            for n in range(31):
                assert seq.rational_values[n] == R ** n * base_seq.rational_values[n]


def test_rescaled_c4_value():
    # c_4 of rescale(ewens(1), 1/2) is (1/2)^4 * 1
    seq = compute_cn(rescale(ewens(1), 0.5), 4, mode="rational")
    assert seq.rational_values[4] == Fraction(1, 16)


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=1, max_value=10 ** 6),
       st.floats(min_value=0.05, max_value=6.0, allow_nan=False))
def test_positivity(j, p):
    assert power_law(p).eval_a(j) > 0
    assert ewens(p).eval_a(j) > 0


def test_from_config():
    f = from_config({"family": "powerlaw", "p": 2})
    assert f.kind == "power_law" and f.p == 2.0
    g = from_config({"family": "rescaled", "R": 0.5, "base": "ewens", "beta": 1})
    assert g.kind == "rescaled" and g.base.kind == "ewens"
    t = from_config({"family": "table", "table": [1, Fraction(1, 2)]})
    assert t.eval_a_exact(2) == Fraction(1, 2)
    with pytest.raises(ConfigError):
        from_config({"family": "nope"})
    with pytest.raises(ConfigError):
        from_config({"family": "ewens"})
