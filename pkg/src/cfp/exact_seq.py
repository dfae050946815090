"""The coefficient sequence c_0, c_1, ... of exp(sum_j a_j x^j).

The c_n are computed by the convolution recurrence

    c_0 = 1,  c_1 = a_1,
    (n+1) c_{n+1} = sum_{j=0..n} (j+1) a_{j+1} c_{n-j}

either in exact rational arithmetic or in extended-precision floats.
All recurrence terms are positive, so float accumulation is
forward-stable; MPFR's exponent range keeps even log c_n ~ 2000
comfortably in range (hardware doubles would overflow near n ~ 700
for cubic-growth families, hence the extended-precision default).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import gmpy2
import numpy as np

from .errors import ExactChannelError
from .params import ParameterFunction
from .precision import DEFAULT_PRECISION_BITS, float_context, mpfr_from_fraction


@dataclass(frozen=True)
class CnSequence:
    """Immutable c_0..c_N with log-space access.

    In float mode the authoritative values are MPFR numbers at
    ``precision_bits``; ``log_values`` is a float64 view of their logs.
    In rational mode the Fractions are authoritative and the float view
    is derived at the same precision.
    """

    f: ParameterFunction
    N: int
    mode: str  # "rational" | "float"
    precision_bits: int
    log_values: np.ndarray
    rational_values: Optional[Tuple[Fraction, ...]] = None
    _mpfr_values: Optional[tuple] = field(default=None, repr=False)

    def __len__(self) -> int:
        return self.N + 1

    def value(self, n):
        """c_n as Fraction (rational mode) or mpfr (float mode)."""
        if self.rational_values is not None:
            return self.rational_values[n]
        return self._mpfr_values[n]

    def log_value_mp(self, n):
        """log c_n as an mpfr at full working precision."""
        with float_context(self.precision_bits):
            if self.rational_values is not None:
                return gmpy2.log(mpfr_from_fraction(self.rational_values[n]))
            return gmpy2.log(self._mpfr_values[n])

    def ratio(self, n: int) -> float:
        """c_n / c_{n+1} (always finite and positive)."""
        with float_context(self.precision_bits):
            if self.rational_values is not None:
                return float(mpfr_from_fraction(self.rational_values[n] / self.rational_values[n + 1]))
            return float(self._mpfr_values[n] / self._mpfr_values[n + 1])


def compute_cn(f: ParameterFunction, N: int, mode: str = "float",
               precision_bits: int = DEFAULT_PRECISION_BITS) -> CnSequence:
    """Run the recurrence up to c_N."""
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    m = f.max_index
    if m is not None and N > m:
        raise IndexError(f"{f.label()} defines a_1..a_{m}; cannot reach c_{N}")
    if mode == "rational":
        return _compute_rational(f, N, precision_bits)
    if mode == "float":
        return _compute_float(f, N, precision_bits)
    raise ValueError(f"unknown mode {mode!r}")


def _compute_rational(f: ParameterFunction, N: int, precision_bits: int) -> CnSequence:
    if not f.has_exact_channel:
        raise ExactChannelError(f"{f.label()} has no exact channel for rational mode")
    c: List[Fraction] = [Fraction(1)]
    if N >= 1:
        c.append(f.eval_a_exact(1))
    # w[j] = (j+1) a_{j+1}
    w = [(j + 1) * f.eval_a_exact(j + 1) for j in range(N)]
    for n in range(1, N):
        acc = Fraction(0)
        for j in range(n + 1):
            acc += w[j] * c[n - j]
        c.append(acc / (n + 1))
    logs = _rational_logs(c, precision_bits)
    return CnSequence(f=f, N=N, mode="rational", precision_bits=precision_bits,
                      log_values=logs, rational_values=tuple(c))


def _rational_logs(c, precision_bits):
    with float_context(precision_bits):
        return np.array([float(gmpy2.log(mpfr_from_fraction(x))) for x in c])


def _compute_float(f: ParameterFunction, N: int, precision_bits: int) -> CnSequence:
    with float_context(precision_bits):
        one = gmpy2.mpfr(1)
        c = [one]
        if N >= 1:
            c.append(_a_mpfr(f, 1))
        # w[j] = (j+1) a_{j+1}
        w = [gmpy2.mpfr(j + 1) * _a_mpfr(f, j + 1) for j in range(N)]
        for n in range(1, N):
            acc = gmpy2.mpfr(0)
            for j in range(n + 1):
                acc += w[j] * c[n - j]
            c.append(acc / (n + 1))
        logs = np.array([float(gmpy2.log(x)) for x in c])
    return CnSequence(f=f, N=N, mode="float", precision_bits=precision_bits,
                      log_values=logs, _mpfr_values=tuple(c))


def _a_mpfr(f: ParameterFunction, j: int):
    """a_j as mpfr under the active context, exactly when possible."""
    q = f.eval_a_exact(j)
    if q is not None:
        return mpfr_from_fraction(q)
    return gmpy2.exp(gmpy2.mpfr((f.p - 1.0)) * gmpy2.log(j)) if f.kind == "power_law" \
        else gmpy2.mpfr(f.eval_a(j))


def ratio_table(seq: CnSequence) -> List[Tuple[int, float]]:
    """Rows (n, c_n/c_{n+1}) for n = 0..N-1."""
    if len(seq) < 2:
        raise ValueError("need at least c_0 and c_1 for ratios")
    return [(n, seq.ratio(n)) for n in range(seq.N)]


def recurrence_residual(seq: CnSequence, n: int) -> float:
    """Relative defect of the recurrence at step n, recomputed in reverse
    summation order so rounding is probed independently of the forward pass."""
    with float_context(seq.precision_bits):
        if seq.rational_values is not None:
            cs = [mpfr_from_fraction(x) for x in seq.rational_values[: n + 2]]
        else:
            cs = list(seq._mpfr_values[: n + 2])
        acc = gmpy2.mpfr(0)
        for j in range(n, -1, -1):
            acc += gmpy2.mpfr(j + 1) * _a_mpfr(seq.f, j + 1) * cs[n - j]
        lhs = gmpy2.mpfr(n + 1) * cs[n + 1]
        return abs(float((lhs - acc) / lhs))
