"""Extended-precision helpers.

Two backends serve different ranges:

* gmpy2 (MPFR) for the coefficient recurrence -- fast C arithmetic, but
  this build saturates at binary exponents around 2^30, which is ample
  for log c_n values (thousands of bits) and nothing more.
* mpmath for tilted-law convolutions -- slower, but exponents are plain
  Python ints, so quantities like exp(-1e13) stay representable.
"""

from fractions import Fraction

import gmpy2
import mpmath

MIN_PRECISION_BITS = 53
DEFAULT_PRECISION_BITS = 128

_EMAX = gmpy2.get_emax_max()
_EMIN = gmpy2.get_emin_min()


def check_precision(bits):
    from .errors import PrecisionError

    if bits < MIN_PRECISION_BITS:
        raise PrecisionError(f"precision_bits must be >= {MIN_PRECISION_BITS}, got {bits}")
    return int(bits)


def float_context(bits):
    """A gmpy2 context at `bits` precision with the widest exponent range.

    Use as a context manager; gmpy2 restores the previous context on exit.
    """
    return gmpy2.context(precision=check_precision(bits), emax=_EMAX, emin=_EMIN)


def mpfr_from_fraction(q):
    """Convert a Fraction under the currently active gmpy2 context."""
    return gmpy2.mpfr(q.numerator) / gmpy2.mpfr(q.denominator)


def to_mpf(x):
    """Lossless conversion of int/Fraction/float/mpf to mpmath.mpf."""
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / mpmath.mpf(x.denominator)
    return mpmath.mpf(x)
