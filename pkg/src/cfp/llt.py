"""The tilted independent array and the lattice point mass Pr(Y = n).

For a tilt sigma, let X_l take values l*k with Poisson(lambda_l) weights
on k, lambda_l = a_l e^{-sigma l}, and Y = X_1 + ... + X_n. Then

    c_n = e^{n sigma} e^{S_n(e^{-sigma})} Pr(Y = n)   for every real sigma,

which turns coefficient asymptotics into a local limit question. This
module provides three independent routes to Pr(Y = n):

* exact truncated convolution (float64 or unbounded-exponent mpmath);
* characteristic-function quadrature: the uniform trapezoid rule over
  one period aliases exactly to sum_{j = target mod M} Pr(Y = j), so a
  Chernoff bound on the tail converts quadrature error into arithmetic;
* the normal local-limit approximation (2 pi B_n^2)^{-1/2}.

plus the central/tail split of the inversion integral and the
distance-to-nearest-integer tail functional used to control |phi| away
from integer frequencies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

import mpmath
import numpy as np
from scipy.integrate import quad
from scipy.special import gammaln

from .errors import CapExceededError, TailBoundError
from .params import ParameterFunction
from .precision import DEFAULT_PRECISION_BITS, to_mpf
from .saddle import SaddlePoint, solve_sigma

Y_SUPPORT_CAP = 20_000
ALIAS_TAIL_LOG10 = -12.0


@dataclass(frozen=True)
class TiltedModel:
    """X_1..X_n with weights lambda_l = a_l e^{-sigma l}; immutable."""

    f: ParameterFunction
    n: int
    sigma: float
    lambdas: np.ndarray  # lambda_1..lambda_n, float64
    saddle: Optional[SaddlePoint] = None

    @property
    def mean(self) -> float:
        """E Y = sum l lambda_l."""
        ls = np.arange(1, self.n + 1, dtype=float)
        return float(math.fsum((ls * self.lambdas).tolist()))


def tilted_model(f: ParameterFunction, n: int, sigma: Optional[float] = None,
                 tol: float = 1e-12) -> TiltedModel:
    """Build the array at a given tilt; sigma=None solves the tilt equation
    so the model carries its saddle point."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    sp = None
    if sigma is None:
        sp = solve_sigma(f, n, tol=tol)
        sigma = sp.sigma
    ls = np.arange(1, n + 1, dtype=float)
    lam = np.exp(f.log_eval_array(ls) - sigma * ls)
    return TiltedModel(f=f, n=n, sigma=float(sigma), lambdas=lam, saddle=sp)


# ---------------------------------------------------------------------------
# Route 1: exact truncated convolution
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class YDistribution:
    """Pr(Y = m) for m = 0..top. Entries are exact up to arithmetic
    rounding: dropping support above `top` cannot disturb smaller
    entries. deficit = 1 - sum(probs) is the invisible tail mass."""

    probs: Union[np.ndarray, list]
    deficit: float
    mode: str

    @property
    def top(self) -> int:
        return len(self.probs) - 1

    def __getitem__(self, m: int):
        return self.probs[m]


def y_distribution(m: TiltedModel, top: Optional[int] = None, mode: str = "double",
                   precision_bits: int = DEFAULT_PRECISION_BITS) -> YDistribution:
    """Convolve the n scaled-Poisson laws onto {0, ..., top}.

    mode="double" is fast vectorized float64 (fine at the saddle tilt,
    where all lambda_l are O(1)); mode="extended" runs mpmath with
    unbounded exponents so strongly negative tilts (huge lambda_l,
    astronomically small masses) stay representable.
    """
    if top is None:
        top = m.n
    if top < 0:
        raise ValueError("top must be >= 0")
    if top > Y_SUPPORT_CAP:
        raise CapExceededError(f"top={top} exceeds the support cap {Y_SUPPORT_CAP}")
    if mode == "double":
        return _convolve_double(m, top)
    if mode == "extended":
        return _convolve_extended(m, top, precision_bits)
    raise ValueError(f"unknown mode {mode!r}")


def _convolve_double(m: TiltedModel, top: int) -> YDistribution:
    v = np.zeros(top + 1)
    v[0] = 1.0
    for l in range(1, m.n + 1):
        lam = float(m.lambdas[l - 1])
        if lam == 0.0:  # underflowed weight: law degenerate at 0 in float64
            continue
        kmax = top // l
        ks = np.arange(kmax + 1)
        w = np.exp(-lam + ks * math.log(lam) - gammaln(ks + 1))
        new = w[0] * v
        for k in range(1, kmax + 1):
            if w[k] == 0.0:  # underflowed: exactly zero contribution in float64
                continue
            new[l * k:] += w[k] * v[: top + 1 - l * k]
        v = new
    deficit = 1.0 - math.fsum(v.tolist())
    return YDistribution(probs=v, deficit=max(deficit, 0.0), mode="double")


def _convolve_extended(m: TiltedModel, top: int, precision_bits: int) -> YDistribution:
    with mpmath.workprec(precision_bits):
        sig = to_mpf(m.sigma)
        v = [mpmath.mpf(0)] * (top + 1)
        v[0] = mpmath.mpf(1)
        for l in range(1, m.n + 1):
            a = m.f.eval_a_exact(l)
            a_mp = to_mpf(a) if a is not None else to_mpf(m.f.eval_a(l))
            lam = a_mp * mpmath.exp(-sig * l)
            kmax = top // l
            w = [mpmath.exp(-lam)]
            for k in range(1, kmax + 1):
                w.append(w[-1] * lam / k)
            new = [w[0] * x for x in v]
            for k in range(1, kmax + 1):
                wk = w[k]
                off = l * k
                for i in range(off, top + 1):
                    new[i] += wk * v[i - off]
            v = new
        deficit = 1 - mpmath.fsum(v)
        return YDistribution(probs=v, deficit=float(max(deficit, mpmath.mpf(0))),
                             mode="extended")


# ---------------------------------------------------------------------------
# Route 2: characteristic function and trapezoid/aliasing quadrature
# ---------------------------------------------------------------------------


def char_fn(m: TiltedModel, alpha) -> complex:
    """phi(alpha) = exp(sum_l lambda_l (e^{2 pi i alpha l} - 1)); period 1."""
    ls = np.arange(1, m.n + 1, dtype=float)
    alpha_arr = np.asarray(alpha, dtype=float)
    z = np.exp(2j * np.pi * np.multiply.outer(alpha_arr, ls)) - 1.0
    out = np.exp(z @ m.lambdas.astype(complex))
    return complex(out) if np.isscalar(alpha) or alpha_arr.ndim == 0 else out


def char_fn_log_modulus(m: TiltedModel, alpha) -> float:
    """log |phi(alpha)| = -2 sum_l lambda_l sin^2(pi alpha l), evaluated
    directly (independent of char_fn; the two are cross-checked in tests)."""
    ls = np.arange(1, m.n + 1, dtype=float)
    alpha_arr = np.asarray(alpha, dtype=float)
    s = np.sin(np.pi * np.multiply.outer(alpha_arr, ls))
    out = -2.0 * (s * s) @ m.lambdas
    return float(out) if np.isscalar(alpha) or alpha_arr.ndim == 0 else out


def chernoff_tail_log10(m: TiltedModel, t: float) -> float:
    """log10 upper bound for Pr(Y >= t) via inf_theta E e^{theta(Y-t)}."""
    ls = np.arange(1, m.n + 1, dtype=float)
    theta_max = 600.0 / m.n  # keeps e^{theta l} in float range
    thetas = np.geomspace(1e-8, theta_max, 256)
    ex = np.expm1(np.outer(thetas, ls)) @ m.lambdas
    bounds = -thetas * t + ex
    return float(bounds.min()) / math.log(10.0)


@dataclass(frozen=True)
class QuadratureMass:
    value: float
    imag_residual: float
    nodes: int
    alias_tail_log10: float


def integral_T(m: TiltedModel, target: int, nodes: Optional[int] = None) -> QuadratureMass:
    """Pr(Y = target) via the uniform trapezoid rule over one period.

    On the M-point uniform grid the rule computes exactly
    sum_{j = target (mod M)} Pr(Y = j), so it equals Pr(Y = target) up
    to the aliased tail Pr(Y >= M), certified < 1e-12 by the Chernoff
    bound. Grid values are evaluated with a pair of FFTs.
    """
    if target < 0:
        raise ValueError("target must be >= 0")
    if nodes is None:
        M = 1 << max(4, (max(2 * (m.n + 1), target + m.n)).bit_length())
        while chernoff_tail_log10(m, M) > ALIAS_TAIL_LOG10 and M <= (1 << 24):
            M *= 2
        nodes = M
    if nodes <= target:
        raise TailBoundError(f"nodes={nodes} must exceed target={target}")
    tail = chernoff_tail_log10(m, nodes)
    if tail > ALIAS_TAIL_LOG10:
        raise TailBoundError(
            f"aliasing tail 10^{tail:.2f} at nodes={nodes} exceeds 1e-12; increase nodes")

    # sum_l lambda_l e^{2 pi i r l / M} for all grid rows r at once;
    # indices wrap mod M so the grid values match phi exactly
    lam_padded = np.zeros(nodes)
    np.add.at(lam_padded, np.arange(1, m.n + 1) % nodes, m.lambdas)
    z = np.fft.ifft(lam_padded) * nodes
    phi = np.exp(z - math.fsum(m.lambdas.tolist()))
    t = np.fft.fft(phi)[target] / nodes
    imag = abs(float(t.imag))
    if imag > 1e-12:
        raise TailBoundError(f"imaginary residual {imag:.3g} exceeds 1e-12")
    return QuadratureMass(value=float(t.real), imag_residual=imag, nodes=nodes,
                          alias_tail_log10=tail)


# ---------------------------------------------------------------------------
# Central/tail split and the nearest-integer tail functional
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SplitResult:
    alpha0: float
    t1: float
    t2_grid_max: float  # max |phi| over [alpha0, 1/2] on a 4096-point grid
    degenerate: bool    # alpha0 hit 1/2: n too small for the split


def split_T(m: TiltedModel, grid_points: int = 4096) -> SplitResult:
    """Split the inversion integral at alpha0 = min(1/2, log n / B_n).

    t1 integrates the smooth central part over [-alpha0, alpha0]; the
    tail is reported as the grid maximum of |phi| on [alpha0, 1/2]
    (a measured quantity, not a certified bound).
    """
    if m.saddle is None:
        raise ValueError("split_T needs a model built at the saddle tilt")
    if m.n < 3:
        raise ValueError("split needs n >= 3 so that log n > 1")
    bn = math.sqrt(m.saddle.b2)
    alpha0 = math.log(m.n) / bn
    degenerate = alpha0 >= 0.5
    alpha0 = min(alpha0, 0.5)

    ls = np.arange(1, m.n + 1, dtype=float)
    lam = m.lambdas

    def integrand(alpha: float) -> float:
        z = np.exp(2j * np.pi * alpha * ls) - 1.0
        return (np.exp(np.dot(lam, z)) * np.exp(-2j * np.pi * alpha * m.n)).real

    t1, _ = quad(integrand, -alpha0, alpha0, limit=200)
    grid = np.linspace(alpha0, 0.5, grid_points)
    t2max = float(np.exp(char_fn_log_modulus(m, grid)).max())
    return SplitResult(alpha0=alpha0, t1=t1, t2_grid_max=t2max, degenerate=degenerate)


def v_n_alpha(m: TiltedModel, alpha) -> float:
    """sum_l lambda_l ||alpha l||^2 with ||x|| = distance to the nearest
    integer; -log |phi(alpha)| >= 8 * v_n_alpha since sin^2(pi x) >= 4||x||^2."""
    ls = np.arange(1, m.n + 1, dtype=float)
    alpha_arr = np.asarray(alpha, dtype=float)
    x = np.multiply.outer(alpha_arr, ls)
    d = np.abs(x - np.round(x))
    out = (d * d) @ m.lambdas
    return float(out) if np.isscalar(alpha) or alpha_arr.ndim == 0 else out


# ---------------------------------------------------------------------------
# Route 3: normal local-limit comparisons
# ---------------------------------------------------------------------------


def llt_ratio(m: TiltedModel, dist: Optional[YDistribution] = None) -> float:
    """Pr(Y = n) * sqrt(2 pi B_n^2): tends to 1 when the normal local
    limit holds at the saddle tilt."""
    if m.saddle is None:
        raise ValueError("llt_ratio needs a model built at the saddle tilt")
    if dist is None:
        dist = y_distribution(m, top=m.n)
    return float(dist[m.n]) * math.sqrt(2.0 * math.pi * m.saddle.b2)


def shifted_ratio(m: TiltedModel, h: int, dist: Optional[YDistribution] = None) -> float:
    """Pr(Y = n + h) * sqrt(2 pi B_n^2) for a fixed integer shift h."""
    if m.saddle is None:
        raise ValueError("shifted_ratio needs a model built at the saddle tilt")
    if m.n + h < 0:
        raise ValueError("n + h must be >= 0")
    if dist is None or dist.top < m.n + h:
        dist = y_distribution(m, top=m.n + max(h, 0))
    return float(dist[m.n + h]) * math.sqrt(2.0 * math.pi * m.saddle.b2)


def lyapunov_ratio(m: TiltedModel) -> float:
    """rho_3 / B_n^3, the third-moment Lyapunov fraction; must tend to 0
    for normal convergence."""
    if m.saddle is None:
        raise ValueError("lyapunov_ratio needs a model built at the saddle tilt")
    return m.saddle.rho3 / m.saddle.b2 ** 1.5
