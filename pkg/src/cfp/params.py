"""Parameter functions a_1, a_2, ... driving weights, rates and tilts.

Four kinds are supported:

* ``power_law(p)``   : a_j = j^(p-1), p > 0
* ``ewens(beta)``    : a_j = beta/j, beta > 0
* ``table(values)``  : explicit finite positive table
* ``rescale(f, R)``  : a_j = R^j * f.a_j (moves the radius of convergence
  of sum a_j x^j from rho to rho/R; downstream c_n scale as R^n c_n)

Every kind also exposes an exact-rational channel where one is
representable (integer power-law exponent, rational beta/table/R), used
by the exact partition-function code paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import ConfigError

_KINDS = ("power_law", "ewens", "table", "rescaled")


def _as_fraction(x) -> Optional[Fraction]:
    """Exact Fraction view of x (floats are dyadic rationals), else None."""
    if isinstance(x, (Fraction, int)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    return None


@dataclass(frozen=True)
class ParameterFunction:
    """Immutable positive sequence a_j; safe for concurrent reads.

    ``declared_family`` is user-supplied (p1, p2) metadata asserting the
    power-law envelope j^(p1-1) <= a_j <= j^(p2-1); it is never inferred.
    """

    kind: str
    p: Optional[float] = None
    beta: Optional[float] = None
    values: Tuple[Fraction, ...] = ()
    base: Optional["ParameterFunction"] = None
    scale: Optional[float] = None
    declared_family: Optional[Tuple[float, float]] = None
    _exact_p: Optional[int] = field(default=None, repr=False)
    _exact_beta: Optional[Fraction] = field(default=None, repr=False)
    _exact_scale: Optional[Fraction] = field(default=None, repr=False)

    # -- evaluation -------------------------------------------------

    def eval_a(self, j: int) -> float:
        """a_j as a float. j must be a positive integer."""
        self._check_index(j)
        if self.kind == "power_law":
            return float(j) ** (self.p - 1.0)
        if self.kind == "ewens":
            return self.beta / j
        if self.kind == "table":
            return float(self.values[j - 1])
        return (self.scale ** j) * self.base.eval_a(j)

    def eval_a_exact(self, j: int) -> Optional[Fraction]:
        """a_j as an exact Fraction, or None when no exact channel exists."""
        self._check_index(j)
        if self.kind == "power_law":
            if self._exact_p is None:
                return None
            return Fraction(j) ** (self._exact_p - 1)
        if self.kind == "ewens":
            if self._exact_beta is None:
                return None
            return self._exact_beta / j
        if self.kind == "table":
            return self.values[j - 1]
        if self._exact_scale is None:
            return None
        inner = self.base.eval_a_exact(j)
        if inner is None:
            return None
        return self._exact_scale ** j * inner

    def log_eval_array(self, js: np.ndarray) -> np.ndarray:
        """log a_j for an integer array js (vectorized, overflow-free)."""
        js = np.asarray(js, dtype=float)
        if self.kind == "power_law":
            return (self.p - 1.0) * np.log(js)
        if self.kind == "ewens":
            return math.log(self.beta) - np.log(js)
        if self.kind == "table":
            idx = js.astype(int) - 1
            if idx.size and (idx.min() < 0 or idx.max() >= len(self.values)):
                raise IndexError(f"table has {len(self.values)} entries")
            return np.log(np.array([float(v) for v in self.values]))[idx]
        return js * math.log(self.scale) + self.base.log_eval_array(js)

    @property
    def has_exact_channel(self) -> bool:
        if self.kind == "power_law":
            return self._exact_p is not None
        if self.kind == "ewens":
            return self._exact_beta is not None
        if self.kind == "table":
            return True
        return self._exact_scale is not None and self.base.has_exact_channel

    @property
    def max_index(self) -> Optional[int]:
        """Largest valid j (None = unbounded)."""
        if self.kind == "table":
            return len(self.values)
        if self.kind == "rescaled":
            return self.base.max_index
        return None

    def _check_index(self, j: int) -> None:
        if j < 1:
            raise IndexError(f"parameter index must be >= 1, got {j}")
        m = self.max_index
        if m is not None and j > m:
            raise IndexError(f"parameter index {j} out of range (table length {m})")

    def label(self) -> str:
        if self.kind == "power_law":
            return f"powerlaw(p={self.p:g})"
        if self.kind == "ewens":
            return f"ewens(beta={self.beta:g})"
        if self.kind == "table":
            return f"table[{len(self.values)}]"
        return f"rescaled(R={self.scale:g}, {self.base.label()})"


def power_law(p: float, declared_family=None) -> ParameterFunction:
    """a_j = j^(p-1). Exact channel only for integer p (j^(p-1) rational)."""
    if not p > 0:
        raise ConfigError(f"power_law requires p > 0, got {p}")
    exact_p = int(p) if float(p) == int(p) else None
    return ParameterFunction(kind="power_law", p=float(p), declared_family=declared_family,
                             _exact_p=exact_p)


def ewens(beta) -> ParameterFunction:
    """a_j = beta/j (sampling-formula family)."""
    if not beta > 0:
        raise ConfigError(f"ewens requires beta > 0, got {beta}")
    return ParameterFunction(kind="ewens", beta=float(beta), _exact_beta=_as_fraction(beta))


def table(values: Sequence) -> ParameterFunction:
    """Finite explicit table; entries must be positive rationals/reals."""
    vals = []
    for i, v in enumerate(values):
        q = _as_fraction(v)
        if q is None:
            q = Fraction(v)
        if not q > 0:
            raise ConfigError(f"table entry {i + 1} must be positive, got {v}")
        vals.append(q)
    if not vals:
        raise ConfigError("table must be non-empty")
    return ParameterFunction(kind="table", values=tuple(vals))


def rescale(f: ParameterFunction, R) -> ParameterFunction:
    """a_j -> R^j a_j. Downstream coefficients scale as c_n -> R^n c_n."""
    if not R > 0:
        raise ConfigError(f"rescale requires R > 0, got {R}")
    return ParameterFunction(kind="rescaled", base=f, scale=float(R),
                             _exact_scale=_as_fraction(R))


def from_config(cfg: dict) -> ParameterFunction:
    """Build a family from flat key/value configuration.

    Keys: family = powerlaw|ewens|table|rescaled with p / beta / table / R;
    a rescaled family names its base via base = <family> plus that family's keys.
    """
    fam = cfg.get("family")
    if fam in ("powerlaw", "power_law"):
        if "p" not in cfg:
            raise ConfigError("powerlaw family needs p")
        return power_law(cfg["p"])
    if fam == "ewens":
        if "beta" not in cfg:
            raise ConfigError("ewens family needs beta")
        return ewens(cfg["beta"])
    if fam == "table":
        if "table" not in cfg:
            raise ConfigError("table family needs table = [..]")
        return table(cfg["table"])
    if fam == "rescaled":
        if "R" not in cfg or "base" not in cfg:
            raise ConfigError("rescaled family needs R and base")
        inner = dict(cfg)
        inner["family"] = cfg["base"]
        inner.pop("base")
        inner.pop("R")
        return rescale(from_config(inner), cfg["R"])
    raise ConfigError(f"unknown family {fam!r} (expected one of {_KINDS})")
