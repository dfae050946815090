"""Exception hierarchy shared across the package."""


class CfpError(Exception):
    """Base class for all library errors."""


class CapExceededError(CfpError):
    """A size cap (enumeration N, convolution support) was exceeded."""


class ExactChannelError(CfpError):
    """Rational arithmetic requested for a family without an exact channel."""


class PrecisionError(CfpError):
    """Unsupported working precision."""


class BracketError(CfpError):
    """Root bracketing failed to enclose a sign change."""


class ConvergenceError(CfpError):
    """Iteration budget exhausted before reaching the requested tolerance."""


class TailBoundError(CfpError):
    """A truncation/aliasing tail could not be certified small enough."""


class ConfigError(CfpError):
    """Malformed run configuration or config file."""
