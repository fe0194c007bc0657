"""zetalab: a desk-scale laboratory for exponential sums, Vinogradov-type
mean values, exponent pairs, piecewise exponent bounds, decoupling probes and
critical-line zeta growth."""

__version__ = "0.1.0"

from .errors import GuardError

__all__ = ["GuardError", "__version__"]
