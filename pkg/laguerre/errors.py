"""
Error hierarchy shared by every module.

Each error carries the process exit code the CLI reports when it escapes a
run. Computation errors exit with 4, configuration problems with 3 and
command-line usage errors with 2.
"""


class LaguerreError(Exception):
    """Base class for all failures raised by the package"""

    exit_code = 4


class PoleError(LaguerreError):
    """A Gamma-type function was evaluated at a pole"""


class ParameterDomainError(LaguerreError):
    """An argument lies outside the domain where the quantity is defined"""


class NonConvergenceError(LaguerreError):
    """A series or iteration did not reach its tolerance within the cap"""


class DivergenceError(LaguerreError):
    """The defining integral diverges for the given input"""


class QuadratureError(LaguerreError):
    """A quadrature rule produced a non-finite or inconsistent value"""


class ResolutionError(LaguerreError):
    """Sampled input is too coarse for the requested operation"""


class StripError(LaguerreError):
    """Contour abscissa outside the admissible strip or on a pole"""


class InsufficientDecayError(LaguerreError):
    """The contour integrand decays too slowly to truncate"""


class TruncationBudgetError(LaguerreError):
    """A truncation limit was exhausted before the tolerance was met"""


class ConvergenceDiskError(ParameterDomainError):
    """|lambda| lies outside the disk where the Neumann series converges"""


class UsageError(LaguerreError):
    """Malformed command line"""

    exit_code = 2


class ConfigValidationError(LaguerreError):
    """Configuration violates a module precondition"""

    exit_code = 3
