"""Exception hierarchy shared by all modules."""


class CensusError(Exception):
    """Base class for every error raised by this package."""


class UsageError(CensusError, ValueError):
    """Bad arguments: wrong dimension, unknown name, out-of-range parameter."""


class InvalidKernelError(CensusError, ValueError):
    """The kernel violates a structural requirement (e.g. non-real diagonal)."""


class AdmissibilityError(CensusError, ValueError):
    """The positivity condition on the measure fails, or no admissible pair exists."""


class NotApplicableError(CensusError):
    """A bound whose hypotheses do not hold for the given input."""
