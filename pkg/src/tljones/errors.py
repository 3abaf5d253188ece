"""Error taxonomy shared by all modules.

Callers are expected to distinguish bad input (DomainError), numerical
evidence that an internal contract broke (IntegrityError), exhausted
resource budgets (ResourceError), and unreachable precision requests
(PrecisionError).
"""


class TLJError(Exception):
    """Base class for all library errors."""


class DomainError(TLJError, ValueError):
    """Input outside the documented domain of an operation."""


class IntegrityError(TLJError, ArithmeticError):
    """A numerical invariant that must hold by construction failed."""


class ResourceError(TLJError, RuntimeError):
    """A memory or size budget was exceeded."""


class PrecisionError(TLJError, RuntimeError):
    """The requested tolerance cannot be met with the given resources."""


class LeakedQubitError(TLJError, RuntimeError):
    """A computational-basis readout was requested on a leaked triple."""
