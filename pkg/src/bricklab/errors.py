"""Exception types shared across the package."""


class BrickLabError(Exception):
    """Base class for all errors raised by bricklab."""


class MalformedInput(BrickLabError):
    """Input data violates a shape or format contract."""


class NotClosed(BrickLabError):
    """A claimed subrepresentation is not closed under the arrow maps."""


class BadWitness(BrickLabError):
    """A splitting witness was invertible or nilpotent, so it splits nothing."""


class BudgetExceeded(BrickLabError):
    """An exhaustive enumeration would exceed the configured budget."""


class CertificateFailure(BrickLabError):
    """A runtime verification that is expected to hold by theory failed."""


class IncompleteUniverse(BrickLabError):
    """An operation requiring a complete module universe got a partial one."""


class OutOfUniverse(BrickLabError):
    """A closure computation produced a module outside the universe bound."""
