"""Exception types shared across the package."""


class MertensapError(Exception):
    """Base class for all package-specific errors."""


class InvalidInputError(MertensapError, ValueError):
    """Argument outside the documented domain (q = 0, odd zeta index, ...)."""


class NotAUnitError(MertensapError, ValueError):
    """Residue is not coprime to the modulus."""


class PrincipalCharacterError(MertensapError, ValueError):
    """L(1, chi) requested for the principal character."""


class PrecisionUnachievableError(MertensapError, ArithmeticError):
    """Cancellation in a finite formula exceeded the guard digits."""


class BranchUndeterminedError(MertensapError, ArithmeticError):
    """Truncated Euler sum too short to pin the logarithm branch (< pi)."""


class NonRealResultError(MertensapError, ArithmeticError):
    """A quantity that must be real came out with a large imaginary part."""


class IdentityViolationError(MertensapError, ArithmeticError):
    """Two sides of a finite identity disagree beyond tolerance."""
