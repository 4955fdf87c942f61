"""Exception hierarchy shared by all modules."""


class KobsepError(Exception):
    """Base class for every error raised by this package."""


class DomainError(KobsepError, ValueError):
    """A point or parameter lies outside the domain of the operation."""


class RangeError(DomainError):
    pass


class PoleError(KobsepError, ZeroDivisionError):
    """A fractional-linear denominator vanished (to tolerance)."""


class ModelMismatch(KobsepError, TypeError):
    pass


class IdentityInput(KobsepError, ValueError):
    pass


class NotFixed(KobsepError, ValueError):
    pass


class WrongClass(KobsepError, ValueError):
    """The automorphism does not have the conjugacy type required."""


class CoincidentPoints(KobsepError, ValueError):
    pass


class ToleranceAmbiguity(KobsepError, ArithmeticError):
    pass


class VariantError(KobsepError, TypeError):
    """The operation is not defined for this disc variant."""


class DegenerateRotation(KobsepError, ValueError):
    pass


class CoincidentMaps(KobsepError, ValueError):
    pass


class NotOnDisc(KobsepError, ValueError):
    pass


class BudgetExceeded(KobsepError, RuntimeError):
    pass


class TargetTooSmall(KobsepError, ValueError):
    pass


class DegenerateInput(KobsepError, ValueError):
    pass


class DegenerateDirection(KobsepError, ValueError):
    pass


class ParseError(KobsepError, ValueError):
    pass
