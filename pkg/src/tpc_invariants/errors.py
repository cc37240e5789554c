"""Named domain errors.

Every error raised by the library on bad mathematical input derives from
:class:`InvariantError`, so the CLI can report it with its class name and
map it to exit code 1.
"""


class InvariantError(ValueError):
    """Base class for domain errors."""


# lattice
class NotCharacteristic(InvariantError):
    pass


class NotUnimodular(InvariantError):
    pass


class DefiniteForm(InvariantError):
    pass


class ParityViolation(InvariantError):
    pass


class SignatureObstruction(InvariantError):
    pass


class RankObstruction(InvariantError):
    pass


class DegenerateMatrix(InvariantError):
    pass


# kirby
class InvalidSpin(InvariantError):
    pass


class NotMod8(InvariantError):
    pass


# jspace
class SpinMismatch(InvariantError):
    pass


class CongruenceViolation(InvariantError):
    pass


class NoSolution(InvariantError):
    pass


class ClassMismatch(InvariantError):
    pass


class InfiniteOrder(InvariantError):
    pass


# lens
class OddP(InvariantError):
    pass


class NotCoprime(InvariantError):
    pass


# embed
class NotSpin(InvariantError):
    pass


class InfeasibleInput(InvariantError):
    pass


class BudgetExceeded(InvariantError):
    pass
