"""Exception types raised by the library."""


class CapacityError(ValueError):
    """Input dimension exceeds what an operation can handle densely."""


class DomainError(ValueError):
    """A numeric parameter lies outside its admissible range."""


class InvalidRestrictionError(ValueError):
    """Alive set and fixed assignment overlap or fall outside the cube."""


class InvalidConfigError(ValueError):
    """A procedure configuration violates its structural invariants."""


class PreconditionError(ValueError):
    """Input rejected because an algorithm's precondition does not hold."""
