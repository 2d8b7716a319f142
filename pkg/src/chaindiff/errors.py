"""Exception types shared across the package."""


class ChainDiffError(Exception):
    """Base class for all errors raised by chaindiff."""


class ContractError(ChainDiffError, ValueError):
    """Inputs violate a documented precondition (shape, arity, ground set)."""


class CapExceededError(ChainDiffError, ValueError):
    """A size parameter is larger than the supported cap."""

    def __init__(self, what, value, cap):
        self.what = what
        self.value = value
        self.cap = cap
        super().__init__(f"{what}={value} exceeds the cap of {cap}")


class DomainError(ChainDiffError, ValueError):
    """A primitive was evaluated outside of its domain."""

    def __init__(self, primitive, value, reason="outside the domain"):
        self.primitive = primitive
        self.value = value
        super().__init__(f"{primitive}: argument {value!r} is {reason}")


class ParseError(ChainDiffError, ValueError):
    """Malformed expression source."""

    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} at offset {position}")
