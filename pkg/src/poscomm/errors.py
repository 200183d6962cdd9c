"""Exception types shared across the package."""


class DimensionMismatch(ValueError):
    pass


class NotSquare(ValueError):
    pass


class NotDisjoint(ValueError):
    pass


class NotPositive(ValueError):
    pass


class ZeroVector(ValueError):
    pass


class NotInAlgebra(ValueError):
    pass


class NotUnitized(ValueError):
    pass


class InsufficientWeights(ValueError):
    pass


class TooLarge(ValueError):
    pass


class InvalidConfig(ValueError):
    pass
