"""Exception types raised by the builders and solvers."""


class QGameError(ValueError):
    """Base class for all input/precondition errors in this package."""


class InvalidProbabilityError(QGameError):
    def __init__(self, index: int, value: float):
        self.index = index
        self.value = value
        super().__init__(f"p{index} = {value!r} is outside [0, 1]")


class NegativeParameterError(QGameError):
    def __init__(self, name: str, value: float):
        self.name = name
        self.value = value
        super().__init__(f"parameter {name} = {value!r} must be >= 0")


class PreconditionError(QGameError):
    pass


class DegenerateDenominatorError(QGameError):
    pass


class ConstraintViolationError(QGameError):
    pass
