"""Exception types shared by the numerical modules."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested quantity."""


class DivergentIntegralError(DomainError):
    """The requested kernel diverges at the given arguments."""


class QuadratureError(ArithmeticError):
    """Quadrature did not reach the requested tolerance.

    The best available value and its error estimate are attached.
    """

    def __init__(self, message: str, value: float, estimate: float):
        super().__init__(f"{message} (value={value!r}, error estimate={estimate!r})")
        self.value = value
        self.estimate = estimate


class RadicandError(DomainError):
    """The second gap determination has no real value at this b."""


class BracketError(ArithmeticError):
    """A bracketing root finder was given an interval without a sign change."""


class UndefinedFreeEnergyError(ArithmeticError):
    """A phase has no mean-field solution, so its free energy is undefined."""
