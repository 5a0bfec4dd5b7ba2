"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input data violates a representation invariant."""


class NonConvergenceError(RuntimeError):
    """An iterative procedure stopped before meeting its tolerance.

    ``detail`` carries whatever diagnostic the raising routine has
    (last gap, best value found, ...).
    """

    def __init__(self, message, **detail):
        super().__init__(message)
        self.detail = detail
