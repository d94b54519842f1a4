"""Exception types raised across the package."""


class InvalidParams(ValueError):
    pass


class DomainError(ValueError):
    pass


class MethodMismatch(ValueError):
    """levy-quadrature was requested for a path-loss exponent other than 4."""


class NoConvergence(RuntimeError):
    pass


class QuadratureFailure(RuntimeError):
    pass


class GridMismatch(ValueError):
    pass
