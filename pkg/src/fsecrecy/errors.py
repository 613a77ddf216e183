"""Exception hierarchy shared by the numerical kernels."""


class NumericalError(ArithmeticError):
    """Base class for failures of a numerical evaluation."""


class PoleError(NumericalError, ValueError):
    """A gamma-type function was asked for a value at one of its poles."""


class ConvergenceError(NumericalError):
    """A series, quadrature or refinement loop did not reach its tolerance."""


class ContourError(NumericalError):
    """No vertical Mellin-Barnes contour separates the two pole families."""


class DegenerateParameterError(NumericalError):
    """Coincident poles could not be separated by parameter perturbation."""
