"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SingularPointError(DomainError):
    """Source and target coincide, where the Green's function is singular."""


class IntegrandError(ArithmeticError):
    """An integrand produced a non-finite value."""

    def __init__(self, abscissa, value):
        super().__init__(f"integrand returned {value!r} at y = {abscissa!r}")
        self.abscissa = abscissa
        self.value = value


class StencilError(DomainError):
    """A finite-difference stencil leaves the admissible region."""
