"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the domain an operation is defined on."""


class ContractError(ValueError):
    """A structured input violates a precondition (norm, unitarity, shape)."""


class DegeneratePriorsError(DomainError):
    """Priors are 0 or 1; the optimal operating point is not defined."""
