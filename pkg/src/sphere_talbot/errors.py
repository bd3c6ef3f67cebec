"""Exception types shared by the numerical modules."""


class TalbotError(Exception):
    """Base class for errors raised by sphere_talbot."""


class DomainError(TalbotError, ValueError):
    """An argument lies outside the domain of the operation."""


class PoleError(TalbotError, ArithmeticError):
    """Evaluation requested exactly at a singularity of a kernel."""


class ContractViolation(TalbotError, ValueError):
    """Inputs break a documented precondition (coprimality, index range, ...)."""


class NoInverseError(ContractViolation):
    """Modular inverse requested for a non-unit."""


class ResourceBudgetError(TalbotError, RuntimeError):
    """Grid evaluation would exceed the configured work budget."""
