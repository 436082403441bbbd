class StaggerError(ValueError):
    """Raised when fields, meshes or operator chains don't fit together: two
    grid functions on different meshes or staggers, a difference operator
    applied on the wrong grid, or a chain of operators whose staggers don't
    connect.
    """


class DomainError(ValueError):
    """Raised when an input is outside the domain of a formula, like a zero
    frequency in the Drude dispersion relations or a negative radicand in the
    derived parameters.
    """


class InstabilityError(ArithmeticError):
    """Raised when a simulation produces non-finite values.

    Args:
        step (int): the step index at which the non-finite values appeared.
        message (str, optional): a description of the failure.
    """
    def __init__(self, step: int, message: str=None) -> None:
        self.step = step
        if message is None:
            message = 'non-finite field values at step {}'.format(step)
        super().__init__(message)


class ConfigError(ValueError):
    """Raised when an experiment configuration is not valid.

    Args:
        field (str): the configuration key that caused the error.
        message (str): a description of the problem.
    """
    def __init__(self, field: str, message: str) -> None:
        self.field = field
        super().__init__('{}: {}'.format(field, message))
