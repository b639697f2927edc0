"""Exception types shared across the package."""


class PdcError(Exception):
    """Base class for all package errors."""


class InvalidInputError(PdcError, ValueError):
    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class SingularFormError(PdcError, ArithmeticError):
    pass


class ConvergenceError(PdcError, ArithmeticError):
    pass


class AccuracyError(PdcError, ArithmeticError):
    """Requested tolerance not reached; ``best`` holds the best estimate."""

    def __init__(self, message, best=None, err=None):
        self.best = best
        self.err = err
        super().__init__(message)


class ResolutionError(PdcError, ArithmeticError):
    pass


class CostGuardError(PdcError, RuntimeError):
    pass


class UndefinedBiphotonError(PdcError, ArithmeticError):
    pass


class ConfigError(PdcError, ValueError):
    def __init__(self, message, line=None, key=None):
        self.line = line
        self.key = key
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
