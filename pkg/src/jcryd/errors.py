"""Exception hierarchy shared by all jcryd modules."""


class JcrydError(Exception):
    """Base class for every error raised by jcryd."""


class DomainError(JcrydError, ValueError):
    """An argument lies outside the domain where the operation is defined."""


class CapacityError(JcrydError):
    """A requested product-space construction exceeds the dimension guard."""


class UnsupportedModelError(JcrydError):
    """The operation does not support this model configuration."""


class ConvergenceError(JcrydError, ArithmeticError):
    """An eigen-decomposition failed its residual check."""


class IntegrationError(JcrydError, ArithmeticError):
    """Time integration could not meet its accuracy contract."""


class FitError(JcrydError, ValueError):
    """A least-squares fit was requested on a degenerate design."""


class ConfigError(JcrydError):
    """A run configuration could not be parsed or validated."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column

    def __str__(self):
        msg = super().__str__()
        if self.line is not None:
            where = f"line {self.line}" + (f", column {self.column}" if self.column else "")
            return f"{where}: {msg}"
        return msg
