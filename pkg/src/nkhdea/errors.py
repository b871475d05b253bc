"""Exception types raised across the package."""


class InvalidParameterError(ValueError):
    """A numeric argument is outside its permitted range."""


class InvalidGenomeError(ValueError):
    """A genome does not match the landscape it is evaluated on."""


class CapacityError(ValueError):
    """An exhaustive operation was refused because the instance is too large."""


class ConfigurationError(ValueError):
    """A run or sweep configuration is invalid."""


class ParseError(ValueError):
    """A landscape or config document is malformed.

    ``lineno`` is 1-based and ``None`` when the problem is not tied to a line.
    """

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
