"""Exception types shared across the package."""


class PreconditionError(ValueError):
    """An operation was called on a state that violates its precondition."""


class ResourceLimitError(RuntimeError):
    """The exact oracle refuses an instance that is too large."""


class InternalError(RuntimeError):
    """An invariant that should hold on proper instances was broken."""


class ParseError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
