"""Exception types shared across the package.

The CLI maps these onto exit codes: parse problems exit 2, cap
violations exit 3.
"""


class ParseError(ValueError):
    """A packing, broadcast, or graph file failed to parse.

    Carries the offending line number (1-based) when known.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CapExceededError(ValueError):
    """An instance exceeds a configured size/dimension cap."""


class DisconnectedGraphError(ValueError):
    """An operation requiring a connected graph got a disconnected one."""
