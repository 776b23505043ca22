"""Exception types and the process exit codes they map to."""


class ReqcutError(Exception):
    """Base class for everything raised on purpose by this package."""

    exit_code = 1


class InputError(ReqcutError):
    """Malformed input: files, parameters, or violated call contracts."""

    exit_code = 2


class GraphStructureError(InputError):
    """The graph breaks a structural precondition (disconnected, etc.)."""


class ParseError(InputError):
    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at token {position})"
        super().__init__(message)
        self.position = position


class ConfigError(InputError):
    """Invalid solver configuration value."""


class ResourceError(ReqcutError):
    """An enumeration or search budget was exceeded."""

    exit_code = 3


class ConvergenceError(ReqcutError):
    """The cutting-plane loop hit its cut cap without converging."""

    exit_code = 4

    def __init__(self, message, last_objective=None):
        super().__init__(message)
        self.last_objective = last_objective
