class RtlcheckError(Exception):
    """Base class of every error raised by rtlcheck."""


class UsageError(RtlcheckError, ValueError):
    """
    A caller broke the contract of an operation (invalid key, foreign handle,
    bad certificate index, ...).
    """


class ForeignHandleError(UsageError):
    """
    Error raised when a handle is used with an arena that did not issue it.
    """

    def __init__(self, kind: str, index: int, arena: int, expected: int) -> None:
        self.kind = kind
        self.index = index
        self.arena = arena
        self.expected = expected
        super().__init__(
            f"Handle {index} of {kind} belongs to arena {arena}, not to arena {expected}"
        )


class UnboundRegisterError(UsageError):
    """
    Error raised when a register is read before being written.
    """

    def __init__(self, register: int, location: int | None = None) -> None:
        self.register = register
        self.location = location
        where = "" if location is None else f" at location {location}"
        super().__init__(f"register r{register} read before being written{where}")


class IRSyntaxError(UsageError):
    """
    Syntax or well-formedness error in an IR or block file.

    Parameters
    ----------
    message : str
        what went wrong
    line : int
        1-based line of the offending token
    column : int
        1-based column of the offending token
    """

    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        self.message = message
        self.line = line
        self.column = column
        if line:
            super().__init__(f"line {line}, column {column}: {message}")
        else:
            super().__init__(message)


class InvariantFormatError(UsageError):
    """Malformed invariant, fact table, polyhedron or certificate file."""


class UncheckedInvariantError(RtlcheckError):
    """
    Raised when a transformation is requested with an invariant that its
    checker does not accept.
    """
