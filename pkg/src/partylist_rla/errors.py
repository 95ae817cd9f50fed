"""Exception types shared across the package."""


class AuditError(Exception):
    """Base class for all package errors."""


class ValidationError(AuditError, ValueError):
    """An object or file violates one of its stated invariants."""


class BallotOutOfBounds(AuditError, ValueError):
    """An interpreted ballot carries more votes than the contest allows."""


class TieError(AuditError):
    """An outcome cannot be decided without an external tie-break."""


class DomainError(AuditError, ValueError):
    """A numeric argument lies outside the domain of a formula."""


class InputFormatError(AuditError, ValueError):
    """A raw record is malformed (data corruption, not a spoiled ballot)."""


class ParseError(InputFormatError):
    """A file could not be parsed; carries the offending location."""

    def __init__(self, message, *, source=None, line=None, field=None):
        self.source = source
        self.line = line
        self.field = field
        where = []
        if source is not None:
            where.append(str(source))
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)
