"""Shared exception types."""


class SchemaError(ValueError):
    """Malformed input data: wrong shapes, unknown fields, unparseable values."""


class PreconditionError(ValueError):
    """Well-formed input that violates a mathematical precondition.

    `report` optionally carries structured evidence (e.g. relation residuals).
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
