"""
Exception hierarchy shared by every chainmail app.

Each error carries a short machine code, an optional `detail` mapping
(naming the offending vertex / edge / line) and the CLI exit code that the
management command maps it to.
"""


class ChainmailError(Exception):
    """Base class for all chainmail errors."""

    default_code = 'error'
    exit_code = 2

    def __init__(self, message, detail=None, code=None):
        super().__init__(message)
        self.message = message
        self.detail = dict(detail or {})
        self.code = code or self.default_code

    def as_dict(self):
        payload = {'code': self.code, 'message': self.message}
        if self.detail:
            payload['detail'] = self.detail
        return payload


class InvalidInputError(ChainmailError):
    """Malformed file, unknown id, non-planar graph, bad parameter."""

    default_code = 'invalid_input'


class GraphFileSyntaxError(InvalidInputError):
    default_code = 'syntax_error'

    def __init__(self, message, line, column):
        super().__init__(
            f"{message} (line {line}, column {column})",
            detail={'line': line, 'column': column},
        )
        self.line = line
        self.column = column


class PreconditionError(ChainmailError):
    """An operation was called outside its precondition."""

    default_code = 'precondition_failed'


class CapExceededError(PreconditionError):
    default_code = 'cap_exceeded'


class HypothesisError(ChainmailError):
    """Theorem hypotheses are not met by the input graph."""

    default_code = 'hypothesis_failed'
    exit_code = 1


class CertificateError(ChainmailError):
    """An identity that must hold exactly failed during construction."""

    default_code = 'identity_failed'
    exit_code = 1
