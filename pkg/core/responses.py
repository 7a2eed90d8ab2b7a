"""
Standard command result format helpers.

Every chainmail command produces the same envelope the JSON output mode
prints: {'status', 'message', 'data' | 'errors'} plus a process exit code.
"""
from dataclasses import dataclass
from typing import Any, Dict, Optional

EXIT_OK = 0
EXIT_PROPERTY_FAILED = 1
EXIT_INVALID_INPUT = 2


@dataclass
class CommandResult:
    status: str
    message: str
    exit_code: int
    data: Optional[Any] = None
    errors: Optional[Dict[str, Any]] = None
    text: Optional[str] = None
    raw: bool = False

    def envelope(self) -> Dict[str, Any]:
        response = {
            'status': self.status,
            'message': self.message,
        }
        if self.data is not None:
            response['data'] = self.data
        if self.errors is not None:
            response['errors'] = self.errors
        return response


def success_response(message, data=None, text=None, raw=False):
    """
    Property holds / command succeeded.
    """
    return CommandResult('success', message, EXIT_OK, data=data, text=text, raw=raw)


def failure_response(message, data=None, text=None):
    """
    The command ran but the checked property fails or hypotheses are unmet.
    """
    return CommandResult('failure', message, EXIT_PROPERTY_FAILED, data=data, text=text)


def error_response(message, errors=None, exit_code=EXIT_INVALID_INPUT):
    """
    Return an error result.
    """
    return CommandResult('error', message, exit_code, errors=errors)


def exception_response(exc):
    """
    Map a ChainmailError onto the envelope, keeping its exit code.
    """
    result = error_response(exc.message, errors=exc.as_dict(), exit_code=exc.exit_code)
    if exc.exit_code == EXIT_PROPERTY_FAILED:
        result.status = 'failure'
    return result
