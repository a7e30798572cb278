"""Shared exception hierarchy.

Every error carries a machine-readable ``code`` drawn from a closed
enumeration so that the HTTP service and the CLI can map failures without
string matching. ``ERROR_CODES`` is the published set.
"""

from __future__ import annotations

from typing import Any


class ExoarError(Exception):
    """Base class for all errors raised by this package."""

    code = "internal"

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self.message = message
        self.details = details


# --- domain model ---------------------------------------------------------


class EmptyLabel(ExoarError):
    code = "empty_label"


class UnknownTarget(ExoarError):
    code = "unknown_target"


class DuplicateAdd(ExoarError):
    code = "duplicate_add"


class InvalidEdit(ExoarError):
    """Edit is well-formed but semantically illegal (bad syntax in a
    replacement, reference to an unconfirmed type, duplicate-creating edit)."""

    code = "invalid_edit"


class EditScriptError(ExoarError):
    """Unparseable edit-script line."""

    code = "edit_script"


class NegativeCount(ExoarError):
    code = "negative_count"


# --- ingestion ------------------------------------------------------------


class MalformedRow(ExoarError):
    code = "malformed_row"

    def __init__(self, line_no: int, message: str) -> None:
        super().__init__(f"line {line_no}: {message}", line_no=line_no)
        self.line_no = line_no


class EmptyFile(ExoarError):
    code = "empty_file"


# --- llm gateway ----------------------------------------------------------


class MissingContext(ExoarError):
    code = "missing_context"


class NoJsonFound(ExoarError):
    code = "no_json_found"


class EmptyList(ExoarError):
    code = "empty_list"


class AllRecordsInvalid(ExoarError):
    code = "all_records_invalid"


class ParseFailed(ExoarError):
    """Both the original response and the single repair attempt failed to
    parse. Carries both raw responses for inspection."""

    code = "parse_failed"

    def __init__(self, message: str, raw_responses: list[str]) -> None:
        super().__init__(message, attempts=len(raw_responses))
        self.raw_responses = raw_responses


class Transport(ExoarError):
    code = "transport"

    def __init__(self, message: str, status: int | None = None, **details: Any) -> None:
        super().__init__(message, status=status, **details)
        self.status = status


class AuthRejected(ExoarError):
    code = "auth_rejected"


class BudgetExceeded(ExoarError):
    code = "budget_exceeded"


# --- session engine -------------------------------------------------------


class EmptyProfession(ExoarError):
    code = "empty_profession"


class StepOrderViolation(ExoarError):
    code = "step_order_violation"


class NothingConfirmed(ExoarError):
    code = "nothing_confirmed"


class MissingPriceTable(ExoarError):
    code = "missing_price_table"


class NotFound(ExoarError):
    code = "not_found"


class CorruptSession(ExoarError):
    code = "corrupt_session"


class Busy(ExoarError):
    code = "busy"


# --- export ---------------------------------------------------------------


class InvalidDocument(ExoarError):
    code = "invalid_document"


ERROR_CODES = frozenset(
    {
        "internal",
        "validation",
        "empty_label",
        "unknown_target",
        "duplicate_add",
        "invalid_edit",
        "edit_script",
        "negative_count",
        "malformed_row",
        "empty_file",
        "missing_context",
        "no_json_found",
        "empty_list",
        "all_records_invalid",
        "parse_failed",
        "transport",
        "auth_rejected",
        "budget_exceeded",
        "empty_profession",
        "step_order_violation",
        "nothing_confirmed",
        "missing_price_table",
        "not_found",
        "corrupt_session",
        "busy",
        "invalid_document",
    }
)
