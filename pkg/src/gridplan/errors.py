"""Exception taxonomy shared across the toolkit."""

from __future__ import annotations


class GridplanError(Exception):
    """Base class for all toolkit errors."""


# --- problem validation ---------------------------------------------------

class ValidationError(GridplanError):
    """A deployment problem violates a structural invariant."""


class UnknownActor(ValidationError):
    pass


class UnknownNode(ValidationError):
    pass


class DuplicateId(ValidationError):
    pass


class ContradictoryRules(ValidationError):
    """Placement rules that can never hold together (e.g. a pair both
    colocated and separated, or colocated actors with unequal copies)."""


class BadEnvelope(ValidationError):
    """A resource figure is negative, a ceiling is below its rate, a
    count is non-positive, or a utilization fraction falls outside (0, 1]."""


class DimensionMismatch(GridplanError):
    pass


# --- parsing --------------------------------------------------------------

class ParseError(GridplanError):
    """Syntax error with source position."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{where}: {message}"
        super().__init__(message)


class DuplicateActor(ParseError):
    pass


class MalformedUsesEntry(ParseError):
    pass


class DuplicateCopiesOverride(ParseError):
    pass


class EmptyGroup(ParseError):
    pass


class MissingField(ParseError):
    pass


class BadNumber(ParseError):
    pass


class AppNameMismatch(GridplanError):
    pass


class UnknownHardwareKey(GridplanError):
    pass


class InfeasibleMatrix(GridplanError):
    """Refusing to serialize a deployment matrix that violates constraints."""


# --- solving --------------------------------------------------------------

class InstanceTooLarge(GridplanError):
    pass


class NotInfeasible(GridplanError):
    pass


# --- dispatch / simulation ------------------------------------------------

class BadInput(GridplanError):
    """Violated numeric preconditions (non-positive weight, negative power, ...)."""


class BadScript(GridplanError):
    """A fault script references an unknown member or has an invalid time."""


class EmptyQueue(GridplanError):
    pass
