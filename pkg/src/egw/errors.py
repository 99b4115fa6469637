"""Exception types shared across the package."""


class EgwError(Exception):
    """Base class for all package errors."""


class ValidationError(EgwError):
    """An input object violates a structural invariant."""


class LimitExceeded(EgwError):
    """A configured size/work limit would be exceeded.

    Raised explicitly so that callers can distinguish "too big to decide"
    from a negative answer.
    """


class DimacsError(EgwError):
    """Malformed DIMACS input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PlanGuardError(EgwError):
    """A plan-time arithmetic guard failed.

    Carries the rule tag, case label and the concrete inequality that
    failed, so the caller can report exactly which precondition broke.
    """

    def __init__(self, rule: str, case: str | None, name: str, expression: str):
        self.rule = rule
        self.case = case
        self.name = name
        self.expression = expression
        where = rule if case is None else f"{rule}/{case}"
        super().__init__(f"guard '{name}' failed in {where}: {expression}")
