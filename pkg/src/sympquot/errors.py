"""Exception types shared across the package.

Every failure mode that a caller is expected to handle programmatically gets
its own class so the CLI can map them onto distinct exit codes.
"""


class SchemaError(ValueError):
    """A request file or request dict violates the input schema.

    Carries enough context (field name, and line number when the problem is
    textual) for the CLI to point at the offending part of the input.
    """

    def __init__(self, message, *, field=None, line=None):
        self.field = field
        self.line = line
        parts = [message]
        if field is not None:
            parts.append(f"(field: {field})")
        if line is not None:
            parts.append(f"(line {line})")
        super().__init__(" ".join(parts))


class CapacityError(RuntimeError):
    """An exact computation refused to run because it would exceed a
    configured size bound (state space, support enumeration, ...).

    The computation is aborted loudly rather than silently truncated.
    """


class ReconstructionError(RuntimeError):
    """No candidate denominator reproduced the truncated series.

    ``truncation`` preserves the exact truncated expansion so callers can
    still report it; ``tried`` records the denominator multisets that were
    attempted.
    """

    def __init__(self, message, *, truncation=None, tried=()):
        super().__init__(message)
        self.truncation = truncation
        self.tried = tuple(tuple(t) for t in tried)
