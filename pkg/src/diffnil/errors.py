"""Exception types and the intermediate-size guard."""

from __future__ import annotations

import contextlib
import contextvars


class DiffNilError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameter(DiffNilError, ValueError):
    pass


class InvalidInput(DiffNilError, ValueError):
    pass


class EmptyInput(DiffNilError, ValueError):
    pass


class UnsupportedParameter(InvalidParameter):
    pass


class InvariantViolation(DiffNilError, RuntimeError):
    """A computed result contradicts a proven structural fact.

    Raised instead of returning a wrong answer; always indicates a bug.
    """


class ResourceLimitExceeded(DiffNilError, RuntimeError):
    pass


class ParseError(DiffNilError, ValueError):
    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}: {text!r}")


_max_terms: contextvars.ContextVar[int | None] = contextvars.ContextVar(
    "max_terms", default=None
)


@contextlib.contextmanager
def term_limit(limit: int | None):
    """Bound the support size of intermediate results inside the block."""
    token = _max_terms.set(limit)
    try:
        yield
    finally:
        _max_terms.reset(token)


def check_terms(n: int, where: str) -> None:
    limit = _max_terms.get()
    if limit is not None and n > limit:
        raise ResourceLimitExceeded(
            f"{where}: intermediate support of {n} terms exceeds --max-terms {limit}"
        )


def require_m(m: int) -> None:
    if not isinstance(m, int) or m < 2:
        raise InvalidParameter(f"m must be an integer >= 2, got {m!r}")
