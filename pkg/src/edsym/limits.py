"""Guards against runaway computations.

Expressions and operators are built through a small number of constructors,
and those constructors consult the limits below.  Exceeding a limit raises
:class:`~edsym.errors.LimitError` instead of grinding through an
arbitrarily large exact computation.  The limits live in context variables
so that a scoped override in one request or thread never leaks into
another; they are configuration, not part of any value's identity.
"""
from __future__ import annotations

from contextlib import contextmanager
from contextvars import ContextVar

from .errors import LimitError

DEFAULT_MAX_ORDER = 16
DEFAULT_MAX_DEGREE = 256

_max_order: ContextVar[int] = ContextVar("edsym_max_order",
                                         default=DEFAULT_MAX_ORDER)
_max_degree: ContextVar[int] = ContextVar("edsym_max_degree",
                                          default=DEFAULT_MAX_DEGREE)


def max_order() -> int:
    return _max_order.get()


def max_degree() -> int:
    return _max_degree.get()


def _checked(value: int, what: str) -> int:
    if value < 0:
        raise ValueError(f"{what} limit must be nonnegative")
    return value


@contextmanager
def scoped_limits(order: int | None = None, degree: int | None = None):
    """Temporarily override the limits inside a with-block."""
    tokens = []
    if order is not None:
        tokens.append((_max_order, _max_order.set(_checked(order, "order"))))
    if degree is not None:
        tokens.append((_max_degree,
                       _max_degree.set(_checked(degree, "degree"))))
    try:
        yield
    finally:
        for var, token in reversed(tokens):
            var.reset(token)


def check_order(total: int) -> None:
    bound = _max_order.get()
    if total > bound:
        raise LimitError(
            f"jet order {total} exceeds the configured bound {bound}")


def check_degree(degree: int) -> None:
    bound = _max_degree.get()
    if degree > bound:
        raise LimitError(
            f"coefficient degree {degree} exceeds the configured bound {bound}")
