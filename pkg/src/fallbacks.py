# src/fallbacks.py
from __future__ import annotations

from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from src.errors import QuadratureError

BASE_SUBDIVISIONS = 50


def subdivision_limit(attempt_number: int) -> int:
    """Quadrature subdivision budget for the given (1-based) attempt."""
    return BASE_SUBDIVISIONS * 4 ** (attempt_number - 1)


def escalating_retries(attempts: int = 3) -> Retrying:
    """Retry a non-converged quadrature with a larger subdivision limit each time.

    Usage::

        for attempt in escalating_retries(3):
            with attempt:
                value = integrate(limit=subdivision_limit(attempt.retry_state.attempt_number))
    """
    return Retrying(
        stop=stop_after_attempt(max(1, attempts)),
        retry=retry_if_exception_type(QuadratureError),
        reraise=True,
    )

