"""Adversarial multiplicative-weights model (C++ core)."""

from ._core import *  # noqa: F401,F403
from ._core import __version__, DomainError, GuardViolation  # noqa: F401
