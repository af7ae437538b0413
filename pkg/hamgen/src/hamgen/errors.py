"""Exception types raised by the generator."""

from __future__ import annotations


class HamgenError(Exception):
    """Base class for all generator failures."""


class SpecError(HamgenError):
    """Malformed molecule description: bad geometry, active window, or flags."""


class ToolchainMissingError(HamgenError):
    """Requested element/basis pair is outside the built-in integral tables."""


class SCFConvergenceError(HamgenError):
    """Self-consistent field iteration failed to settle within its budget."""
