"""Exception hierarchy shared across the package."""


class BancoError(Exception):
    """Base class for all package errors."""


class NonConvergence(BancoError):
    """Adaptive quadrature exhausted its subdivision budget or missed tolerance."""


class DomainError(BancoError):
    """An input left the mathematical domain of an operation (NaN/inf query point, ...)."""


class EmptySequence(BancoError):
    """An aggregation was asked for on an empty sequence."""


class LengthMismatch(BancoError):
    """Paired logs do not have equal length."""


class InsufficientTrials(BancoError):
    """A statistical estimate needs at least two trials."""


class ConfigError(BancoError):
    """An experiment configuration is malformed or references unknown components."""
