"""Exceptions shared across the engine."""


class EngineError(Exception):
    """Base class for all engine errors."""


class ModelError(EngineError):
    """Malformed or inconsistent surface model."""


class UnknownCoefficientsError(EngineError):
    """Raised when a computation would need the unevaluated universal
    canonical-class coefficients: the model is projective with K != 0, or the
    result is requested exactly rather than modulo an ideal containing K."""


class WeightError(EngineError):
    """A Fock vector does not have the (constant) weight an operation expects."""


class EliminationError(EngineError):
    """Internal guard: the leading-term elimination lost triangularity."""
