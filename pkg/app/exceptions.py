"""
Domain Errors
Every error carries a machine-readable code used by the CLI JSON output
"""
from typing import Any, Optional


class OkounkovError(Exception):
    """Base class for all domain errors"""
    code = 'OkounkovError'

    def __init__(self, message: str = '', detail: Optional[Any] = None):
        super().__init__(message or self.code)
        self.message = message or self.code
        self.detail = detail

    def to_dict(self) -> dict:
        """Convert to the {"error": code, "detail": ...} payload"""
        detail = self.detail if self.detail is not None else self.message
        return {'error': self.code, 'detail': detail}


class InputError(OkounkovError):
    """Malformed JSON, schema violation or invalid model field"""
    code = 'MalformedInput'


# ==================== Exact arithmetic ====================

class MixedRadicand(OkounkovError):
    code = 'MixedRadicand'


class DivisionByZero(OkounkovError, ZeroDivisionError):
    code = 'DivisionByZero'


class IdenticallyZero(OkounkovError):
    code = 'IdenticallyZero'


# ==================== Surfaces and cones ====================

class DimensionMismatch(OkounkovError):
    code = 'DimensionMismatch'


class DegenerateCone(OkounkovError):
    code = 'DegenerateCone'


class InvalidFlag(OkounkovError):
    code = 'InvalidFlag'


# ==================== Zariski decomposition ====================

class NotPseudoEffective(OkounkovError):
    code = 'NotPseudoEffective'


class NotBig(OkounkovError):
    code = 'NotBig'


class GramNotNegativeDefinite(OkounkovError):
    code = 'GramNotNegativeDefinite'


class NefTestFailed(OkounkovError):
    code = 'NefTestFailed'


# ==================== Okounkov polygons ====================

class Unbounded(OkounkovError):
    code = 'Unbounded'


class NotAPolygon(OkounkovError):
    code = 'NotAPolygon'


class Mismatch(OkounkovError):
    code = 'Mismatch'


class QuadraticConditionNotMet(OkounkovError):
    code = 'QuadraticConditionNotMet'


# ==================== Toric surfaces ====================

class InvalidPolygon(OkounkovError):
    code = 'InvalidPolygon'


class InvalidFan(OkounkovError):
    code = 'InvalidFan'


class NonAdjacentFlag(OkounkovError):
    code = 'NonAdjacentFlag'


class MissingAxisRays(OkounkovError):
    code = 'MissingAxisRays'


# ==================== Slice bodies ====================

class HypothesisViolated(OkounkovError):
    code = 'HypothesisViolated'


class InsufficientSamples(OkounkovError):
    code = 'InsufficientSamples'
