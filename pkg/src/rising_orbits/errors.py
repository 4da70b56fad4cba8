"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class RisingOrbitsError(Exception):
    """Base class; ``code`` is the machine-readable name used by the CLI."""

    code = "error"

    def to_dict(self) -> dict:
        return {"error": self.code, "message": str(self)}


class DomainError(RisingOrbitsError, ValueError):
    code = "DomainError"


class RangeError(RisingOrbitsError, ValueError):
    code = "RangeError"


class NotInvertible(RisingOrbitsError, ValueError):
    code = "NotInvertible"


class NotIncreasing(RisingOrbitsError, ValueError):
    code = "NotIncreasing"


class EnvelopeOrderViolated(RisingOrbitsError, ValueError):
    code = "EnvelopeOrderViolated"


class EndpointsNotPreserved(RisingOrbitsError, ValueError):
    code = "EndpointsNotPreserved"


class OverlapError(RisingOrbitsError, ValueError):
    code = "OverlapError"


class OutOfRange(RisingOrbitsError, ValueError):
    code = "OutOfRange"


class ReflectionCollision(RisingOrbitsError, ValueError):
    code = "ReflectionCollision"


class StageOverflow(RisingOrbitsError):
    code = "StageOverflow"


class CapReached(RisingOrbitsError):
    code = "CapReached"


class InternalOrderViolation(RisingOrbitsError, AssertionError):
    code = "InternalOrderViolation"


class NotInImage(RisingOrbitsError, ValueError):
    code = "NotInImage"


class InvalidDisk(RisingOrbitsError, ValueError):
    code = "InvalidDisk"


class Overflow(DomainError, ArithmeticError):
    """Near-edge square point whose tangent image would leave float range."""

    code = "Overflow"


class ParseError(RisingOrbitsError, ValueError):
    code = "ParseError"


class ValidationError(RisingOrbitsError, ValueError):
    code = "ValidationError"

    def __init__(self, message: str, cause: Exception | None = None):
        super().__init__(message)
        self.cause = cause

    def to_dict(self) -> dict:
        d = super().to_dict()
        if isinstance(self.cause, RisingOrbitsError):
            d["cause"] = self.cause.code
        return d
