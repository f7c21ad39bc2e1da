"""Error hierarchy. Every error carries a stable machine-readable code."""
from typing import Any, Dict, List, Optional


class FiberForgeError(Exception):
    """Base error for all fiberforge failures"""

    code = "FIBERFORGE_ERROR"

    def __init__(self, message: str, details: Optional[List[Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or []

    def to_dict(self) -> Dict[str, Any]:
        return {
            "error": {
                "code": self.code,
                "message": self.message,
                "details": self.details,
            }
        }


class BadManifest(FiberForgeError):
    code = "BAD_MANIFEST"


class BadRational(BadManifest):
    code = "BAD_RATIONAL"


# Graph shape

class EmptyGraph(FiberForgeError):
    code = "EMPTY_GRAPH"


class DisconnectedGraph(FiberForgeError):
    code = "DISCONNECTED_GRAPH"


class NonPositiveB(FiberForgeError):
    code = "NON_POSITIVE_B"


class DuplicateId(FiberForgeError):
    code = "DUPLICATE_ID"


class UnknownVertex(FiberForgeError):
    code = "UNKNOWN_VERTEX"


# Gluing data

class MissingGluing(FiberForgeError):
    code = "MISSING_GLUING"


class FiberMatch(FiberForgeError):
    code = "FIBER_MATCH"


class BadDeterminant(FiberForgeError):
    code = "BAD_DETERMINANT"


# Linear algebra and certificates

class NotSymmetric(FiberForgeError):
    code = "NOT_SYMMETRIC"


class CrossBlockNonzero(FiberForgeError):
    code = "CROSS_BLOCK_NONZERO"


class IndexMismatch(FiberForgeError):
    code = "INDEX_MISMATCH"


class VerificationFailed(FiberForgeError):
    code = "VERIFICATION_FAILED"


class IdentityViolation(FiberForgeError):
    code = "IDENTITY_VIOLATION"


class InfeasibleShape(FiberForgeError):
    code = "INFEASIBLE_SHAPE"
