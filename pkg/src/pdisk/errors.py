"""Error hierarchy shared by every module.

Each error carries a stable machine-readable ``code`` and a ``details``
dict so the command line interface can surface failures verbatim.
"""

from __future__ import annotations

from typing import Any


class PdiskError(Exception):
    """Base class for all library errors."""

    code = "error"

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self.details = details

    def payload(self) -> dict[str, Any]:
        return {"code": self.code, "message": str(self), "details": jsonable(self.details)}


def jsonable(value: Any) -> Any:
    """Best-effort conversion of error details to plain JSON values."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, (int, str, bool)) or value is None:
        return value
    return str(value)


class FieldMismatch(PdiskError):
    code = "FieldMismatch"


class VarMismatch(PdiskError):
    code = "VarMismatch"


class ZeroPrecision(PdiskError):
    code = "ZeroPrecision"


class NonUnit(PdiskError):
    code = "NonUnit"


class NonUnitConstantTerm(NonUnit):
    # refinement of NonUnit for series whose constant term is not invertible
    code = "NonUnitConstantTerm"


class NotAPthPower(PdiskError):
    code = "NotAPthPower"

    def __init__(self, exponent: int, coefficient: int) -> None:
        super().__init__(
            f"coefficient {coefficient} at exponent {exponent} not divisible by p",
            exponent=exponent,
            coefficient=coefficient,
        )
        self.exponent = exponent
        self.coefficient = coefficient


class DimensionMismatch(PdiskError):
    code = "DimensionMismatch"


class RankTooLarge(PdiskError):
    code = "RankTooLarge"


class SingularGauge(PdiskError):
    code = "SingularGauge"


class InsufficientPrecision(PdiskError):
    code = "InsufficientPrecision"


class InternalInconsistency(PdiskError):
    """A theorem-level identity failed on computed data: a bug certificate."""

    code = "InternalInconsistency"


class NonzeroPCurvature(PdiskError):
    """First obstruction met by the flat-section recursion."""

    code = "NonzeroPCurvature"

    def __init__(self, order: int, residual: Any) -> None:
        super().__init__(
            f"flat-section recursion obstructed at order {order}",
            order=order,
            residual=residual,
        )
        self.order = order
        self.residual = residual


class NonSplitResidue(PdiskError):
    code = "NonSplitResidue"

    def __init__(self, message: str, suggested_degree: int) -> None:
        super().__init__(message, suggested_degree=suggested_degree)
        self.suggested_degree = suggested_degree


class RepeatedResidueRoot(PdiskError):
    code = "RepeatedResidueRoot"


class DerivationUnavailable(PdiskError):
    code = "DerivationUnavailable"


class BaseMismatch(PdiskError):
    code = "BaseMismatch"


class CurvatureNotCancelled(PdiskError):
    code = "CurvatureNotCancelled"


class CurvatureNonzero(PdiskError):
    code = "CurvatureNonzero"


class SchemaError(PdiskError):
    """Input file violates a schema; ``path`` points at the offending field."""

    code = "SchemaError"

    def __init__(self, message: str, path: str) -> None:
        super().__init__(message, path=path)
        self.path = path
