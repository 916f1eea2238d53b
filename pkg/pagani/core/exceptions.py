from typing import Any, List, Optional

from pydantic import BaseModel

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_BAD_ARGUMENTS = 2

class ErrorModel(BaseModel):
    message: str
    type: str
    code: int
    stack: Optional[List[str]] = None

class ErrorResponse(BaseModel):
    error: ErrorModel

class BasePaganiException(Exception):
    def __init__(self, exitCode: int, message: str, errorType: str, stack: Optional[List[str]] = None):
        self.exitCode = exitCode
        self.errorType = errorType
        self.message = message
        self.stack = stack
        self.detail = {"error": {
            "message": message,
            "type": errorType,
            "code": exitCode,
            "stack": stack
        }}
        super().__init__(message)

    def toResponse(self) -> ErrorResponse:
        return ErrorResponse(error=ErrorModel(
            message=self.message, type=self.errorType, code=self.exitCode, stack=self.stack
        ))

class BadArgumentsException(BasePaganiException):
    def __init__(self, message: str = "The arguments were malformed or out of range.", errorType: str = "BadArgumentsException"):
        super().__init__(
            exitCode=EXIT_BAD_ARGUMENTS,
            message=message,
            errorType=errorType
        )

class ValidationException(BadArgumentsException):
    def __init__(self, message: str):
        super().__init__(message=message, errorType="ValidationException")

class DimensionOutOfRangeException(ValidationException):
    def __init__(self, dim: int, maxDimension: int):
        super().__init__(message=f"Dimension {dim} is outside the supported range 1..{maxDimension}.")
        self.errorType = "DimensionOutOfRangeException"

class UnknownIntegrandException(BadArgumentsException):
    def __init__(self, integrandId: str, dim: Any = None):
        identifier = integrandId if dim is None else f"{integrandId}:{dim}"
        super().__init__(
            message=f"Integrand with identifier '{identifier}' not found.",
            errorType="UnknownIntegrandException"
        )

class MalformedResultFileException(BadArgumentsException):
    def __init__(self, path: str, reason: str):
        super().__init__(
            message=f"Result file '{path}' could not be used: {reason}",
            errorType="MalformedResultFileException"
        )

class CapacityExceededException(BasePaganiException):
    def __init__(self, requested: int, maxRegions: int):
        super().__init__(
            exitCode=EXIT_FAILURE,
            message=f"Requested {requested} regions but the region budget is {maxRegions}.",
            errorType="CapacityExceededException"
        )

class InternalErrorException(BasePaganiException):
    def __init__(self, message: str = "An unexpected internal error occurred.", errorType: str = "InternalErrorException"):
        super().__init__(
            exitCode=EXIT_FAILURE,
            message=message,
            errorType=errorType
        )

class RuleConstructionException(InternalErrorException):
    def __init__(self, dim: int, residual: float):
        super().__init__(
            message=f"Moment equations for the dimension-{dim} rule left residual {residual:.3e}.",
            errorType="RuleConstructionException"
        )

class InvariantViolationException(InternalErrorException):
    def __init__(self, invariant: str, detail: str):
        super().__init__(
            message=f"Invariant '{invariant}' violated: {detail}",
            errorType="InvariantViolationException"
        )

class StorageException(InternalErrorException):
    def __init__(self, message: str):
        super().__init__(message=message, errorType="StorageException")
