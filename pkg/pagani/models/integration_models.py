import math
from enum import Enum
from typing import Any, Callable, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from pagani.core.config import settings
from pagani.core.exceptions import ValidationException

class IntegrationStatus(str, Enum):
    CONVERGED = "Converged"
    MAX_ITERATIONS = "MaxIterations"
    MEMORY_EXHAUSTED = "MemoryExhausted"


class IntegratorConfig(BaseModel):
    tauRel: float
    tauAbs: float = Field(default_factory=lambda: settings.tauAbs)
    itMax: int = Field(default_factory=lambda: settings.itMax)
    maxRegions: int = Field(default_factory=lambda: settings.maxRegions)
    initTarget: int = Field(default_factory=lambda: settings.initTarget)
    relFilteringEnabled: bool = True
    refinerName: Literal["clamped", "identity"] = Field(default_factory=lambda: settings.refinerName)
    refinementFloor: float = Field(default_factory=lambda: settings.refinementFloor)
    directionChangeLimit: int = Field(default_factory=lambda: settings.directionChangeLimit)
    attemptLimit: int = Field(default_factory=lambda: settings.attemptLimit)
    debugChecks: bool = Field(default_factory=lambda: settings.debugChecks)

    @model_validator(mode="after")
    def checkConfig(self) -> "IntegratorConfig":
        if not self.tauRel > 0:
            raise ValidationException(f"tauRel must be positive, got {self.tauRel}.")
        if not self.tauAbs >= 0:
            raise ValidationException(f"tauAbs must be nonnegative, got {self.tauAbs}.")
        if self.itMax < 1:
            raise ValidationException(f"itMax must be at least 1, got {self.itMax}.")
        if self.initTarget < 1:
            raise ValidationException(f"initTarget must be at least 1, got {self.initTarget}.")
        if self.maxRegions < 2 * self.initTarget:
            raise ValidationException(
                f"maxRegions ({self.maxRegions}) must be at least twice initTarget ({self.initTarget})."
            )
        if not 0 < self.refinementFloor <= 1:
            raise ValidationException(f"refinementFloor must lie in (0, 1], got {self.refinementFloor}.")
        return self

    @property
    def digitsForConvergence(self) -> int:
        return max(1, math.ceil(math.log10(1.0 / self.tauRel)))

    @classmethod
    def fromSettings(cls, tauRel: float, **overrides: Any) -> "IntegratorConfig":
        return cls(tauRel=tauRel, **{k: v for k, v in overrides.items() if v is not None})


class Accumulators(BaseModel):
    v: float = 0.0
    e: float = 0.0
    vF: float = 0.0
    eF: float = 0.0
    finishedVolume: float = 0.0

    @property
    def totalEstimate(self) -> float:
        return self.v + self.vF

    @property
    def totalError(self) -> float:
        return self.e + self.eF


class ThresholdState(BaseModel):
    t: float
    minErr: float
    maxErr: float
    pMax: float = 0.25
    directionChanges: int = 0
    attempts: int = 0


class ThresholdOutcome(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    success: bool
    active: np.ndarray
    errorBudget: float
    headroom: float = math.inf
    state: Optional[ThresholdState] = None
    finishedCount: int = 0
    finishedError: float = 0.0


class ThresholdEvent(BaseModel):
    iteration: int
    triggeredByDigits: bool
    triggeredByMemory: bool
    success: bool
    threshold: Optional[float] = None
    pMax: Optional[float] = None
    errorBudget: float
    headroom: Optional[float] = None
    finishedCount: int
    finishedError: float
    regionCount: int
    retainedFraction: float


class IntegrationResult(BaseModel):
    estimate: float
    errorest: float
    status: IntegrationStatus
    iterations: int
    regionsGenerated: int
    evalCount: int
    thresholdEvents: List[ThresholdEvent] = Field(default_factory=list)

    @property
    def converged(self) -> bool:
        return self.status == IntegrationStatus.CONVERGED


class IntegrandSpec(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    id: str
    dim: int
    integrand: Callable[[np.ndarray], float] = Field(exclude=True)
    referenceValue: float
    referenceProvenance: Literal["closed-form", "oracle-quadrature"]
    signProfile: Literal["one-signed", "oscillatory"]

    @property
    def key(self) -> str:
        return f"{self.id}:{self.dim}"


class BenchRecord(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    integrandId: str = Field(alias="integrand_id")
    dim: int
    tauRel: float = Field(alias="tau_rel")
    estimate: float
    errorest: float
    referenceValue: float = Field(alias="reference_value")
    trueRelErr: float = Field(alias="true_rel_err")
    claimedRelErr: float = Field(alias="claimed_rel_err")
    status: IntegrationStatus
    iterations: int
    regionsGenerated: int = Field(alias="regions_generated")
    evalCount: int = Field(alias="eval_count")
    wallMs: float = Field(alias="wall_ms")

    @property
    def digits(self) -> float:
        return math.log10(1.0 / self.tauRel)


class CompareRecord(BenchRecord):
    integrator: Literal["pagani", "reference"]
    agreement: bool
