from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from pagani.core.config import settings
from pagani.core.exceptions import DimensionOutOfRangeException, ValidationException

class Bounds(BaseModel):
    lower: List[float]
    upper: List[float]

    @model_validator(mode="after")
    def checkBounds(self) -> "Bounds":
        if len(self.lower) != len(self.upper):
            raise ValidationException(f"Bounds have {len(self.lower)} lower and {len(self.upper)} upper limits.")
        if not 1 <= len(self.lower) <= settings.maxDimension:
            raise DimensionOutOfRangeException(len(self.lower), settings.maxDimension)
        for axis, (lo, hi) in enumerate(zip(self.lower, self.upper)):
            if not lo < hi:
                raise ValidationException(f"Axis {axis} has lower limit {lo} not below upper limit {hi}.")
        return self

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def widths(self) -> np.ndarray:
        return np.asarray(self.upper, dtype=np.float64) - np.asarray(self.lower, dtype=np.float64)

    @property
    def volume(self) -> float:
        return float(np.prod(self.widths))

    @classmethod
    def unitCube(cls, dim: int) -> "Bounds":
        return cls(lower=[0.0] * dim, upper=[1.0] * dim)


class RegionBatch(BaseModel):
    """Structure-of-arrays store for the live sub-regions.

    Per-axis arrays are shaped (dim, count). After a bisect the children of
    old region j sit at 2j and 2j+1, so the sibling of j is j ^ 1.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    dim: int
    lows: np.ndarray
    lengths: np.ndarray
    estimates: np.ndarray
    errors: np.ndarray
    splitAxis: np.ndarray
    active: np.ndarray
    parentEstimates: np.ndarray
    parentErrors: np.ndarray
    hasParents: bool = False

    @property
    def count(self) -> int:
        return int(self.lows.shape[1])

    def volumes(self) -> np.ndarray:
        return np.prod(self.lengths, axis=0)

    def totalVolume(self) -> float:
        return float(np.sum(self.volumes()))

    @staticmethod
    def siblingIndex(index: int) -> int:
        return index ^ 1

    @classmethod
    def empty(cls, dim: int) -> "RegionBatch":
        return cls.fromGeometry(np.empty((dim, 0)), np.empty((dim, 0)))

    @classmethod
    def fromGeometry(cls, lows: np.ndarray, lengths: np.ndarray, hasParents: bool = False) -> "RegionBatch":
        count = lows.shape[1]
        return cls(
            dim=lows.shape[0],
            lows=np.ascontiguousarray(lows, dtype=np.float64),
            lengths=np.ascontiguousarray(lengths, dtype=np.float64),
            estimates=np.zeros(count),
            errors=np.zeros(count),
            splitAxis=np.zeros(count, dtype=np.int64),
            active=np.ones(count, dtype=bool),
            parentEstimates=np.zeros(count),
            parentErrors=np.zeros(count),
            hasParents=hasParents,
        )


class RuleTable(BaseModel):
    """Degree-7 fully symmetric rule on the unit cube with four embedded null rules.

    weightSets[0] is the integral rule, weightSets[1:] the null rules. Points are
    stored in unit-cube coordinates centred at 1/2.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    dim: int
    generators: List[Tuple[str, float]]
    points: np.ndarray
    weightSets: np.ndarray
    degree5Weights: np.ndarray
    axisProbeIndices: np.ndarray
    probeRatio: float

    @property
    def pointCount(self) -> int:
        return int(self.points.shape[0])


class EvalOutput(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    estimates: np.ndarray
    rawErrors: np.ndarray
    splitAxes: np.ndarray
    nonFinite: np.ndarray
    evalCount: int
