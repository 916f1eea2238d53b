import logging

import numpy as np
from pydantic import BaseModel, ConfigDict

from pagani.core.exceptions import CapacityExceededException, ValidationException
from pagani.models.region_models import Bounds, RegionBatch

logger = logging.getLogger(__name__)

class IntegrationDomain(BaseModel):
    """Affine map from the unit cube onto the caller's bounds."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    origin: np.ndarray
    extent: np.ndarray
    jacobian: float

    @classmethod
    def fromBounds(cls, bounds: Bounds) -> "IntegrationDomain":
        origin = np.asarray(bounds.lower, dtype=np.float64)
        extent = bounds.widths
        return cls(origin=origin, extent=extent, jacobian=float(np.prod(extent)))

    def toDomain(self, unitPoints: np.ndarray) -> np.ndarray:
        return self.origin + self.extent * unitPoints


def chooseSplitDepth(dim: int, initTarget: int) -> int:
    """Largest d with d**dim <= initTarget (at least 1)."""
    depth = max(1, int(round(initTarget ** (1.0 / dim))))
    while depth > 1 and depth**dim > initTarget:
        depth -= 1
    while (depth + 1) ** dim <= initTarget:
        depth += 1
    return depth


def uniformSplit(bounds: Bounds, d: int, maxRegions: int) -> RegionBatch:
    if d < 1:
        raise ValidationException(f"Split depth must be positive, got {d}.")
    count = d**bounds.dim
    if count > maxRegions:
        raise CapacityExceededException(requested=count, maxRegions=maxRegions)

    step = bounds.widths / d
    grid = np.indices((d,) * bounds.dim).reshape(bounds.dim, count)
    lows = np.asarray(bounds.lower, dtype=np.float64)[:, None] + grid * step[:, None]
    lengths = np.repeat(step[:, None], count, axis=1)
    logger.debug("Uniform split into %d regions (d=%d, n=%d)", count, d, bounds.dim)
    return RegionBatch.fromGeometry(lows, lengths)


def bisect(batch: RegionBatch, maxRegions: int) -> RegionBatch:
    count = batch.count
    if 2 * count > maxRegions:
        raise CapacityExceededException(requested=2 * count, maxRegions=maxRegions)
    axes = batch.splitAxis.astype(np.int64)
    if count and (axes.min() < 0 or axes.max() >= batch.dim):
        raise ValidationException(f"Split axes must lie in [0, {batch.dim}).")

    parents = np.arange(count)
    left = 2 * parents
    right = left + 1
    half = batch.lengths[axes, parents] * 0.5

    lows = np.repeat(batch.lows, 2, axis=1)
    lengths = np.repeat(batch.lengths, 2, axis=1)
    lengths[axes, left] = half
    lengths[axes, right] = half
    lows[axes, right] += half

    children = RegionBatch.fromGeometry(lows, lengths, hasParents=True)
    children.parentEstimates = np.repeat(batch.estimates, 2)
    children.parentErrors = np.repeat(batch.errors, 2)
    return children
