import logging
from typing import Tuple

import numpy as np

from pagani.core.exceptions import ValidationException
from pagani.models.integration_models import ThresholdOutcome, ThresholdState
from pagani.models.region_models import RegionBatch

logger = logging.getLogger(__name__)

# ClassifyFlags are boolean arrays: True = active, False = finished
P_MAX_START = 0.25
P_MAX_STEP = 0.10
P_MAX_CAP = 0.95
MEMORY_FRACTION = 0.5

def relErrClassify(estimates: np.ndarray, errors: np.ndarray, tauRel: float, filteringEnabled: bool) -> np.ndarray:
    if not filteringEnabled:
        return np.ones(estimates.shape[0], dtype=bool)
    # a zero estimate only finishes with zero error
    finished = errors <= np.abs(estimates) * tauRel
    return ~finished


def applyThreshold(errors: np.ndarray, t: float) -> np.ndarray:
    return ~(errors < t)


def thresholdClassify(
    active: np.ndarray,
    errors: np.ndarray,
    vTot: float,
    eTot: float,
    eIt: float,
    sIt: int,
    tauRel: float,
    directionChangeLimit: int = 4,
    attemptLimit: int = 40,
) -> ThresholdOutcome:
    """Search for an error cutoff that frees memory without overspending the error budget.

    Success means more than half of the sIt regions end up finished and their
    summed error stays within pMax times both the budget eTot - |vTot| * tauRel
    and the headroom |vTot| * tauRel - eF left above the error already frozen
    in earlier iterations (eF = eTot - eIt). Once the frozen error reaches the
    target no cutoff can succeed. On failure the input flags come back unchanged.
    """
    if active.shape[0] != errors.shape[0] or sIt != errors.shape[0]:
        raise ValidationException("Threshold classification needs flags and errors for every region.")
    target = abs(vTot) * tauRel
    errorBudget = eTot - target
    headroom = target - max(eTot - eIt, 0.0)
    failed = ThresholdOutcome(success=False, active=active, errorBudget=errorBudget, headroom=headroom)
    if sIt == 0 or not errorBudget > 0 or not np.isfinite(errorBudget) or not np.isfinite(eIt):
        return failed
    if not headroom > 0:
        logger.debug("Frozen error already meets the target %.3g, no cutoff can succeed", target)
        return failed

    state = ThresholdState(t=eIt / sIt, minErr=float(np.min(errors)), maxErr=float(np.max(errors)), pMax=P_MAX_START)
    lastDirection = 0
    finishedCount = 0
    finishedError = 0.0
    while state.attempts < attemptLimit:
        state.attempts += 1
        flags = active & applyThreshold(errors, state.t)
        finishedCount = sIt - int(np.count_nonzero(flags))
        memoryMet = finishedCount > MEMORY_FRACTION * sIt
        if memoryMet:
            finishedError = float(np.sum(np.where(flags, 0.0, errors)))
            if finishedError <= state.pMax * min(errorBudget, headroom):
                logger.debug(
                    "Threshold %.6g finishes %d of %d regions using %.3g of the error budget",
                    state.t, finishedCount, sIt, finishedError / errorBudget,
                )
                return ThresholdOutcome(
                    success=True, active=flags, errorBudget=errorBudget, headroom=headroom, state=state,
                    finishedCount=finishedCount, finishedError=finishedError,
                )

        direction = 1 if not memoryMet else -1
        if lastDirection and direction != lastDirection:
            state.directionChanges += 1
            if state.directionChanges > directionChangeLimit:
                break
            state.pMax = min(state.pMax + P_MAX_STEP, P_MAX_CAP)
        lastDirection = direction
        if direction > 0:
            state.t += (state.maxErr - state.t) / 2.0
        else:
            state.t -= (state.t - state.minErr) / 2.0

    return ThresholdOutcome(
        success=False, active=active, errorBudget=errorBudget, headroom=headroom, state=state,
        finishedCount=finishedCount, finishedError=finishedError,
    )


def compactionIndices(active: np.ndarray) -> np.ndarray:
    """Stream compaction: exclusive prefix scan over the flags, then scatter."""
    flags = active.astype(np.int64)
    positions = np.cumsum(flags) - flags
    kept = int(positions[-1] + flags[-1]) if flags.size else 0
    indices = np.empty(kept, dtype=np.int64)
    indices[positions[active]] = np.arange(active.shape[0])[active]
    return indices


def filterRegions(batch: RegionBatch, active: np.ndarray) -> Tuple[RegionBatch, float, float]:
    if active.shape[0] != batch.count:
        raise ValidationException(f"Got {active.shape[0]} flags for {batch.count} regions.")
    finishedEstimate = float(np.sum(np.where(active, 0.0, batch.estimates)))
    finishedError = float(np.sum(np.where(active, 0.0, batch.errors)))

    kept = compactionIndices(active)
    compacted = RegionBatch(
        dim=batch.dim,
        lows=np.ascontiguousarray(batch.lows[:, kept]),
        lengths=np.ascontiguousarray(batch.lengths[:, kept]),
        estimates=batch.estimates[kept],
        errors=batch.errors[kept],
        splitAxis=batch.splitAxis[kept],
        active=np.ones(kept.shape[0], dtype=bool),
        parentEstimates=batch.parentEstimates[kept],
        parentErrors=batch.parentErrors[kept],
        hasParents=batch.hasParents,
    )
    return compacted, finishedEstimate, finishedError
