import logging
import math
from typing import Callable, List, Optional

import numpy as np

from pagani.core.exceptions import InvariantViolationException
from pagani.models.integration_models import (
    Accumulators, IntegrationResult, IntegrationStatus, IntegratorConfig, ThresholdEvent
)
from pagani.models.region_models import Bounds, RegionBatch
from pagani.services.classify import filterRegions, relErrClassify, thresholdClassify
from pagani.services.cubature import buildRule, evaluateBatch
from pagani.services.errorest import buildRefiner
from pagani.services.geometry import IntegrationDomain, bisect, chooseSplitDepth, uniformSplit

logger = logging.getLogger(__name__)

CONSERVATION_TOLERANCE = 1e-10
VOLUME_TOLERANCE = 1e-9

def checkTermination(acc: Accumulators, config: IntegratorConfig) -> bool:
    totalError = acc.totalError
    return totalError <= abs(acc.totalEstimate) * config.tauRel or totalError <= config.tauAbs


def digitsConverged(vPrev: float, vCurr: float, digits: int) -> bool:
    if vPrev == 0 and vCurr == 0:
        return True
    if vPrev * vCurr < 0:
        return False
    if not (math.isfinite(vPrev) and math.isfinite(vCurr)):
        return False
    return f"{vPrev:.{digits - 1}e}" == f"{vCurr:.{digits - 1}e}"


def _relativeGap(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


class PaganiDriver:
    """Breadth-first adaptive integration over a shrinking batch of live regions."""

    def integrate(self, integrand: Callable, bounds: Bounds, config: IntegratorConfig) -> IntegrationResult:
        domain = IntegrationDomain.fromBounds(bounds)
        rule = buildRule(bounds.dim)
        refiner = buildRefiner(config.refinerName, config.refinementFloor)

        depth = chooseSplitDepth(bounds.dim, config.initTarget)
        batch = uniformSplit(Bounds.unitCube(bounds.dim), depth, config.maxRegions)
        acc = Accumulators()
        regionsGenerated = batch.count
        evalCount = 0
        previousTotal: Optional[float] = None
        events: List[ThresholdEvent] = []

        def finish(status: IntegrationStatus, iteration: int, estimate: float, errorest: float) -> IntegrationResult:
            logger.info(
                "PAGANI finished: status=%s iterations=%d regions=%d evaluations=%d estimate=%.12g errorest=%.3g",
                status.value, iteration, regionsGenerated, evalCount, estimate, errorest,
            )
            return IntegrationResult(
                estimate=estimate, errorest=errorest, status=status, iterations=iteration,
                regionsGenerated=regionsGenerated, evalCount=evalCount, thresholdEvents=events,
            )

        iteration = 0
        bestEstimate, bestError = 0.0, math.inf
        while iteration < config.itMax:
            iteration += 1
            evaluation = evaluateBatch(integrand, batch, rule, domain)
            evalCount += evaluation.evalCount
            batch.estimates = evaluation.estimates
            batch.splitAxis = evaluation.splitAxes
            if batch.hasParents:
                batch.errors = refiner.refine(
                    evaluation.estimates, evaluation.rawErrors, batch.parentEstimates, batch.parentErrors
                )
            else:
                batch.errors = evaluation.rawErrors.copy()

            acc.v = float(np.sum(batch.estimates))
            acc.e = float(np.sum(batch.errors))
            bestEstimate, bestError = acc.totalEstimate, acc.totalError
            logger.debug(
                "iteration %d: regions=%d v=%.12g e=%.3g vF=%.12g eF=%.3g",
                iteration, batch.count, acc.v, acc.e, acc.vF, acc.eF,
            )

            if evaluation.nonFinite.any():
                logger.warning("Stopping at iteration %d: integrand produced non-finite values", iteration)
                return finish(IntegrationStatus.MEMORY_EXHAUSTED, iteration, bestEstimate, math.inf)
            if checkTermination(acc, config):
                return finish(IntegrationStatus.CONVERGED, iteration, bestEstimate, bestError)

            active = relErrClassify(batch.estimates, batch.errors, config.tauRel, config.relFilteringEnabled)
            total = acc.totalEstimate
            byDigits = previousTotal is not None and digitsConverged(previousTotal, total, config.digitsForConvergence)
            byMemory = 2 * int(np.count_nonzero(active)) > config.maxRegions
            previousTotal = total

            if byDigits or byMemory:
                outcome = thresholdClassify(
                    active, batch.errors, total, acc.totalError, acc.e, batch.count, config.tauRel,
                    config.directionChangeLimit, config.attemptLimit,
                )
                retained = int(np.count_nonzero(outcome.active))
                events.append(ThresholdEvent(
                    iteration=iteration,
                    triggeredByDigits=byDigits,
                    triggeredByMemory=byMemory,
                    success=outcome.success,
                    threshold=outcome.state.t if outcome.state else None,
                    pMax=outcome.state.pMax if outcome.state else None,
                    errorBudget=outcome.errorBudget,
                    headroom=outcome.headroom,
                    finishedCount=outcome.finishedCount,
                    finishedError=outcome.finishedError,
                    regionCount=batch.count,
                    retainedFraction=retained / batch.count,
                ))
                logger.info(
                    "Threshold classification at iteration %d (digits=%s, memory=%s): success=%s retained=%d/%d",
                    iteration, byDigits, byMemory, outcome.success, retained, batch.count,
                )
                if outcome.success:
                    active = outcome.active
                elif byMemory:
                    return finish(IntegrationStatus.MEMORY_EXHAUSTED, iteration, bestEstimate, bestError)

            previousFinishedError = acc.eF
            finishedVolume = float(np.sum(np.where(active, 0.0, batch.volumes())))
            batch, finishedEstimate, finishedError = filterRegions(batch, active)
            acc.vF += finishedEstimate
            acc.eF += finishedError
            acc.finishedVolume += finishedVolume
            if config.debugChecks:
                self._checkFilterInvariants(acc, batch, finishedEstimate, previousFinishedError)

            if batch.count == 0:
                logger.info("Every region finished at iteration %d without meeting the tolerance", iteration)
                return finish(IntegrationStatus.MAX_ITERATIONS, iteration, acc.vF, acc.eF)
            if 2 * batch.count > config.maxRegions:
                return finish(IntegrationStatus.MEMORY_EXHAUSTED, iteration, bestEstimate, bestError)
            # children of the last iteration would never be evaluated
            if iteration == config.itMax:
                break

            survivors = batch.count
            batch = bisect(batch, config.maxRegions)
            regionsGenerated += batch.count
            if config.debugChecks and batch.count != 2 * survivors:
                raise InvariantViolationException("active-count doubling", f"{survivors} regions became {batch.count}")

        return finish(IntegrationStatus.MAX_ITERATIONS, iteration, bestEstimate, bestError)

    @staticmethod
    def _checkFilterInvariants(
        acc: Accumulators, batch: RegionBatch, finishedEstimate: float, previousFinishedError: float
    ) -> None:
        keptEstimate = float(np.sum(batch.estimates))
        if _relativeGap(keptEstimate + finishedEstimate, acc.v) > CONSERVATION_TOLERANCE and abs(acc.v) > 0:
            raise InvariantViolationException(
                "estimate conservation", f"kept {keptEstimate} + finished {finishedEstimate} != {acc.v}"
            )
        if acc.eF < previousFinishedError:
            raise InvariantViolationException("monotone finished error", f"{acc.eF} < {previousFinishedError}")
        # unit-cube coordinates: live plus finished volume is 1
        if abs(batch.totalVolume() + acc.finishedVolume - 1.0) > VOLUME_TOLERANCE:
            raise InvariantViolationException(
                "volume conservation", f"live {batch.totalVolume()} + finished {acc.finishedVolume} != 1"
            )


paganiDriver = PaganiDriver()

def integrate(integrand: Callable, bounds: Bounds, config: IntegratorConfig) -> IntegrationResult:
    return paganiDriver.integrate(integrand, bounds, config)
