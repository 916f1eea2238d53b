import heapq
import itertools
import logging
import math
from typing import Callable, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from pagani.core.config import settings
from pagani.core.exceptions import InvariantViolationException
from pagani.models.integration_models import Accumulators, IntegrationResult, IntegrationStatus, IntegratorConfig
from pagani.models.region_models import Bounds, RegionBatch
from pagani.services.cubature import buildRule, evaluateBatch
from pagani.services.errorest import twoLevelRefine
from pagani.services.geometry import IntegrationDomain, bisect, uniformSplit
from pagani.services.pagani_driver import CONSERVATION_TOLERANCE, checkTermination

logger = logging.getLogger(__name__)

RESUM_INTERVAL = 1024

class HeapRegion(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    low: np.ndarray
    length: np.ndarray
    estimate: float
    error: float
    splitAxis: int


class RegionHeap:
    """Max-heap on error estimates; ties pop in insertion order."""

    def __init__(self):
        self._entries: List[Tuple[float, int, HeapRegion]] = []
        self._counter = itertools.count()

    def __len__(self) -> int:
        return len(self._entries)

    def push(self, region: HeapRegion) -> None:
        heapq.heappush(self._entries, (-region.error, next(self._counter), region))

    def pop(self) -> HeapRegion:
        return heapq.heappop(self._entries)[2]

    def peekError(self) -> float:
        return -self._entries[0][0]

    def totals(self) -> Tuple[float, float]:
        return (
            math.fsum(entry[2].estimate for entry in self._entries),
            math.fsum(entry[2].error for entry in self._entries),
        )

    def estimateMass(self) -> float:
        return math.fsum(abs(entry[2].estimate) for entry in self._entries)

    @staticmethod
    def fromBatch(batch: RegionBatch) -> List[HeapRegion]:
        return [
            HeapRegion(
                low=batch.lows[:, j].copy(),
                length=batch.lengths[:, j].copy(),
                estimate=float(batch.estimates[j]),
                error=float(batch.errors[j]),
                splitAxis=int(batch.splitAxis[j]),
            )
            for j in range(batch.count)
        ]


class ReferenceIntegrator:
    """Globally adaptive integration that always bisects the region with the largest error."""

    def integrateSequential(
        self,
        integrand: Callable,
        bounds: Bounds,
        tauRel: float,
        tauAbs: Optional[float] = None,
        maxEvals: Optional[int] = None,
        debugChecks: Optional[bool] = None,
    ) -> IntegrationResult:
        config = IntegratorConfig.fromSettings(tauRel, tauAbs=tauAbs, debugChecks=debugChecks)
        maxEvals = settings.referenceMaxEvals if maxEvals is None else maxEvals
        domain = IntegrationDomain.fromBounds(bounds)
        rule = buildRule(bounds.dim)

        root = uniformSplit(Bounds.unitCube(bounds.dim), 1, maxRegions=1)
        evaluation = evaluateBatch(integrand, root, rule, domain)
        root.estimates, root.errors, root.splitAxis = evaluation.estimates, evaluation.rawErrors, evaluation.splitAxes
        evalCount = evaluation.evalCount
        regionsGenerated = 1
        pops = 0

        heap = RegionHeap()
        for region in RegionHeap.fromBatch(root):
            heap.push(region)
        acc = Accumulators(v=float(root.estimates[0]), e=float(root.errors[0]))
        nonFinite = bool(evaluation.nonFinite.any())

        def finish(status: IntegrationStatus) -> IntegrationResult:
            errorest = math.inf if nonFinite else acc.e
            logger.info(
                "Reference finished: status=%s pops=%d regions=%d evaluations=%d estimate=%.12g errorest=%.3g",
                status.value, pops, regionsGenerated, evalCount, acc.v, errorest,
            )
            return IntegrationResult(
                estimate=acc.v, errorest=errorest, status=status, iterations=pops,
                regionsGenerated=regionsGenerated, evalCount=evalCount,
            )

        while True:
            if nonFinite:
                return finish(IntegrationStatus.MEMORY_EXHAUSTED)
            if checkTermination(acc, config):
                # incremental totals drift; confirm on an exact re-sum
                acc.v, acc.e = heap.totals()
                if checkTermination(acc, config):
                    return finish(IntegrationStatus.CONVERGED)
            if evalCount >= maxEvals:
                return finish(IntegrationStatus.MAX_ITERATIONS)

            parent = heap.pop()
            pops += 1
            single = RegionBatch.fromGeometry(parent.low[:, None], parent.length[:, None])
            single.estimates[0], single.errors[0], single.splitAxis[0] = parent.estimate, parent.error, parent.splitAxis
            children = bisect(single, maxRegions=2)

            evaluation = evaluateBatch(integrand, children, rule, domain)
            evalCount += evaluation.evalCount
            regionsGenerated += 2
            children.estimates = evaluation.estimates
            children.splitAxis = evaluation.splitAxes
            children.errors = twoLevelRefine(
                evaluation.estimates, evaluation.rawErrors, children.parentEstimates, children.parentErrors,
                config.refinementFloor,
            )
            nonFinite = bool(evaluation.nonFinite.any())
            for region in RegionHeap.fromBatch(children):
                heap.push(region)

            acc.v += float(np.sum(children.estimates)) - parent.estimate
            acc.e += float(np.sum(children.errors)) - parent.error
            if config.debugChecks:
                self._checkRunningTotals(acc, heap)
            if pops % RESUM_INTERVAL == 0:
                acc.v, acc.e = heap.totals()
                logger.debug(
                    "pop %d: regions=%d v=%.12g e=%.3g largest=%.3g", pops, len(heap), acc.v, acc.e, heap.peekError()
                )

    @staticmethod
    def _checkRunningTotals(acc: Accumulators, heap: RegionHeap) -> None:
        exactEstimate, _ = heap.totals()
        if abs(acc.v - exactEstimate) > CONSERVATION_TOLERANCE * max(heap.estimateMass(), 1e-300):
            raise InvariantViolationException(
                "estimate conservation", f"running total {acc.v} != heap total {exactEstimate}"
            )


referenceIntegrator = ReferenceIntegrator()

def integrateSequential(
    integrand: Callable,
    bounds: Bounds,
    tauRel: float,
    tauAbs: Optional[float] = None,
    maxEvals: Optional[int] = None,
    debugChecks: Optional[bool] = None,
) -> IntegrationResult:
    return referenceIntegrator.integrateSequential(integrand, bounds, tauRel, tauAbs, maxEvals, debugChecks)
