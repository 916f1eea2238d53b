import logging
import math
import time
from typing import Any, List, Optional

from pagani.core.exceptions import BadArgumentsException, ValidationException
from pagani.models.integration_models import (
    BenchRecord, CompareRecord, IntegrandSpec, IntegrationResult, IntegratorConfig
)
from pagani.models.region_models import Bounds
from pagani.services import integrands
from pagani.services.pagani_driver import paganiDriver
from pagani.services.reference_integrator import referenceIntegrator

logger = logging.getLogger(__name__)

BASE_TOLERANCE = 1e-3
TOLERANCE_FACTOR = 5
MAX_K = 10

def toleranceSequence(kMax: int) -> List[float]:
    if not 0 <= kMax <= MAX_K:
        raise ValidationException(f"k-max must lie in 0..{MAX_K}, got {kMax}.")
    return [BASE_TOLERANCE / TOLERANCE_FACTOR**k for k in range(kMax + 1)]


def parseSubset(subset: str) -> List[IntegrandSpec]:
    """Resolve 'standard', 'desk', '' or a comma list of id:dim into integrand specs."""
    text = subset.strip()
    if text == "":
        return []
    if text == "standard":
        return [integrands.getSpec(*key) for key in integrands.standardConfigurations()]
    if text == "desk":
        return [integrands.getSpec(*key) for key in integrands.deskConfigurations()]

    specs = []
    for item in text.split(","):
        integrandId, sep, dimText = item.strip().partition(":")
        if not sep:
            raise BadArgumentsException(f"Subset entry '{item.strip()}' is not of the form id:dim.")
        try:
            dim = int(dimText)
        except ValueError:
            raise BadArgumentsException(f"Subset entry '{item.strip()}' has a non-integer dimension.")
        specs.append(integrands.getSpec(integrandId, dim))
    return specs


def configFor(spec: IntegrandSpec, tauRel: float, **overrides: Any) -> IntegratorConfig:
    config = IntegratorConfig.fromSettings(tauRel, **overrides)
    if spec.signProfile == "oscillatory":
        config.relFilteringEnabled = False
    return config


def _relativeError(estimate: float, reference: float) -> float:
    if reference == 0:
        return abs(estimate)
    return abs(estimate - reference) / abs(reference)


def _claimedRelativeError(result: IntegrationResult) -> float:
    if result.estimate == 0:
        return 0.0 if result.errorest == 0 else math.inf
    return result.errorest / abs(result.estimate)


def buildRecord(spec: IntegrandSpec, tauRel: float, result: IntegrationResult, wallMs: float) -> BenchRecord:
    return BenchRecord(
        integrandId=spec.id,
        dim=spec.dim,
        tauRel=tauRel,
        estimate=result.estimate,
        errorest=result.errorest,
        referenceValue=spec.referenceValue,
        trueRelErr=_relativeError(result.estimate, spec.referenceValue),
        claimedRelErr=_claimedRelativeError(result),
        status=result.status,
        iterations=result.iterations,
        regionsGenerated=result.regionsGenerated,
        evalCount=result.evalCount,
        wallMs=wallMs,
    )


def runPagani(spec: IntegrandSpec, config: IntegratorConfig) -> BenchRecord:
    bounds = Bounds.unitCube(spec.dim)
    start = time.perf_counter()
    result = paganiDriver.integrate(spec.integrand, bounds, config)
    wallMs = (time.perf_counter() - start) * 1000.0
    record = buildRecord(spec, config.tauRel, result, wallMs)
    logger.info(
        "%s tau=%.3e status=%s true_rel_err=%.3e regions=%d wall_ms=%.1f",
        spec.key, config.tauRel, record.status.value, record.trueRelErr, record.regionsGenerated, wallMs,
    )
    return record


def runReference(spec: IntegrandSpec, tauRel: float, tauAbs: Optional[float] = None) -> BenchRecord:
    bounds = Bounds.unitCube(spec.dim)
    start = time.perf_counter()
    result = referenceIntegrator.integrateSequential(spec.integrand, bounds, tauRel, tauAbs)
    wallMs = (time.perf_counter() - start) * 1000.0
    return buildRecord(spec, tauRel, result, wallMs)


def runBench(specs: List[IntegrandSpec], kMax: int, **overrides: Any) -> List[BenchRecord]:
    tolerances = toleranceSequence(kMax)
    records = []
    for spec in specs:
        for tauRel in tolerances:
            records.append(runPagani(spec, configFor(spec, tauRel, **overrides)))
    return records


def runCompare(specs: List[IntegrandSpec], tauRel: float, **overrides: Any) -> List[CompareRecord]:
    records = []
    for spec in specs:
        config = configFor(spec, tauRel, **overrides)
        paganiRecord = runPagani(spec, config)
        referenceRecord = runReference(spec, tauRel, config.tauAbs)
        agreement = abs(paganiRecord.estimate - referenceRecord.estimate) <= (
            paganiRecord.errorest + referenceRecord.errorest
        )
        logger.info("%s tau=%.3e agreement=%s", spec.key, tauRel, agreement)
        for integrator, record in (("pagani", paganiRecord), ("reference", referenceRecord)):
            records.append(CompareRecord(**record.model_dump(), integrator=integrator, agreement=agreement))
    return records
