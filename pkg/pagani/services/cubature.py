"""Degree-7 fully symmetric cubature and batched region evaluation.

The rule uses five generator orbits on the reference cube [-1, 1]^n: the
centre, +-l2*e_i, +-l3*e_i, (+-l4, +-l4) pairs and the 2^n corners
(+-l5, ..., +-l5). Orbit weights are obtained by solving the moment equations
of the even monomial classes, so the tables are built rather than transcribed.
"""
import inspect
import itertools
import logging
import math
from functools import lru_cache
from typing import Callable, List, Optional, Sequence, Tuple

import numba
import numpy as np
import scipy.linalg

from pagani.core.config import settings
from pagani.core.exceptions import (
    DimensionOutOfRangeException, RuleConstructionException, ValidationException
)
from pagani.models.region_models import EvalOutput, RegionBatch, RuleTable
from pagani.services.geometry import IntegrationDomain

logger = logging.getLogger(__name__)

CENTER, AXIS_INNER, AXIS_OUTER, PAIR, CORNER = range(5)
GENERATOR_NAMES = ["center", "axis-lambda2", "axis-lambda3", "pair-lambda4", "corner-lambda5"]
LAMBDA_SQUARED = (0.0, 9.0 / 70.0, 9.0 / 10.0, 9.0 / 10.0, 9.0 / 19.0)

# even monomial classes as exponent tuples on the leading axes
DEGREE7_CLASSES = [(0,), (2,), (4,), (2, 2), (6,), (4, 2), (2, 2, 2)]
DEGREE5_CLASSES = [(0,), (2,), (4,), (2, 2)]
DEGREE3_CLASSES = [(0,), (2,)]
MOMENT_TOLERANCE = 1e-12
# fourth differences this small relative to the probed values leave no preferred axis;
# such regions split their longest edge
FLAT_DIFFERENCE = 1e-12

def pointCount(dim: int) -> int:
    return 2**dim + 2 * dim * (dim - 1) + 4 * dim + 1


def _generatePoints(dim: int) -> Tuple[np.ndarray, np.ndarray]:
    lambdas = [math.sqrt(value) for value in LAMBDA_SQUARED]
    points: List[np.ndarray] = [np.zeros(dim)]
    orbits: List[int] = [CENTER]

    for orbit in (AXIS_INNER, AXIS_OUTER):
        for axis in range(dim):
            for sign in (1.0, -1.0):
                point = np.zeros(dim)
                point[axis] = sign * lambdas[orbit]
                points.append(point)
                orbits.append(orbit)

    for first, second in itertools.combinations(range(dim), 2):
        for signFirst, signSecond in ((1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)):
            point = np.zeros(dim)
            point[first] = signFirst * lambdas[PAIR]
            point[second] = signSecond * lambdas[PAIR]
            points.append(point)
            orbits.append(PAIR)

    for signs in itertools.product((1.0, -1.0), repeat=dim):
        points.append(lambdas[CORNER] * np.asarray(signs))
        orbits.append(CORNER)

    return np.vstack(points), np.asarray(orbits, dtype=np.int64)


def _momentSystem(
    referencePoints: np.ndarray, orbitOf: np.ndarray, classes: Sequence[Tuple[int, ...]], orbits: Sequence[int]
) -> Tuple[np.ndarray, np.ndarray]:
    dim = referencePoints.shape[1]
    usable = [exponents for exponents in classes if len(exponents) <= dim]
    matrix = np.zeros((len(usable), len(orbits)))
    target = np.zeros(len(usable))
    for row, exponents in enumerate(usable):
        monomial = np.ones(referencePoints.shape[0])
        for axis, power in enumerate(exponents):
            monomial = monomial * referencePoints[:, axis] ** power
        for column, orbit in enumerate(orbits):
            matrix[row, column] = np.sum(monomial[orbitOf == orbit])
        # normalized moment of x^a on [-1, 1] is 1/(a+1) for even a
        target[row] = np.prod([1.0 / (power + 1) for power in exponents])
    return matrix, target


def _solveOrbitWeights(
    dim: int, referencePoints: np.ndarray, orbitOf: np.ndarray, classes: Sequence[Tuple[int, ...]], orbits: Sequence[int]
) -> np.ndarray:
    matrix, target = _momentSystem(referencePoints, orbitOf, classes, orbits)
    solution, _, _, _ = scipy.linalg.lstsq(matrix, target)
    residual = float(np.max(np.abs(matrix @ solution - target)))
    if residual > MOMENT_TOLERANCE:
        raise RuleConstructionException(dim, residual)
    pointWeights = np.zeros(referencePoints.shape[0])
    for orbit, weight in zip(orbits, solution):
        pointWeights[orbitOf == orbit] = weight
    return pointWeights


def _degree3NullRule(
    dim: int, referencePoints: np.ndarray, orbitOf: np.ndarray, orbits: Sequence[int]
) -> np.ndarray:
    matrix, _ = _momentSystem(referencePoints, orbitOf, DEGREE3_CLASSES, orbits)
    basis = scipy.linalg.null_space(matrix)
    if basis.shape[1] != 1:
        raise RuleConstructionException(dim, float(basis.shape[1]))
    orbitWeights = basis[:, 0]
    if orbitWeights[0] < 0:
        orbitWeights = -orbitWeights
    pointWeights = np.zeros(referencePoints.shape[0])
    for orbit, weight in zip(orbits, orbitWeights):
        pointWeights[orbitOf == orbit] = weight
    return pointWeights


def _scaledTo(weights: np.ndarray, norm: float) -> np.ndarray:
    return weights * (norm / np.linalg.norm(weights))


@lru_cache(maxsize=None)
def buildRule(dim: int) -> RuleTable:
    if not 1 <= dim <= settings.maxDimension:
        raise DimensionOutOfRangeException(dim, settings.maxDimension)

    referencePoints, orbitOf = _generatePoints(dim)
    presentOrbits = [orbit for orbit in range(5) if np.any(orbitOf == orbit)]

    integralWeights = _solveOrbitWeights(dim, referencePoints, orbitOf, DEGREE7_CLASSES, presentOrbits)
    degree5Weights = _solveOrbitWeights(
        dim, referencePoints, orbitOf, DEGREE5_CLASSES, [orbit for orbit in presentOrbits if orbit != CORNER]
    )

    norm = float(np.linalg.norm(integralWeights))
    secondAxisPartner = PAIR if dim > 1 else CORNER
    nullRules = [
        _scaledTo(integralWeights - degree5Weights, norm),
        _scaledTo(_degree3NullRule(dim, referencePoints, orbitOf, [CENTER, AXIS_INNER, AXIS_OUTER]), norm),
        _scaledTo(_degree3NullRule(dim, referencePoints, orbitOf, [CENTER, AXIS_INNER, secondAxisPartner]), norm),
        _scaledTo(_degree3NullRule(dim, referencePoints, orbitOf, [CENTER, AXIS_OUTER, CORNER]), norm),
    ]

    probes = np.empty((dim, 4), dtype=np.int64)
    for axis in range(dim):
        probes[axis] = [1 + 2 * axis, 2 + 2 * axis, 1 + 2 * dim + 2 * axis, 2 + 2 * dim + 2 * axis]

    weightSets = np.vstack([integralWeights] + nullRules)
    unitPoints = 0.5 + 0.5 * referencePoints
    for array in (unitPoints, weightSets, degree5Weights, probes):
        array.setflags(write=False)

    rule = RuleTable(
        dim=dim,
        generators=[(GENERATOR_NAMES[orbit], math.sqrt(LAMBDA_SQUARED[orbit])) for orbit in presentOrbits],
        points=unitPoints,
        weightSets=weightSets,
        degree5Weights=degree5Weights,
        axisProbeIndices=probes,
        probeRatio=LAMBDA_SQUARED[AXIS_INNER] / LAMBDA_SQUARED[AXIS_OUTER],
    )
    logger.debug(
        "Built degree-7 rule for n=%d with %d points over %s", dim, rule.pointCount,
        ", ".join(f"{name} (lambda={magnitude:.6f})" for name, magnitude in rule.generators),
    )
    return rule


def _makeKernel(integrand: Callable) -> Callable:
    @numba.njit(parallel=True)
    def evaluateRegions(
        lows, lengths, origin, extent, jacobian, points, weightSets, probes, probeRatio,
        estimates, rawErrors, splitAxes, nonFinite,
    ):
        dim = lows.shape[0]
        count = lows.shape[1]
        npts = points.shape[0]
        nsets = weightSets.shape[0]
        for j in numba.prange(count):
            x = np.empty(dim)
            values = np.empty(npts)
            volume = jacobian
            for i in range(dim):
                volume *= lengths[i, j]
            bad = False
            for p in range(npts):
                for i in range(dim):
                    x[i] = origin[i] + extent[i] * (lows[i, j] + lengths[i, j] * points[p, i])
                values[p] = integrand(x)
                if not math.isfinite(values[p]):
                    bad = True

            estimate = 0.0
            for p in range(npts):
                estimate += weightSets[0, p] * values[p]
            worst = 0.0
            for k in range(1, nsets):
                acc = 0.0
                for p in range(npts):
                    acc += weightSets[k, p] * values[p]
                if abs(acc) > worst:
                    worst = abs(acc)

            centre = values[0]
            best = -1.0
            axis = 0
            scale = abs(centre)
            for i in range(dim):
                inner = values[probes[i, 0]] + values[probes[i, 1]] - 2.0 * centre
                outer = values[probes[i, 2]] + values[probes[i, 3]] - 2.0 * centre
                diff = abs(inner - probeRatio * outer)
                if diff > best:
                    best = diff
                    axis = i
                for k in range(4):
                    scale = max(scale, abs(values[probes[i, k]]))
            if best <= FLAT_DIFFERENCE * scale:
                longest = -1.0
                for i in range(dim):
                    edge = extent[i] * lengths[i, j]
                    if edge > longest:
                        longest = edge
                        axis = i

            estimates[j] = volume * estimate
            splitAxes[j] = axis
            nonFinite[j] = bad
            rawErrors[j] = np.inf if bad else volume * worst

    return evaluateRegions


class IntegrandAdapter:
    """Routes an integrand through the numba kernel, or the Python path when it cannot be compiled."""

    def __init__(self, integrand: Callable):
        self.integrand = integrand
        self.usePython = False
        self.kernel = None
        if isinstance(integrand, numba.core.dispatcher.Dispatcher):
            self.kernel = _makeKernel(integrand)
        elif inspect.isfunction(integrand):
            self.kernel = _makeKernel(numba.njit(integrand))
        else:
            logger.warning("Integrand %r is not a function, using the Python evaluation path", integrand)
            self.usePython = True

    def run(self, batch: RegionBatch, rule: RuleTable, domain: IntegrationDomain, out: Tuple[np.ndarray, ...]) -> None:
        if not self.usePython:
            try:
                self.kernel(
                    batch.lows, batch.lengths, domain.origin, domain.extent, domain.jacobian,
                    rule.points, rule.weightSets, rule.axisProbeIndices, rule.probeRatio, *out
                )
                return
            except numba.core.errors.NumbaError as exc:
                logger.warning("Integrand could not be compiled, using the Python evaluation path: %s", exc)
                self.usePython = True
        _evaluateRegionsPython(self.integrand, batch, rule, domain, *out)


def _weightedSum(weights: np.ndarray, values: np.ndarray) -> float:
    total = 0.0
    for weight, value in zip(weights, values):
        total += weight * value
    return total


def _evaluateRegionsPython(
    integrand: Callable, batch: RegionBatch, rule: RuleTable, domain: IntegrationDomain,
    estimates: np.ndarray, rawErrors: np.ndarray, splitAxes: np.ndarray, nonFinite: np.ndarray,
) -> None:
    probes = rule.axisProbeIndices
    for j in range(batch.count):
        volume = domain.jacobian
        for i in range(batch.dim):
            volume *= batch.lengths[i, j]
        unitPoints = batch.lows[:, j] + batch.lengths[:, j] * rule.points
        values = np.array([float(integrand(point)) for point in domain.toDomain(unitPoints)])
        bad = not bool(np.all(np.isfinite(values)))

        estimate = _weightedSum(rule.weightSets[0], values)
        worst = max(abs(_weightedSum(weights, values)) for weights in rule.weightSets[1:])
        centre = values[0]
        inner = values[probes[:, 0]] + values[probes[:, 1]] - 2.0 * centre
        outer = values[probes[:, 2]] + values[probes[:, 3]] - 2.0 * centre
        diffs = np.abs(inner - rule.probeRatio * outer)
        scale = max(abs(centre), float(np.max(np.abs(values[probes]))))
        estimates[j] = volume * estimate
        if diffs.max() <= FLAT_DIFFERENCE * scale:
            splitAxes[j] = int(np.argmax(domain.extent * batch.lengths[:, j]))
        else:
            splitAxes[j] = int(np.argmax(diffs))
        nonFinite[j] = bad
        rawErrors[j] = np.inf if bad else volume * worst


@lru_cache(maxsize=64)
def _adapterFor(integrand: Callable) -> IntegrandAdapter:
    return IntegrandAdapter(integrand)


def evaluateBatch(
    integrand: Callable, batch: RegionBatch, rule: RuleTable, domain: Optional[IntegrationDomain] = None
) -> EvalOutput:
    if batch.count == 0:
        raise ValidationException("Cannot evaluate an empty region batch.")
    if rule.dim != batch.dim:
        raise ValidationException(f"Rule dimension {rule.dim} does not match batch dimension {batch.dim}.")
    if domain is None:
        domain = IntegrationDomain(origin=np.zeros(batch.dim), extent=np.ones(batch.dim), jacobian=1.0)

    count = batch.count
    out = (np.empty(count), np.empty(count), np.empty(count, dtype=np.int64), np.empty(count, dtype=np.bool_))
    _adapterFor(integrand).run(batch, rule, domain, out)

    estimates, rawErrors, splitAxes, nonFinite = out
    if nonFinite.any():
        logger.warning("Integrand returned non-finite values in %d of %d regions", int(nonFinite.sum()), count)
    return EvalOutput(
        estimates=estimates,
        rawErrors=rawErrors,
        splitAxes=splitAxes,
        nonFinite=nonFinite,
        evalCount=count * rule.pointCount,
    )
