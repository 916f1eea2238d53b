"""Fixed-parameter test integrands f1..f8 on the unit cube with reference values."""
import cmath
import itertools
import math
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

import numba

from pagani.core.config import settings
from pagani.core.exceptions import DimensionOutOfRangeException, UnknownIntegrandException
from pagani.models.integration_models import IntegrandSpec
from pagani.services.golden_values import F7_BOX_VALUES, F8_BOX_VALUES

@numba.njit(cache=True)
def oscillatory(x):
    total = 0.0
    for i in range(x.shape[0]):
        total += (i + 1) * x[i]
    return math.cos(total)


@numba.njit(cache=True)
def productPeak(x):
    result = 1.0
    for i in range(x.shape[0]):
        result *= 1.0 / (1.0 / 2500.0 + (x[i] - 0.5) ** 2)
    return result


@numba.njit(cache=True)
def cornerPeak(x):
    total = 1.0
    for i in range(x.shape[0]):
        total += (i + 1) * x[i]
    return total ** (-(x.shape[0] + 1))


@numba.njit(cache=True)
def gaussian(x):
    total = 0.0
    for i in range(x.shape[0]):
        total += (x[i] - 0.5) ** 2
    return math.exp(-625.0 * total)


@numba.njit(cache=True)
def continuous(x):
    total = 0.0
    for i in range(x.shape[0]):
        total += abs(x[i] - 0.5)
    return math.exp(-10.0 * total)


@numba.njit(cache=True)
def discontinuous(x):
    total = 0.0
    for i in range(x.shape[0]):
        # axis k (1-based) is cut at (3 + k)/10
        if x[i] >= (i + 4) / 10.0:
            return 0.0
        total += (i + 5) * x[i]
    return math.exp(total)


@numba.njit(cache=True)
def boxEleven(x):
    total = 0.0
    for i in range(x.shape[0]):
        total += x[i] * x[i]
    return total**11


@numba.njit(cache=True)
def boxFifteenHalves(x):
    total = 0.0
    for i in range(x.shape[0]):
        total += x[i] * x[i]
    return total**7.5


def _oscillatoryReference(dim: int) -> float:
    product = complex(1.0, 0.0)
    for k in range(1, dim + 1):
        product *= (cmath.exp(1j * k) - 1.0) / (1j * k)
    return product.real


def _productPeakReference(dim: int) -> float:
    return (100.0 * math.atan(25.0)) ** dim


def _cornerPeakReference(dim: int) -> float:
    # iterated antiderivative: sum over axis subsets of (-1)^|S| / (1 + sum_S i), over (d!)^2
    total = Fraction(0)
    for size in range(dim + 1):
        for subset in itertools.combinations(range(1, dim + 1), size):
            total += Fraction((-1) ** size, 1 + sum(subset))
    return float(total / math.factorial(dim) ** 2)


def _gaussianReference(dim: int) -> float:
    return (math.sqrt(math.pi) / 25.0 * math.erf(12.5)) ** dim


def _continuousReference(dim: int) -> float:
    return ((1.0 - math.exp(-5.0)) / 5.0) ** dim


def _discontinuousReference(dim: int) -> float:
    result = 1.0
    for i in range(1, dim + 1):
        cut = min(1.0, (3 + i) / 10.0)
        result *= math.expm1((i + 4) * cut) / (i + 4)
    return result


def boxElevenExact(dim: int) -> Fraction:
    """Integral of (sum x_i^2)^11 via the multinomial expansion, in exact arithmetic."""
    power = 11
    perAxis = [Fraction(1, math.factorial(j) * (2 * j + 1)) for j in range(power + 1)]
    series = [Fraction(1)] + [Fraction(0)] * power
    for _ in range(dim):
        series = [sum(series[i] * perAxis[k - i] for i in range(k + 1)) for k in range(power + 1)]
    return series[power] * math.factorial(power)


def _boxElevenReference(dim: int) -> float:
    if dim in F7_BOX_VALUES:
        return F7_BOX_VALUES[dim]
    return float(boxElevenExact(dim))


def _boxFifteenHalvesReference(dim: int) -> float:
    if dim not in F8_BOX_VALUES:
        raise UnknownIntegrandException("f8", dim)
    return F8_BOX_VALUES[dim]


INTEGRANDS: Dict[str, Tuple[Callable, Callable[[int], float], str, str]] = {
    "f1": (oscillatory, _oscillatoryReference, "closed-form", "oscillatory"),
    "f2": (productPeak, _productPeakReference, "closed-form", "one-signed"),
    "f3": (cornerPeak, _cornerPeakReference, "closed-form", "one-signed"),
    "f4": (gaussian, _gaussianReference, "closed-form", "one-signed"),
    "f5": (continuous, _continuousReference, "closed-form", "one-signed"),
    "f6": (discontinuous, _discontinuousReference, "closed-form", "one-signed"),
    "f7": (boxEleven, _boxElevenReference, "closed-form", "one-signed"),
    "f8": (boxFifteenHalves, _boxFifteenHalvesReference, "oracle-quadrature", "one-signed"),
}

STANDARD_CONFIGURATIONS = [
    ("f1", 8), ("f3", 8), ("f4", 8), ("f5", 8), ("f7", 8), ("f8", 8),
    ("f4", 5), ("f6", 6), ("f3", 3),
]
EXTRA_CONFIGURATIONS = [("f2", 6)]
DESK_DIMENSIONS = (2, 3)


def referenceValue(integrandId: str, dim: int) -> float:
    if integrandId not in INTEGRANDS:
        raise UnknownIntegrandException(integrandId)
    if not 1 <= dim <= settings.maxDimension:
        raise DimensionOutOfRangeException(dim, settings.maxDimension)
    return INTEGRANDS[integrandId][1](dim)


def getSpec(integrandId: str, dim: int) -> IntegrandSpec:
    value = referenceValue(integrandId, dim)
    integrand, _, provenance, signProfile = INTEGRANDS[integrandId]
    return IntegrandSpec(
        id=integrandId,
        dim=dim,
        integrand=integrand,
        referenceValue=value,
        referenceProvenance=provenance,
        signProfile=signProfile,
    )


def standardConfigurations() -> List[Tuple[str, int]]:
    return list(STANDARD_CONFIGURATIONS)


def deskConfigurations() -> List[Tuple[str, int]]:
    return [(integrandId, dim) for integrandId in INTEGRANDS for dim in DESK_DIMENSIONS]


def suite() -> List[IntegrandSpec]:
    seen = set()
    specs = []
    for key in standardConfigurations() + EXTRA_CONFIGURATIONS + deskConfigurations():
        if key not in seen:
            seen.add(key)
            specs.append(getSpec(*key))
    return specs
