import itertools

import numpy as np
import pytest

from pagani.core.exceptions import InvariantViolationException
from pagani.models.integration_models import IntegrationStatus, IntegratorConfig
from pagani.models.region_models import Bounds
from pagani.services import integrands
from pagani.services.pagani_driver import paganiDriver
from pagani.services.reference_integrator import HeapRegion, RegionHeap, integrateSequential, referenceIntegrator
from tests.conftest import constantOne, infiniteNearCorner


def _region(error, estimate=1.0):
    return HeapRegion(low=np.zeros(1), length=np.ones(1), estimate=estimate, error=error, splitAxis=0)


def test_heap_pops_largest_error_first_and_ties_in_insertion_order():
    heap = RegionHeap()
    first, second, largest = _region(0.5, 1.0), _region(0.5, 2.0), _region(0.9, 3.0)
    for region in (first, second, largest):
        heap.push(region)
    assert heap.peekError() == 0.9
    assert heap.pop() is largest
    assert heap.pop() is first
    assert heap.pop() is second
    assert len(heap) == 0


def test_heap_totals():
    heap = RegionHeap()
    for k in range(10):
        heap.push(_region(0.1 * k, estimate=float(k)))
    estimate, error = heap.totals()
    assert estimate == pytest.approx(45.0)
    assert error == pytest.approx(4.5)


def test_constant_integrand_converges_after_root():
    result = referenceIntegrator.integrateSequential(constantOne, Bounds.unitCube(3), 1e-3)
    assert result.status == IntegrationStatus.CONVERGED
    assert result.iterations == 0
    assert result.estimate == pytest.approx(1.0, rel=1e-12)


def test_zero_budget_stops_after_root():
    spec = integrands.getSpec("f4", 2)
    result = integrateSequential(spec.integrand, Bounds.unitCube(2), 1e-3, maxEvals=0)
    assert result.status == IntegrationStatus.MAX_ITERATIONS
    assert result.regionsGenerated == 1
    assert result.evalCount == 17


def test_agrees_with_pagani_on_corner_peak():
    spec = integrands.getSpec("f3", 3)
    reference = integrateSequential(spec.integrand, Bounds.unitCube(3), 1e-3)
    pagani = paganiDriver.integrate(spec.integrand, Bounds.unitCube(3), IntegratorConfig.fromSettings(1e-3))
    assert reference.converged and pagani.converged
    assert abs(reference.estimate - pagani.estimate) <= reference.errorest + pagani.errorest
    assert abs(reference.estimate - spec.referenceValue) <= 1e-3 * spec.referenceValue


def test_counts_grow_by_two_regions_per_pop():
    spec = integrands.getSpec("f5", 2)
    result = integrateSequential(spec.integrand, Bounds.unitCube(2), 1e-4)
    assert result.regionsGenerated == 1 + 2 * result.iterations
    assert result.evalCount == 17 * result.regionsGenerated


def test_non_finite_values_stop_the_search():
    result = integrateSequential(infiniteNearCorner, Bounds.unitCube(2), 1e-3)
    assert result.status == IntegrationStatus.MEMORY_EXHAUSTED
    assert result.errorest == float("inf")


@pytest.mark.parametrize("integrandId,dim", [("f3", 2), ("f4", 2), ("f5", 3), ("f6", 2)])
def test_running_totals_match_the_heap_after_every_pop(integrandId, dim):
    spec = integrands.getSpec(integrandId, dim)
    result = integrateSequential(spec.integrand, Bounds.unitCube(dim), 1e-6, maxEvals=20_000, debugChecks=True)
    assert result.iterations > 0
    assert np.isfinite(result.estimate)


def test_running_total_check_catches_a_dropped_region(monkeypatch):
    original = RegionHeap.push
    pushes = itertools.count()

    def droppingPush(self, region):
        # the first child of the second pop never reaches the heap
        if next(pushes) != 3:
            original(self, region)

    monkeypatch.setattr(RegionHeap, "push", droppingPush)
    spec = integrands.getSpec("f4", 2)
    with pytest.raises(InvariantViolationException):
        integrateSequential(spec.integrand, Bounds.unitCube(2), 1e-8, maxEvals=10_000, debugChecks=True)
