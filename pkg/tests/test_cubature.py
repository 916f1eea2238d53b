import itertools

import numba
import numpy as np
import pytest

from pagani.core.exceptions import DimensionOutOfRangeException, ValidationException
from pagani.models.region_models import Bounds, RegionBatch
from pagani.services.cubature import buildRule, evaluateBatch, pointCount
from pagani.services.integrands import cornerPeak, discontinuous
from pagani.services.geometry import IntegrationDomain, uniformSplit
from tests.conftest import (
    ShiftedQuadratic, constantOne, firstAxisNinth, firstAxisSeventh, infiniteNearCorner, quarticOnSecondAxis
)


def _multiIndices(dim, maxDegree):
    for degree in range(maxDegree + 1):
        for combo in itertools.combinations_with_replacement(range(dim), degree):
            alpha = np.zeros(dim, dtype=int)
            for axis in combo:
                alpha[axis] += 1
            yield alpha


def _monomialValues(points, alpha):
    return np.prod(points ** alpha, axis=1)


@pytest.mark.parametrize("dim", range(1, 9))
def test_degree_seven_rule_is_exact_for_monomials(dim):
    rule = buildRule(dim)
    weights = rule.weightSets[0]
    for alpha in _multiIndices(dim, 7):
        exact = np.prod(1.0 / (alpha + 1.0))
        estimate = float(weights @ _monomialValues(rule.points, alpha))
        assert abs(estimate - exact) <= 1e-12 * exact, (alpha, estimate, exact)


@pytest.mark.parametrize("dim", range(1, 9))
def test_null_rules_sum_to_zero_and_annihilate_cubics(dim):
    rule = buildRule(dim)
    for weights in rule.weightSets[1:]:
        assert abs(weights.sum()) <= 1e-14 * np.abs(weights).sum()
        for alpha in _multiIndices(dim, 3):
            assert abs(weights @ _monomialValues(rule.points, alpha)) <= 1e-12


@pytest.mark.parametrize("dim", range(1, 9))
def test_embedded_degree_five_rule(dim):
    rule = buildRule(dim)
    for alpha in _multiIndices(dim, 5):
        exact = np.prod(1.0 / (alpha + 1.0))
        assert rule.degree5Weights @ _monomialValues(rule.points, alpha) == pytest.approx(exact, rel=1e-12)


def test_point_counts():
    assert pointCount(2) == 17
    assert pointCount(8) == 401
    assert buildRule(8).pointCount == 401
    assert buildRule(1).pointCount == 7


def test_rule_generators_describe_present_orbits():
    names = [name for name, _ in buildRule(3).generators]
    assert names == ["center", "axis-lambda2", "axis-lambda3", "pair-lambda4", "corner-lambda5"]
    magnitudes = dict(buildRule(3).generators)
    assert magnitudes["axis-lambda3"] ** 2 == pytest.approx(0.9)
    assert magnitudes["corner-lambda5"] ** 2 == pytest.approx(9.0 / 19.0)
    assert "pair-lambda4" not in dict(buildRule(1).generators)


def test_rule_tables_are_read_only_and_cached():
    rule = buildRule(3)
    assert buildRule(3) is rule
    with pytest.raises(ValueError):
        rule.weightSets[0, 0] = 0.0


def test_rule_rejects_unsupported_dimension():
    with pytest.raises(DimensionOutOfRangeException):
        buildRule(0)
    with pytest.raises(DimensionOutOfRangeException):
        buildRule(17)


def _unitBatch(dim):
    return uniformSplit(Bounds.unitCube(dim), 1, maxRegions=1)


def test_constant_integrand_on_unit_cube():
    rule = buildRule(4)
    evaluation = evaluateBatch(constantOne, _unitBatch(4), rule)
    assert evaluation.estimates[0] == pytest.approx(1.0, rel=1e-14)
    assert evaluation.rawErrors[0] <= 1e-14
    assert evaluation.evalCount == pointCount(4)


def test_constant_integrand_weights_sum_to_one():
    rule = buildRule(3)
    assert rule.weightSets[0].sum() == pytest.approx(1.0, rel=1e-14)


def test_degree_seven_monomial_is_integrated_exactly():
    evaluation = evaluateBatch(firstAxisSeventh, _unitBatch(2), buildRule(2))
    assert evaluation.estimates[0] == pytest.approx(1.0 / 8.0, rel=1e-12)


def test_degree_nine_monomial_has_error():
    evaluation = evaluateBatch(firstAxisNinth, _unitBatch(1), buildRule(1))
    assert abs(evaluation.estimates[0] - 0.1) > 0
    assert evaluation.rawErrors[0] > 0


def test_split_axis_follows_fourth_difference():
    evaluation = evaluateBatch(quarticOnSecondAxis, _unitBatch(3), buildRule(3))
    assert evaluation.splitAxes[0] == 1


def test_split_axis_ties_go_to_lowest_axis():
    batch = uniformSplit(Bounds.unitCube(3), 2, maxRegions=8)
    evaluation = evaluateBatch(constantOne, batch, buildRule(3))
    np.testing.assert_array_equal(evaluation.splitAxes, np.zeros(8, dtype=np.int64))


def test_flat_differences_split_the_longest_edge():
    bounds = Bounds(lower=[0.0, 0.0, 0.0], upper=[1.0, 3.0, 2.0])
    evaluation = evaluateBatch(constantOne, _unitBatch(3), buildRule(3), IntegrationDomain.fromBounds(bounds))
    assert evaluation.splitAxes[0] == 1


def test_region_past_a_cut_splits_its_longest_edge():
    # axis 1 is cut at 0.5, so every rule point of this region evaluates to zero
    lows = np.array([[0.2], [0.5], [0.4], [0.6], [0.6], [0.8]])
    lengths = np.array([[0.1], [0.2], [0.2], [0.2], [0.2], [0.2]])
    evaluation = evaluateBatch(discontinuous, RegionBatch.fromGeometry(lows, lengths), buildRule(6))
    assert evaluation.estimates[0] == 0.0
    assert evaluation.splitAxes[0] == 1


def test_quadratic_on_python_path_splits_its_longest_edge():
    batch = RegionBatch.fromGeometry(np.zeros((3, 1)), np.array([[0.1], [0.2], [0.3]]))
    evaluation = evaluateBatch(ShiftedQuadratic(0.5), batch, buildRule(3))
    assert evaluation.splitAxes[0] == 2


@pytest.mark.parametrize("factor", [2.0**-20, 0.5, 2.0**30])
def test_split_axis_is_stable_under_positive_scaling(factor):
    @numba.njit
    def scaled(x):
        return factor * cornerPeak(x)

    batch = uniformSplit(Bounds.unitCube(3), 3, maxRegions=27)
    rule = buildRule(3)
    original = evaluateBatch(cornerPeak, batch, rule)
    rescaled = evaluateBatch(scaled, batch, rule)
    np.testing.assert_array_equal(rescaled.splitAxes, original.splitAxes)
    np.testing.assert_allclose(rescaled.estimates, factor * original.estimates, rtol=1e-14)


def test_domain_map_scales_estimates():
    bounds = Bounds(lower=[0.0, -1.0], upper=[2.0, 1.0])
    batch = uniformSplit(Bounds.unitCube(2), 2, maxRegions=4)
    evaluation = evaluateBatch(constantOne, batch, buildRule(2), IntegrationDomain.fromBounds(bounds))
    assert evaluation.estimates.sum() == pytest.approx(4.0, rel=1e-14)


def test_python_path_matches_kernel():
    batch = uniformSplit(Bounds.unitCube(2), 3, maxRegions=9)
    rule = buildRule(2)
    python = evaluateBatch(ShiftedQuadratic(0.3), batch, rule)

    @numba.njit
    def compiled(x):
        total = 0.0
        for i in range(x.shape[0]):
            total += (x[i] - 0.3) ** 2
        return total

    kernel = evaluateBatch(compiled, batch, rule)
    np.testing.assert_allclose(python.estimates, kernel.estimates, rtol=1e-12)
    np.testing.assert_array_equal(python.splitAxes, kernel.splitAxes)
    assert python.estimates.sum() == pytest.approx(2 * (0.7**3 + 0.3**3) / 3, rel=1e-12)


def test_non_finite_values_are_flagged():
    batch = uniformSplit(Bounds.unitCube(2), 2, maxRegions=4)
    evaluation = evaluateBatch(infiniteNearCorner, batch, buildRule(2))
    assert evaluation.nonFinite.any()
    assert np.all(np.isinf(evaluation.rawErrors[evaluation.nonFinite]))
    assert np.all(np.isfinite(evaluation.rawErrors[~evaluation.nonFinite]))


def test_results_do_not_depend_on_thread_count(restoreThreads):
    batch = uniformSplit(Bounds.unitCube(3), 6, maxRegions=216)
    rule = buildRule(3)
    numba.set_num_threads(1)
    single = evaluateBatch(quarticOnSecondAxis, batch, rule)
    numba.set_num_threads(restoreThreads)
    many = evaluateBatch(quarticOnSecondAxis, batch, rule)
    np.testing.assert_array_equal(single.estimates, many.estimates)
    np.testing.assert_array_equal(single.rawErrors, many.rawErrors)


def test_evaluate_rejects_empty_and_mismatched_batches():
    with pytest.raises(ValidationException):
        evaluateBatch(constantOne, RegionBatch.empty(2), buildRule(2))
    with pytest.raises(ValidationException):
        evaluateBatch(constantOne, _unitBatch(3), buildRule(2))
