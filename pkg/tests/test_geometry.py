import numpy as np
import pytest

from pagani.core.exceptions import CapacityExceededException, ValidationException
from pagani.models.region_models import Bounds, RegionBatch
from pagani.services.geometry import IntegrationDomain, bisect, chooseSplitDepth, uniformSplit


def test_uniform_split_tiles_unit_square():
    batch = uniformSplit(Bounds.unitCube(2), 3, maxRegions=100)
    assert batch.count == 9
    np.testing.assert_allclose(batch.lengths, np.full((2, 9), 1.0 / 3.0))
    np.testing.assert_allclose(batch.totalVolume(), 1.0)
    corners = {tuple(np.round(batch.lows[:, j] * 3).astype(int)) for j in range(batch.count)}
    assert corners == {(i, k) for i in range(3) for k in range(3)}


@pytest.mark.parametrize("dim", range(1, 9))
@pytest.mark.parametrize("depth", range(1, 6))
def test_uniform_split_volumes_sum_to_domain(dim, depth):
    batch = uniformSplit(Bounds.unitCube(dim), depth, maxRegions=depth**dim)
    assert batch.count == depth**dim
    assert batch.totalVolume() == pytest.approx(1.0, rel=1e-12)
    assert np.all(batch.lows + batch.lengths <= 1.0 + 1e-12)


def test_uniform_split_depth_one_is_the_whole_domain():
    bounds = Bounds.unitCube(5)
    batch = uniformSplit(bounds, 1, maxRegions=1)
    assert batch.count == 1
    np.testing.assert_array_equal(batch.lows[:, 0], np.zeros(5))
    np.testing.assert_array_equal(batch.lengths[:, 0], np.ones(5))


def test_uniform_split_on_general_bounds():
    batch = uniformSplit(Bounds(lower=[0.0, -1.0], upper=[2.0, 1.0]), 2, maxRegions=4)
    np.testing.assert_allclose(batch.lengths, np.ones((2, 4)))
    lows = {tuple(batch.lows[:, j]) for j in range(batch.count)}
    assert lows == {(0.0, -1.0), (0.0, 0.0), (1.0, -1.0), (1.0, 0.0)}


def test_uniform_split_rejects_bad_depth_and_capacity():
    with pytest.raises(ValidationException):
        uniformSplit(Bounds.unitCube(2), 0, maxRegions=10)
    with pytest.raises(CapacityExceededException):
        uniformSplit(Bounds.unitCube(3), 4, maxRegions=63)


def test_bounds_validation():
    with pytest.raises(ValidationException):
        Bounds(lower=[0.0, 1.0], upper=[1.0, 1.0])
    with pytest.raises(ValidationException):
        Bounds(lower=[0.0], upper=[1.0, 2.0])
    with pytest.raises(ValidationException):
        Bounds(lower=[0.0] * 17, upper=[1.0] * 17)


@pytest.mark.parametrize("dim,target,expected", [(1, 16384, 16384), (2, 16384, 128), (3, 16384, 25), (8, 16384, 3), (14, 16384, 2), (16, 16384, 1)])
def test_choose_split_depth(dim, target, expected):
    assert chooseSplitDepth(dim, target) == expected


def test_bisect_halves_along_split_axis():
    batch = RegionBatch.fromGeometry(np.zeros((2, 1)), np.ones((2, 1)))
    batch.splitAxis[0] = 0
    children = bisect(batch, maxRegions=2)
    np.testing.assert_allclose(children.lows, [[0.0, 0.5], [0.0, 0.0]])
    np.testing.assert_allclose(children.lengths, [[0.5, 0.5], [1.0, 1.0]])
    assert children.hasParents


def test_bisect_propagates_parent_values():
    batch = RegionBatch.fromGeometry(np.zeros((3, 1)), np.ones((3, 1)))
    batch.splitAxis[0] = 2
    batch.estimates[0], batch.errors[0] = 4.0, 0.1
    children = bisect(batch, maxRegions=2)
    np.testing.assert_array_equal(children.parentEstimates, [4.0, 4.0])
    np.testing.assert_array_equal(children.parentErrors, [0.1, 0.1])
    np.testing.assert_allclose(children.lengths[2], [0.5, 0.5])


def test_bisect_sibling_layout_and_volume():
    rng = np.random.default_rng(7)
    batch = RegionBatch.fromGeometry(rng.uniform(size=(3, 2)), rng.uniform(0.1, 1.0, size=(3, 2)))
    batch.splitAxis[:] = [1, 0]
    children = bisect(batch, maxRegions=4)
    assert children.count == 4
    assert RegionBatch.siblingIndex(2) == 3
    np.testing.assert_allclose(children.volumes()[0::2] + children.volumes()[1::2], batch.volumes(), rtol=1e-15)
    np.testing.assert_allclose(children.lows[0, 3], batch.lows[0, 1] + batch.lengths[0, 1] / 2)


def test_bisect_respects_region_budget():
    batch = RegionBatch.fromGeometry(np.zeros((2, 3)), np.ones((2, 3)))
    with pytest.raises(CapacityExceededException):
        bisect(batch, maxRegions=5)


def test_domain_map():
    domain = IntegrationDomain.fromBounds(Bounds(lower=[0.0, -1.0], upper=[2.0, 1.0]))
    assert domain.jacobian == pytest.approx(4.0)
    np.testing.assert_allclose(domain.toDomain(np.array([0.5, 0.25])), [1.0, -0.5])
