import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rfct.spatial_map import (
    MAP_KINDS,
    SpatialMap,
    binary_map,
    build_map,
    custom_map,
    our_map,
    rquadratic_map,
)


def negate(plane):
    """Plane evaluated at the negated wrapped offsets."""
    return np.roll(np.flip(plane, axis=(0, 1)), (1, 1), axis=(0, 1))


grids = st.tuples(st.integers(2, 20), st.integers(2, 20))


@st.composite
def grid_and_target(draw, integer=False):
    M, N = draw(grids)
    if integer:
        return (M, N), (draw(st.integers(1, M)), draw(st.integers(1, N)))
    return (M, N), (draw(st.floats(0.5, M)), draw(st.floats(0.5, N)))


def test_binary_full_target():
    assert np.all(binary_map((6, 5), (6, 5)).plane == 1)


def test_binary_area_count():
    m = binary_map((8, 8), (2, 2))
    assert m.plane.sum() == 4
    assert m.plane[0, 0] == 1


@settings(max_examples=80, deadline=None)
@given(grid_and_target(integer=True))
def test_binary_sum_equals_area(gt):
    grid, target = gt
    assert binary_map(grid, target).plane.sum() == target[0] * target[1]


def test_binary_target_too_large():
    with pytest.raises(ValueError):
        binary_map((4, 4), (5, 2))


def test_rquadratic_values():
    m = rquadratic_map((10, 10), (4, 4), nu=0.5, delta=2.0)
    assert m.plane[0, 0] == 1 / 0.5
    assert m.plane.max() == m.plane[0, 0]
    # p = W along columns, q = 0
    assert m.plane[0, 4] == pytest.approx(1 / (0.5 + 2.0))
    assert np.all(rquadratic_map((7, 9), (3, 3), 0.25, 0.0).plane == 4.0)


def test_rquadratic_decays_with_distance():
    m = rquadratic_map((16, 16), (4, 4), 0.2, 3.0).plane
    row = m[0, :9]
    assert np.all(np.diff(row) < 0)


@pytest.mark.parametrize("nu", [0.0, -0.1])
def test_rquadratic_bad_nu(nu):
    with pytest.raises(ValueError):
        rquadratic_map((8, 8), (2, 2), nu, 1.0)


def test_negative_delta_rejected():
    with pytest.raises(ValueError):
        our_map((8, 8), (2, 2), 0.2, -1.0)


def test_our_map_inside_equals_rquadratic():
    r = rquadratic_map((20, 24), (5, 6), 0.2, 3.0).plane
    o = our_map((20, 24), (5, 6), 0.2, 3.0).plane
    inside = o != 0
    assert np.array_equal(o[inside], r[inside])


def test_our_map_zero_outside_expanded_box():
    o = our_map((20, 20), (5, 5), 0.2, 3.0, expansion=1.6).plane
    # 1.6 * 5 = 8 cells: offsets -4..3 kept
    assert o[0, 3] > 0 and o[0, -4] > 0
    assert o[0, 4] == 0 and o[0, -5] == 0
    assert o[4, 0] == 0


def test_our_map_large_expansion_is_rquadratic():
    r = rquadratic_map((12, 12), (3, 4), 0.2, 3.0).plane
    o = our_map((12, 12), (3, 4), 0.2, 3.0, expansion=4.0).plane
    assert np.array_equal(o, r)


@settings(max_examples=80, deadline=None)
@given(grid_and_target())
def test_binary_is_our_map_special_case(gt):
    grid, target = gt
    assert np.array_equal(binary_map(grid, target).plane, our_map(grid, target, 1.0, 0.0, 1.0).plane)


@settings(max_examples=80, deadline=None)
@given(grid_and_target(), st.floats(1.0, 3.0))
def test_our_map_support_bound(gt, expansion):
    grid, target = gt
    o = our_map(grid, target, 0.2, 3.0, expansion).plane
    bound = math.ceil(expansion * target[1]) * math.ceil(expansion * target[0])
    assert np.count_nonzero(o) <= bound


@settings(max_examples=60, deadline=None)
@given(grid_and_target())
def test_rquadratic_symmetric(gt):
    grid, target = gt
    m = rquadratic_map(grid, target, 0.2, 3.0).plane
    assert np.array_equal(m, negate(m))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7), st.integers(1, 7))
def test_rectangle_maps_symmetric_for_odd_extents(a, b):
    # a half-open even-length rectangle cannot be symmetric; odd extents are
    h, w = 2 * a - 1, 2 * b - 1
    grid = (h + 4, w + 6)
    m = binary_map(grid, (h, w)).plane
    assert np.array_equal(m, negate(m))
    o = our_map(grid, (h / 1.6, w / 1.6), 0.2, 3.0, 1.6).plane
    assert np.array_equal(o, negate(o))


def test_built_in_maps_nonnegative():
    for kind in MAP_KINDS:
        assert build_map(kind, (10, 12), (3.3, 4.1)).plane.min() >= 0


def test_build_map_unknown_kind():
    with pytest.raises(ValueError):
        build_map("gaussian", (8, 8), (2, 2))


def test_spatial_map_immutable_and_validated():
    m = custom_map(np.array([[1.0, -2.0], [0.5, 3.0]]))
    assert m.kind == "custom"
    with pytest.raises(ValueError):
        m.plane[0, 0] = 5
    with pytest.raises(ValueError):
        SpatialMap(np.array([[np.nan]]))
    with pytest.raises(ValueError):
        SpatialMap(np.zeros(3))
