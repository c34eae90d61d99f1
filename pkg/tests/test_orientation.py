from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pinwheels import io, orientation
from pinwheels.orientation import ActivityStack, OrientationMap, OrientationSampleSet
from pinwheels.states import CoherentStateParams, PhaseSpec
from pinwheels.synthesis import GridSpec

DATA = Path(__file__).parent / "data"
GRID = GridSpec(48, 40, 3.0)


def cos2_stack(beta, n=8, grid=GRID):
    thetas = OrientationSampleSet(n).angles
    maps = np.cos(thetas[:, None, None] - beta[None]) ** 2
    return ActivityStack(grid, thetas, maps)


def smooth_beta(grid=GRID):
    x1, x2 = grid.mesh()
    return np.mod(0.7 * x1 + 0.3 * np.sin(x2) + 0.1 * x1 * x2, np.pi)


def circular_diff(a, b):
    return np.abs(orientation.wrap(2 * (a - b))) / 2


def atan2_map(n=9, sign=1):
    grid = GridSpec(n, n, 2.0)
    x1, x2 = grid.mesh()
    pref = np.mod(0.5 * np.arctan2(sign * x2, x1), np.pi)
    return OrientationMap(grid, pref, np.ones_like(pref))


def test_sample_set_angles():
    s = OrientationSampleSet(4)
    assert s.angles == pytest.approx([0, np.pi / 4, np.pi / 2, 3 * np.pi / 4])
    with pytest.raises(ValueError):
        OrientationSampleSet(1)


def test_vector_sum_recovers_cos2_exactly():
    beta = smooth_beta()
    omap = orientation.vector_sum_orientation(cos2_stack(beta))
    assert circular_diff(omap.preferred, beta).max() < 1e-12
    assert np.all((omap.preferred >= 0) & (omap.preferred < np.pi))
    # |z| = n/4 and the min-shifted weights sum to n/2 - n*min_j cos^2(theta_j - beta)
    lo = (np.cos(OrientationSampleSet(8).angles[:, None, None] - beta[None]) ** 2).min(axis=0)
    assert np.allclose(omap.selectivity, 0.25 / (0.5 - lo), atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.floats(0, np.pi), st.integers(3, 16))
def test_vector_sum_equivariant(delta, n):
    beta = smooth_beta()
    a = orientation.vector_sum_orientation(cos2_stack(beta, n))
    b = orientation.vector_sum_orientation(cos2_stack(np.mod(beta + delta, np.pi), n))
    assert circular_diff(b.preferred, a.preferred + delta).max() < 1e-9


@pytest.mark.parametrize("steps", [1, 3, 5])
def test_selectivity_invariant_under_sample_steps(steps):
    beta = smooth_beta()
    a = orientation.vector_sum_orientation(cos2_stack(beta))
    b = orientation.vector_sum_orientation(cos2_stack(np.mod(beta + steps * np.pi / 8, np.pi)))
    assert np.abs(a.selectivity - b.selectivity).max() < 1e-9


def test_equal_maps_give_zero_selectivity():
    stack = ActivityStack(GRID, OrientationSampleSet(8).angles, np.ones((8, GRID.nx, GRID.ny)))
    omap = orientation.vector_sum_orientation(stack)
    assert np.all(omap.selectivity == 0)
    assert np.all(omap.preferred == 0)


def test_argmax_quantized_and_close():
    beta = smooth_beta()
    stack = cos2_stack(beta)
    omap = orientation.argmax_orientation(stack)
    assert np.all(np.isin(np.round(omap.preferred / (np.pi / 8), 9), np.arange(8)))
    assert circular_diff(omap.preferred, beta).max() <= np.pi / 16 + 1e-12
    assert np.all((omap.selectivity >= 0) & (omap.selectivity <= 1))


def test_stack_shape_checked():
    with pytest.raises(ValueError):
        ActivityStack(GRID, np.zeros(3), np.zeros((2, GRID.nx, GRID.ny)))


def test_activity_stack_deterministic_across_workers():
    params = CoherentStateParams(1.0, 0.5, phase=PhaseSpec.random_smooth(1), m=128)
    grid = GridSpec(32, 32, 2 * np.pi)
    a = orientation.activity_stack(params, OrientationSampleSet(4), grid, workers=1)
    b = orientation.activity_stack(params, OrientationSampleSet(4), grid, workers=4)
    assert np.array_equal(a.maps, b.maps)
    assert a.maps.shape == (4, 32, 32)


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv(orientation.WORKERS_ENV, "1")
    assert orientation.worker_count() == 1
    monkeypatch.delenv(orientation.WORKERS_ENV)
    assert orientation.worker_count() >= 1


def test_wrap_range_and_oddness():
    d = np.linspace(-20, 20, 1001)
    w = orientation.wrap(d)
    assert np.all((w >= -np.pi) & (w <= np.pi))
    assert np.allclose(np.exp(1j * w), np.exp(1j * d), atol=1e-12)
    assert np.array_equal(orientation.wrap(-d), -w)
    half = np.array([np.pi, -np.pi, 3 * np.pi, -3 * np.pi])
    assert np.array_equal(orientation.wrap(-half), -orientation.wrap(half))


def test_single_positive_pinwheel():
    omap = atan2_map()
    pws = orientation.detect_pinwheels(omap)
    assert len(pws) == 1
    p = pws[0]
    assert p.charge == 0.5
    assert (p.x, p.y) == pytest.approx((0.0, 0.0), abs=1e-12)
    assert orientation.boundary_winding(omap) == 1


def test_single_negative_pinwheel():
    omap = atan2_map(sign=-1)
    pws = orientation.detect_pinwheels(omap)
    assert [p.charge for p in pws] == [-0.5]
    assert orientation.boundary_winding(omap) == -1


def test_uniform_map_has_no_pinwheels():
    pref = np.full((GRID.nx, GRID.ny), 1.3)
    omap = OrientationMap(GRID, pref, np.ones_like(pref))
    assert orientation.detect_pinwheels(omap) == []
    assert orientation.boundary_winding(omap) == 0


def test_non_finite_map_rejected():
    pref = np.zeros((GRID.nx, GRID.ny))
    pref[3, 3] = np.nan
    with pytest.raises(ArithmeticError):
        orientation.plaquette_windings(OrientationMap(GRID, pref, np.ones_like(pref)))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1), st.sampled_from([2, 4, 8]))
def test_quantized_map_charges_sum_to_boundary(seed, n):
    # orientations on multiples of pi/n include exact half-turn edges
    rng = np.random.default_rng(seed)
    pref = rng.integers(0, n, (14, 12)) * (np.pi / n)
    omap = OrientationMap(GridSpec(14, 12, 3.0), pref, np.ones_like(pref))
    pws = orientation.detect_pinwheels(omap)
    assert sum(p.charge for p in pws) == 0.5 * orientation.boundary_winding(omap)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_net_charge_equals_boundary_winding(seed):
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((12, 12)) + 1j * rng.standard_normal((12, 12))
    # interpolate a smooth random complex field onto the grid
    grid = GridSpec(40, 36, 5.0)
    x1, x2 = grid.mesh()
    k = np.arange(-2, 2)
    field = np.zeros(x1.shape, complex)
    for a in range(4):
        for b in range(4):
            field += z[a, b] * np.exp(1j * (k[a] * x1 + k[b] * x2) * 0.6)
    pref = np.mod(0.5 * np.angle(field), np.pi)
    omap = OrientationMap(grid, pref, np.abs(field))
    pws = orientation.detect_pinwheels(omap)
    assert all(p.charge in (-0.5, 0.5) for p in pws)
    assert sum(p.charge for p in pws) == 0.5 * orientation.boundary_winding(omap)


def test_render_colors():
    pref = np.zeros((GRID.nx, GRID.ny))
    omap = OrientationMap(GRID, pref, np.ones_like(pref))
    img = orientation.render_pinwheel_image(omap)
    assert img.shape == (GRID.ny, GRID.nx, 3)
    assert np.all(img == [255, 0, 0])
    # zero selectivity renders white
    white = orientation.render_pinwheel_image(OrientationMap(GRID, pref, np.zeros_like(pref)))
    assert np.all(white == 255)


def test_render_is_pi_periodic():
    pref = np.mod(smooth_beta(), np.pi)
    sel = np.full_like(pref, 0.8)
    a = orientation.render_pinwheel_image(OrientationMap(GRID, pref, sel))
    b = orientation.render_pinwheel_image(OrientationMap(GRID, pref + np.pi, sel))
    assert np.abs(a.astype(int) - b.astype(int)).max() <= 1


def test_render_orientation_top_row_is_largest_x2():
    pref = np.zeros((GRID.nx, GRID.ny))
    pref[:, -1] = np.pi / 2
    img = orientation.render_pinwheel_image(OrientationMap(GRID, pref, np.ones_like(pref)))
    assert np.all(img[0] == [0, 255, 255])
    assert np.all(img[1:] == [255, 0, 0])


def golden_map():
    grid = GridSpec(33, 33, 2.0)
    x1, x2 = grid.mesh()
    pref = np.mod(0.5 * np.arctan2(x2 - 0.3, x1 + 0.2) - 0.5 * np.arctan2(x2 + 0.5, x1 - 0.6), np.pi)
    sel = np.clip(np.hypot(x1, x2) / 2.0, 0, 1)
    return OrientationMap(grid, pref, sel)


def test_render_matches_golden():
    img = orientation.render_pinwheel_image(golden_map())
    golden = io.read_png(DATA / "golden_pinwheel.png")
    assert golden.shape == img.shape
    assert np.abs(golden.astype(int) - img.astype(int)).max() <= 1


def test_golden_map_charges():
    pws = orientation.detect_pinwheels(golden_map())
    assert sorted(p.charge for p in pws) == [-0.5, 0.5]
