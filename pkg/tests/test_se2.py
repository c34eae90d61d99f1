import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pinwheels import se2
from pinwheels.validation import planar_bracket_errors
from pinwheels.se2 import GroupElement, IntegralCurveParams, PlanarPoint

coord = st.floats(-50, 50, allow_nan=False)
angle = st.floats(-10, 10, allow_nan=False)
elements = st.builds(GroupElement, coord, coord, angle)
points = st.builds(PlanarPoint, coord, coord)


def close(p, q, tol=1e-12):
    return abs(p.x1 - q[0]) < tol and abs(p.x2 - q[1]) < tol


@pytest.mark.parametrize("g, x, expected", [
    (GroupElement(0, 0, 0), PlanarPoint(3, 4), (3, 4)),
    (GroupElement(1, 2, 0), PlanarPoint(0, 0), (1, 2)),
    (GroupElement(0, 0, np.pi / 4), PlanarPoint(1, 0), (0, 1)),
])
def test_act_examples(g, x, expected):
    assert close(se2.act(g, x), expected)


def test_theta_normalized_mod_pi():
    assert GroupElement(0, 0, 3.5).theta == pytest.approx(3.5 - np.pi)
    assert GroupElement(0, 0, -0.1).theta == pytest.approx(np.pi - 0.1)
    assert 0 <= GroupElement(0, 0, np.pi).theta < np.pi


def test_compose_examples():
    g = GroupElement(0.3, -1.2, 0.7)
    e = GroupElement.identity()
    c = se2.compose(e, g)
    assert (c.q1, c.q2, c.theta) == pytest.approx((g.q1, g.q2, g.theta))
    c = se2.compose(GroupElement(1, 0, 0), GroupElement(2, 0, 0))
    assert (c.q1, c.q2, c.theta) == pytest.approx((3, 0, 0))


def test_compose_rotation_then_translation():
    g1, g2 = GroupElement(0, 0, np.pi / 4), GroupElement(1, 0, 0)
    c = se2.compose(g1, g2)
    assert (c.q1, c.q2, c.theta) == pytest.approx((0, 1, np.pi / 4), abs=1e-15)
    # equivariance oracle on sample points
    rng = np.random.default_rng(0)
    for x in rng.uniform(-5, 5, size=(50, 2)):
        p = PlanarPoint(*x)
        lhs, rhs = se2.act(c, p), se2.act(g1, se2.act(g2, p))
        assert close(lhs, (rhs.x1, rhs.x2), 1e-12)


@settings(max_examples=300, deadline=None)
@given(elements, elements, points)
def test_left_action(g1, g2, x):
    lhs = se2.act(se2.compose(g1, g2), x)
    rhs = se2.act(g1, se2.act(g2, x))
    assert close(lhs, (rhs.x1, rhs.x2), 1e-9)


@settings(max_examples=300, deadline=None)
@given(elements, elements, elements)
def test_compose_associative(a, b, c):
    l = se2.compose(se2.compose(a, b), c)
    r = se2.compose(a, se2.compose(b, c))
    assert l.q1 == pytest.approx(r.q1, abs=1e-10)
    assert l.q2 == pytest.approx(r.q2, abs=1e-10)
    # theta compared on the circle of orientations
    d = (l.theta - r.theta + np.pi / 2) % np.pi - np.pi / 2
    assert abs(d) < 1e-12


def test_group_axioms_bulk():
    rng = np.random.default_rng(7)
    e = GroupElement.identity()
    for _ in range(1000):
        g = GroupElement(*rng.uniform(-10, 10, 2), rng.uniform(0, np.pi))
        x = PlanarPoint(*rng.uniform(-10, 10, 2))
        assert close(se2.act(e, x), (x.x1, x.x2))
        back = se2.act(g.inverse(), se2.act(g, x))
        assert close(back, (x.x1, x.x2), 1e-11)


@pytest.mark.parametrize("k, s, expected", [
    (0.0, 1.0, (1.0, 0.0)),
    (1.0, np.pi / 2, (1.0, -1.0)),
    (1.0, np.pi, (0.0, -2.0)),
])
def test_analytic_curve_examples(k, s, expected):
    assert close(se2.integral_curve_analytic(k, s), expected, 1e-15)


@pytest.mark.parametrize("k", [-2.0, -0.5, 0.3, 1.0])
def test_analytic_curve_solves_ode(k):
    s = np.linspace(0, 3, 301)
    h = 1e-6
    y = se2.integral_curve_analytic(k, s)
    dy = (se2.integral_curve_analytic(k, s + h) - se2.integral_curve_analytic(k, s - h)) / (2 * h)
    rhs = np.stack([1 + k * y[:, 1], -k * y[:, 0]], axis=1)
    assert np.abs(dy - rhs).max() < 1e-8


def test_rk4_examples():
    pts = se2.integral_curve_numeric(IntegralCurveParams(0.0, 2.0, 10))
    assert pts.shape == (11, 2)
    assert np.all(pts[:, 1] == 0.0)
    pts = se2.integral_curve_numeric(IntegralCurveParams(1.0, np.pi / 2, 100))
    assert np.abs(pts[-1] - [1.0, -1.0]).max() < 1e-8
    assert np.abs(se2.integral_curve_numeric(IntegralCurveParams(1.0, np.pi, 200))[-1]
                  - [0.0, -2.0]).max() < 1e-8


def test_rk4_mirror_symmetry():
    up = se2.integral_curve_numeric(IntegralCurveParams(1.0, 2.0, 50))
    down = se2.integral_curve_numeric(IntegralCurveParams(-1.0, 2.0, 50))
    assert np.allclose(up[:, 0], down[:, 0], atol=1e-15)
    assert np.allclose(up[:, 1], -down[:, 1], atol=1e-15)


@pytest.mark.parametrize("k", [-3.0, -1.0, 0.25, 1.0, 2.0])
def test_rk4_matches_closed_form(k):
    s_max = np.pi / abs(k)
    pts = se2.integral_curve_numeric(IntegralCurveParams(k, s_max, 200))
    ref = se2.integral_curve_analytic(k, np.linspace(0, s_max, 201))
    assert np.abs(pts - ref).max() < 1e-6


def test_rk4_fourth_order():
    errs = []
    for n in (20, 40, 80):
        pts = se2.integral_curve_numeric(IntegralCurveParams(1.0, np.pi, n))
        errs.append(np.abs(pts[-1] - [0.0, -2.0]).max())
    ratios = np.array(errs[:-1]) / np.array(errs[1:])
    assert np.all(ratios > 14)


@pytest.mark.parametrize("k", [-2.0, 0.5, 1.0])
def test_curves_lie_on_circles(k):
    s = np.linspace(0, 10, 1001)
    y = se2.integral_curve_analytic(k, s)
    r = np.hypot(y[:, 0], y[:, 1] + 1 / k)
    assert np.abs(r - 1 / abs(k)).max() < 1e-10


def test_fan_defaults_and_base_point():
    g = GroupElement(2.0, -1.0, 0.4)
    fan = se2.association_fan(g=g)
    assert len(fan) == 9
    for c in fan:
        assert np.allclose(c[0], [2.0, -1.0])
    straight = se2.association_fan([0.0], n_steps=10)[0]
    assert np.allclose(straight[:, 1], 0)
    assert straight[-1, 0] == pytest.approx(np.pi / 2)


def test_fan_mirror_about_axis():
    g = GroupElement(1.0, 1.0, 0.3)
    a, b = se2.association_fan([0.7, -0.7], g=g)
    # reflect about the fan axis through (q1, q2) along angle 2*theta
    u = np.array([np.cos(2 * g.theta), np.sin(2 * g.theta)])
    rel = b - g.translation
    refl = 2 * np.outer(rel @ u, u) - rel + g.translation
    assert np.abs(refl - a).max() < 1e-12


def test_fan_rejects_empty():
    with pytest.raises(ValueError):
        se2.association_fan([])


def test_curve_params_validated():
    with pytest.raises(ValueError):
        IntegralCurveParams(1.0, 1.0, 1)
    with pytest.raises(ValueError):
        IntegralCurveParams(1.0, 0.0, 10)


def test_planar_bracket_is_minus_d2():
    hs, errs = planar_bracket_errors()
    order = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    assert order > 1.8
    assert errs[-1] < 1e-3
