"""
Rototranslation group acting on the cortical plane.

A group element ``(q1, q2, theta)`` moves a point by the rotation of angle
``2*theta`` followed by the translation ``(q1, q2)``. Orientations are
polarity invariant, so ``theta`` lives in ``[0, pi)`` while the rotation
itself covers the full circle.

The horizontal connectivity is modeled by integral curves of
``X1 + k X2`` started at the origin of local coordinates, with
``X1 = (1, 0)`` and ``X2 = (x2, -x1)``.
"""

from dataclasses import dataclass

import numpy as np

DEFAULT_FAN_K = tuple(np.linspace(-1.0, 1.0, 9))
DEFAULT_FAN_S_MAX = np.pi / 2


def normalize_angle(theta):
    """Reduce an orientation to ``[0, pi)``."""
    t = float(np.mod(theta, np.pi))
    # fmod round-off can land exactly on pi
    return 0.0 if t >= np.pi else t


def rotation(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class PlanarPoint:
    x1: float
    x2: float

    def __post_init__(self):
        if not (np.isfinite(self.x1) and np.isfinite(self.x2)):
            raise ValueError(f"non-finite point ({self.x1}, {self.x2})")

    def as_array(self):
        return np.array([self.x1, self.x2])


@dataclass(frozen=True)
class GroupElement:
    q1: float = 0.0
    q2: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "theta", normalize_angle(self.theta))

    @classmethod
    def identity(cls):
        return cls(0.0, 0.0, 0.0)

    @property
    def translation(self):
        return np.array([self.q1, self.q2])

    def matrix(self):
        """Rotation part ``r_{2 theta}``."""
        return rotation(2.0 * self.theta)

    def inverse(self):
        back = rotation(-2.0 * self.theta) @ self.translation
        return GroupElement(-back[0], -back[1], -self.theta)


@dataclass(frozen=True)
class IntegralCurveParams:
    k: float
    s_max: float
    n_steps: int

    def __post_init__(self):
        if self.n_steps < 2:
            raise ValueError(f"n_steps must be >= 2, got {self.n_steps}")
        if not self.s_max > 0:
            raise ValueError(f"s_max must be positive, got {self.s_max}")


def act(g, x):
    """Apply ``g`` to a point. Returns a :class:`PlanarPoint`."""
    y = g.matrix() @ np.array([x.x1, x.x2]) + g.translation
    return PlanarPoint(float(y[0]), float(y[1]))


def act_array(g, xs):
    """Vectorized :func:`act` on an ``(n, 2)`` array of points."""
    xs = np.asarray(xs, dtype=float)
    return xs @ g.matrix().T + g.translation


def compose(g1, g2):
    """Group product: ``act(compose(g1, g2), x) == act(g1, act(g2, x))``."""
    t = g1.matrix() @ g2.translation + g1.translation
    return GroupElement(float(t[0]), float(t[1]), g1.theta + g2.theta)


def integral_curve_analytic(k, s):
    """Closed-form solution of ``gamma' = (1 + k x2, -k x1)``, ``gamma(0) = 0``.

    ``s`` may be a scalar (returns a :class:`PlanarPoint`) or an array
    (returns an ``(n, 2)`` array).
    """
    s_arr = np.asarray(s, dtype=float)
    if k == 0:
        x1, x2 = s_arr, np.zeros_like(s_arr)
    else:
        x1 = np.sin(k * s_arr) / k
        x2 = (np.cos(k * s_arr) - 1.0) / k
    if s_arr.ndim == 0:
        return PlanarPoint(float(x1), float(x2))
    return np.stack([x1, x2], axis=-1)


def _field(k, y):
    return np.array([1.0 + k * y[1], -k * y[0]])


def integral_curve_numeric(p):
    """Fixed-step RK4 integration; returns ``n_steps + 1`` points as ``(n, 2)``."""
    h = p.s_max / p.n_steps
    out = np.empty((p.n_steps + 1, 2))
    y = np.zeros(2)
    out[0] = y
    for i in range(p.n_steps):
        k1 = _field(p.k, y)
        k2 = _field(p.k, y + 0.5 * h * k1)
        k3 = _field(p.k, y + 0.5 * h * k2)
        k4 = _field(p.k, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[i + 1] = y
    return out


def association_fan(k_values=DEFAULT_FAN_K, g=None, s_max=DEFAULT_FAN_S_MAX,
                    n_steps=200):
    """Fan of integral curves moved to base point ``(q1, q2)`` and direction ``theta``.

    Returns a list of ``(n_steps + 1, 2)`` arrays, one per ``k``.
    """
    k_values = list(k_values)
    if not k_values:
        raise ValueError("k_values must be non-empty")
    g = GroupElement.identity() if g is None else g
    curves = []
    for k in k_values:
        local = integral_curve_numeric(IntegralCurveParams(float(k), s_max, n_steps))
        curves.append(act_array(g, local))
    return curves


# Planar left-invariant derivatives on sampled functions.
# Arrays are indexed [i_x1, i_x2] with uniform spacing h.

def planar_x1(f, h):
    """``X1 f = d f / d x1`` by second-order central differences."""
    return np.gradient(f, h, axis=0, edge_order=2)


def planar_x2(f, x1, x2, h):
    """``X2 f = (x1 d/dx2 - x2 d/dx1) f``."""
    return x1 * np.gradient(f, h, axis=1, edge_order=2) - x2 * np.gradient(f, h, axis=0, edge_order=2)


def planar_bracket(f, x1, x2, h):
    """``X2 X1 f - X1 X2 f``; equals ``-d f / d x2`` up to discretization error."""
    return planar_x2(planar_x1(f, h), x1, x2, h) - planar_x1(planar_x2(f, x1, x2, h), h)
