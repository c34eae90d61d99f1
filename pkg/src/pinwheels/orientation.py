"""
Orientation preference maps built from stacks of coherent-state activity maps,
and detection of their pinwheel singularities.

All per-pixel arrays are indexed ``[i_x1, i_x2]`` like :class:`GridSpec`.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from matplotlib.colors import hsv_to_rgb

from .states import CoherentStateParams, coherent_state
from .synthesis import ComplexField, GridSpec, activity_map, synthesize

WORKERS_ENV = "PINWHEELS_WORKERS"
QUANTIZATION_TOLERANCE = 1e-6


def worker_count():
    """Thread count for stack synthesis, capped by ``$PINWHEELS_WORKERS``."""
    n = os.cpu_count() or 1
    cap = os.environ.get(WORKERS_ENV)
    if cap:
        n = min(n, max(1, int(cap)))
    return n


@dataclass(frozen=True)
class OrientationSampleSet:
    n_orient: int = 8
    offset: float = 0.0

    def __post_init__(self):
        if self.n_orient < 2:
            raise ValueError(f"n_orient must be >= 2, got {self.n_orient}")

    @property
    def angles(self):
        return self.offset + np.arange(self.n_orient) * (np.pi / self.n_orient)


@dataclass(frozen=True, eq=False)
class ActivityStack:
    grid: GridSpec
    thetas: np.ndarray
    maps: np.ndarray = field(repr=False)
    params: CoherentStateParams | None = None

    def __post_init__(self):
        if self.maps.shape != (len(self.thetas), self.grid.nx, self.grid.ny):
            raise ValueError(f"stack shape {self.maps.shape} inconsistent with "
                             f"{len(self.thetas)} maps on {self.grid.nx}x{self.grid.ny}")


@dataclass(frozen=True, eq=False)
class OrientationMap:
    grid: GridSpec
    preferred: np.ndarray = field(repr=False)
    selectivity: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class Pinwheel:
    x: float
    y: float
    charge: float
    i: int
    j: int


def activity_stack(params, sample_set, grid, mode="real", workers=None):
    """Synthesize one activity map per orientation; ``params.theta`` is ignored."""
    grid.check_resolves(params.omega)
    thetas = sample_set.angles

    def one(theta):
        f = coherent_state(params.with_theta(theta))
        return activity_map(synthesize(params.omega, f, grid), mode)

    workers = worker_count() if workers is None else workers
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            maps = list(pool.map(one, thetas))
    else:
        maps = [one(t) for t in thetas]
    return ActivityStack(grid, thetas, np.stack(maps), params)


def _to_orientation(angle):
    p = np.mod(angle, np.pi)
    p[p >= np.pi] = 0.0
    return p


def vector_sum_field(stack):
    """Raw vector sum ``z = sum_j a_j exp(2i theta_j)`` as a field.

    The per-pixel minimum shift used by :func:`vector_sum_orientation` does
    not change ``z`` for uniformly spaced angles.
    """
    weights = stack.maps - stack.maps.min(axis=0)
    z = np.tensordot(np.exp(2j * np.asarray(stack.thetas)), weights, axes=1)
    return ComplexField(stack.grid, z)


def vector_sum_orientation(stack):
    weights = stack.maps - stack.maps.min(axis=0)
    z = np.tensordot(np.exp(2j * np.asarray(stack.thetas)), weights, axes=1)
    total = weights.sum(axis=0)
    selectivity = np.zeros_like(total)
    nz = total > 0
    selectivity[nz] = np.abs(z[nz]) / total[nz]
    np.clip(selectivity, 0.0, 1.0, out=selectivity)
    return OrientationMap(stack.grid, _to_orientation(0.5 * np.angle(z)), selectivity)


def argmax_orientation(stack):
    maps = stack.maps
    idx = np.argmax(maps, axis=0)
    hi, lo = maps.max(axis=0), maps.min(axis=0)
    med = np.median(maps, axis=0)
    span = hi - lo
    selectivity = np.zeros_like(span)
    nz = span > 0
    selectivity[nz] = (hi[nz] - med[nz]) / span[nz]
    np.clip(selectivity, 0.0, 1.0, out=selectivity)
    preferred = _to_orientation(np.asarray(stack.thetas)[idx])
    return OrientationMap(stack.grid, preferred, selectivity)


ESTIMATORS = {"vector_sum": vector_sum_orientation, "argmax": argmax_orientation}


def wrap(d):
    """Wrap angle differences to ``[-pi, pi]``.

    The map is odd, ``wrap(-d) == -wrap(d)``, including exact half turns, so
    an edge shared by two plaquettes cancels and the plaquette charges sum
    to the boundary winding even for quantized (argmax) maps.
    """
    d = np.asarray(d, dtype=float)
    return d - 2.0 * np.pi * np.rint(d / (2.0 * np.pi))


def plaquette_windings(omap):
    """Integer winding of the doubled angle around every 2x2 plaquette.

    Loops run counter-clockwise in the ``(x1, x2)`` plane. Raises
    :class:`ArithmeticError` if a loop sum is not finite or not in ``{-2pi, 0, 2pi}``.
    """
    d = 2.0 * omap.preferred
    a, b = d[:-1, :-1], d[1:, :-1]
    c, e = d[1:, 1:], d[:-1, 1:]
    total = wrap(b - a) + wrap(c - b) + wrap(e - c) + wrap(a - e)
    if not np.isfinite(total).all():
        raise ArithmeticError("orientation map has non-finite values")
    w = np.rint(total / (2.0 * np.pi))
    bad = np.abs(total - 2.0 * np.pi * w) > QUANTIZATION_TOLERANCE
    if bad.any() or np.abs(w).max(initial=0) > 1:
        raise ArithmeticError("plaquette winding not quantized to {-1, 0, 1}")
    return w.astype(int)


def detect_pinwheels(omap):
    """Pinwheels as plaquette centers carrying charge +-1/2, in row-major order."""
    w = plaquette_windings(omap)
    x1, x2 = omap.grid.x1, omap.grid.x2
    hx, hy = x1[1] - x1[0], x2[1] - x2[0]
    return [Pinwheel(float(x1[i] + hx / 2), float(x2[j] + hy / 2), 0.5 * int(w[i, j]), int(i), int(j))
            for i, j in zip(*np.nonzero(w))]


def boundary_winding(omap):
    """Winding of the doubled angle around the outer boundary, counter-clockwise."""
    d = 2.0 * omap.preferred
    loop = np.concatenate([d[:, 0], d[-1, 1:], d[-2::-1, -1], d[0, -2:0:-1], d[:1, 0]])
    return int(np.rint(wrap(np.diff(loop)).sum() / (2.0 * np.pi)))


def render_pinwheel_image(omap):
    """8-bit RGB image with hue ``preferred/pi`` and saturation ``selectivity``.

    Returned in image layout: rows run from top (largest ``x2``) to bottom,
    columns along ``x1``.
    """
    hsv = np.stack([omap.preferred / np.pi, omap.selectivity, np.ones_like(omap.preferred)], axis=-1)
    hsv[..., 0] = np.mod(hsv[..., 0], 1.0)
    rgb = hsv_to_rgb(np.clip(hsv, 0.0, 1.0))
    img = np.floor(rgb * 255.0 + 0.5).astype(np.uint8)
    return img.transpose(1, 0, 2)[::-1]
