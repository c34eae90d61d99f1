"""
Real-plane fields from data supported on the Fourier circle of radius Omega.

The anti-transform is evaluated by direct quadrature over the circle nodes:

    u(x) = (pi/M) * sum_j f_j exp(i Omega (-x1 sin 2phi_j + x2 cos 2phi_j))

The exponential factorizes over the two axes, so a whole grid is one
``(nx, M) @ (M, ny)`` product.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError
from .operators import CircleFunction, DEFAULT_M, circle_nodes

MIN_PIXELS_PER_WAVELENGTH = 4.0
ACTIVITY_MODES = ("real", "modulus", "phase")


@dataclass(frozen=True)
class GridSpec:
    """``nx`` by ``ny`` nodes ``-L + 2L*i/n`` covering ``[-L, L)`` on each axis."""

    nx: int = 256
    ny: int = 256
    half_width: float = 8 * np.pi

    def __post_init__(self):
        if self.nx < 8 or self.ny < 8:
            raise ConfigurationError(f"grid must be at least 8x8, got {self.nx}x{self.ny}",
                                     key="grid_n")
        if not self.half_width > 0:
            raise ConfigurationError(f"half_width must be positive, got {self.half_width}",
                                     key="half_width")

    @classmethod
    def default_for(cls, omega, n=256):
        return cls(n, n, 8 * np.pi / omega)

    @property
    def pitch(self):
        """Largest node spacing over the two axes."""
        return 2.0 * self.half_width / min(self.nx, self.ny)

    @property
    def x1(self):
        return -self.half_width + 2.0 * self.half_width * np.arange(self.nx) / self.nx

    @property
    def x2(self):
        return -self.half_width + 2.0 * self.half_width * np.arange(self.ny) / self.ny

    def mesh(self):
        return np.meshgrid(self.x1, self.x2, indexing="ij")

    def origin_index(self):
        """Index of the node nearest the origin."""
        return int(np.argmin(np.abs(self.x1))), int(np.argmin(np.abs(self.x2)))

    def check_resolves(self, omega):
        wavelength = 2.0 * np.pi / omega
        if wavelength / self.pitch < MIN_PIXELS_PER_WAVELENGTH:
            need = wavelength / MIN_PIXELS_PER_WAVELENGTH
            raise ConfigurationError(
                f"grid pitch {self.pitch:.4g} under-resolves wavelength {wavelength:.4g}; "
                f"pitch must be <= {need:.4g}", key="grid_n")


@dataclass(frozen=True, eq=False)
class ComplexField:
    grid: GridSpec
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.shape != (self.grid.nx, self.grid.ny):
            raise ValueError(f"values shape {v.shape} does not match grid "
                             f"({self.grid.nx}, {self.grid.ny})")
        object.__setattr__(self, "values", v)


def _samples(f):
    return f.samples if isinstance(f, CircleFunction) else np.asarray(f, dtype=complex)


def synthesize(omega, f, grid):
    grid.check_resolves(omega)
    s = _samples(f)
    phi = circle_nodes(s.size)
    a = np.exp(-1j * omega * np.outer(grid.x1, np.sin(2.0 * phi))) * s
    b = np.exp(1j * omega * np.outer(grid.x2, np.cos(2.0 * phi)))
    return ComplexField(grid, (np.pi / s.size) * (a @ b.T))


def synthesize_points(omega, f, x1, x2, chunk=4096):
    """Anti-transform at arbitrary points (``x1``, ``x2`` broadcast together)."""
    s = _samples(f)
    phi = circle_nodes(s.size)
    sin2, cos2 = np.sin(2.0 * phi), np.cos(2.0 * phi)
    x1, x2 = np.broadcast_arrays(np.asarray(x1, float), np.asarray(x2, float))
    flat1, flat2 = x1.ravel(), x2.ravel()
    out = np.empty(flat1.size, dtype=complex)
    for lo in range(0, flat1.size, chunk):
        p = np.exp(1j * omega * (np.outer(-flat1[lo:lo + chunk], sin2)
                                 + np.outer(flat2[lo:lo + chunk], cos2)))
        out[lo:lo + chunk] = p @ s
    return (np.pi / s.size) * out.reshape(x1.shape)


def plane_wave_limit(omega, theta, grid):
    """``exp(i Omega (-x1 sin 2theta + x2 cos 2theta))`` on the grid."""
    x1, x2 = grid.mesh()
    return ComplexField(grid, np.exp(1j * omega * (-x1 * np.sin(2 * theta) + x2 * np.cos(2 * theta))))


def bessel_limit(omega, grid, m=DEFAULT_M):
    """``pi * J0(Omega r)``, by the same quadrature as :func:`synthesize` on ``f = 1``."""
    return synthesize(omega, np.ones(m, dtype=complex), grid)


def activity_map(fld, mode="real"):
    v = fld.values if isinstance(fld, ComplexField) else np.asarray(fld)
    if mode == "real":
        return v.real.copy()
    if mode == "modulus":
        return np.abs(v)
    if mode == "phase":
        return np.angle(v)
    raise ConfigurationError(f"mode must be one of {ACTIVITY_MODES}, got {mode!r}", key="mode")
