"""
Radial power spectra of fields on a ``GridSpec``.

Wave numbers are angular: DFT mode ``(m1, m2)`` of a grid ``2L`` wide sits
at ``|k| = (pi/L) * sqrt(m1^2 + m2^2)``. Bins are centered on multiples of
the bin width so that a wave exactly periodic on the grid falls in the
middle of a bin. The DC mode is kept apart from the bins.
"""

from dataclasses import dataclass, field

import numpy as np

from .orientation import OrientationMap
from .synthesis import ComplexField


@dataclass(frozen=True, eq=False)
class RadialSpectrum:
    bin_centers: np.ndarray = field(repr=False)
    power: np.ndarray = field(repr=False)
    dc: float
    width: float

    @property
    def bin_edges(self):
        return np.append(self.bin_centers - 0.5 * self.width, self.bin_centers[-1] + 0.5 * self.width)

    @property
    def peak_bin(self):
        return int(np.argmax(self.power))

    @property
    def total(self):
        return float(self.dc + self.power.sum())


def complex_order_field(omap):
    """``selectivity * exp(2i preferred)`` per pixel."""
    return ComplexField(omap.grid, omap.selectivity * np.exp(2j * omap.preferred))


def wave_numbers(grid):
    m1 = np.fft.fftfreq(grid.nx) * grid.nx
    m2 = np.fft.fftfreq(grid.ny) * grid.ny
    k1, k2 = np.meshgrid(m1, m2, indexing="ij")
    return (np.pi / grid.half_width) * np.hypot(k1, k2)


def radial_power_spectrum(fld, n_bins=None, window=None):
    """Bin ``|F(k)|^2`` by ``|k|`` using an orthonormal 2-D DFT.

    With ``n_bins=None`` the bin width is the fundamental ``pi/L``. The
    optional ``window="hann"`` tapers both axes before the transform; power
    then sums to the windowed field's energy rather than the field's.
    """
    if isinstance(fld, OrientationMap):
        fld = complex_order_field(fld)
    grid = fld.grid
    v = np.asarray(fld.values, dtype=complex)
    if window == "hann":
        v = v * np.outer(np.hanning(grid.nx), np.hanning(grid.ny))
    elif window is not None:
        raise ValueError(f"unknown window {window!r}")
    power = np.abs(np.fft.fft2(v, norm="ortho")) ** 2
    k = wave_numbers(grid)
    k_corner = k.max()
    if n_bins is None:
        width = np.pi / grid.half_width
        n_bins = int(np.floor(k_corner / width + 0.5)) + 1
    else:
        if n_bins < 4:
            raise ValueError(f"n_bins must be >= 4, got {n_bins}")
        width = k_corner / (n_bins - 0.5)
    idx = np.minimum(np.floor(k / width + 0.5).astype(int), n_bins - 1)
    dc = float(power[0, 0])
    p = power.copy()
    p[0, 0] = 0.0
    # bincount sums in flat index order, so the reduction is deterministic
    binned = np.bincount(idx.ravel(), weights=p.ravel(), minlength=n_bins)
    return RadialSpectrum(np.arange(n_bins) * width, binned, dc, width)


def annulus_metrics(spec, omega, epsilon):
    """Peak radius and fraction of non-DC power with ``|k|`` in ``omega*[1-eps, 1+eps]``.

    The fraction uses bin centers, so a bin counts wholly in or out.
    """
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    total = spec.power.sum()
    if not total > 0:
        raise ValueError("spectrum has no power outside DC")
    inside = np.abs(spec.bin_centers - omega) <= epsilon * omega + 1e-12 * omega
    return {
        "peak_radius": float(spec.bin_centers[spec.peak_bin]),
        "fraction_in_annulus": float(spec.power[inside].sum() / total),
    }


def bins_to_epsilon(spec, omega, n_bins):
    """Relative annulus half-width equal to ``n_bins`` bin widths."""
    return n_bins * spec.width / omega
