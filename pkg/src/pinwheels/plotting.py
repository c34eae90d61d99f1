"""
Figures written alongside the CLI's tabular output.

Everything renders with the Agg backend and strips the software tag from
PNG metadata so reruns produce identical files.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .io import grid_to_image  # noqa: E402
from .orientation import render_pinwheel_image  # noqa: E402

_SAVE = {"dpi": 100, "metadata": {"Software": None}, "bbox_inches": "tight"}


def _figure(width=6.0, height=None, **kw):
    golden_ratio = (np.sqrt(5) - 1.0) / 2.0
    if height is None:
        height = width * golden_ratio
    return plt.subplots(figsize=(width, height), **kw)


def _save(fig, path):
    fig.savefig(path, **_SAVE)
    plt.close(fig)
    return path


def _extent(grid):
    h1 = 2 * grid.half_width / grid.nx
    h2 = 2 * grid.half_width / grid.ny
    return (grid.x1[0] - h1 / 2, grid.x1[-1] + h1 / 2, grid.x2[0] - h2 / 2, grid.x2[-1] + h2 / 2)


def plot_state_polar(f, path, title=None):
    """Modulus as radius, phase as color; the pi-periodic state is drawn twice."""
    fig, ax = _figure(5, 5, subplot_kw={"projection": "polar"})
    phi = np.concatenate([f.phi, f.phi + np.pi, [2 * np.pi]])
    vals = np.concatenate([f.samples, f.samples, f.samples[:1]])
    r = np.abs(vals)
    ax.plot(phi, r, color="0.3", lw=0.8)
    sc = ax.scatter(phi, r, c=np.angle(vals), cmap="hsv", vmin=-np.pi, vmax=np.pi, s=6)
    fig.colorbar(sc, ax=ax, pad=0.1, label="arg")
    if title:
        ax.set_title(title)
    return _save(fig, path)


def plot_fan(curves, path, base=None):
    fig, ax = _figure(5, 5)
    for c in curves:
        ax.plot(c[:, 0], c[:, 1], color="k", lw=1)
    if base is not None:
        ax.plot([base[0]], [base[1]], "o", color="tab:red", ms=4)
    ax.set_aspect("equal")
    ax.set_xlabel("$x_1$")
    ax.set_ylabel("$x_2$")
    return _save(fig, path)


def plot_activity(a, grid, path, title=None):
    fig, ax = _figure(5, 5)
    ax.imshow(grid_to_image(a), cmap="gray", extent=_extent(grid))
    ax.set_xlabel("$x_1$")
    ax.set_ylabel("$x_2$")
    if title:
        ax.set_title(title)
    return _save(fig, path)


def plot_spectrum(spec, omega, epsilon, path):
    """Log radial power with the predicted annulus shaded."""
    fig, ax = _figure(6)
    p = np.where(spec.power > 0, spec.power, np.nan)
    ax.semilogy(spec.bin_centers, p, "-", color="k", lw=1)
    ax.axvspan(omega * (1 - epsilon), omega * (1 + epsilon), color="tab:orange", alpha=0.3)
    ax.axvline(omega, color="tab:orange", lw=1)
    ax.set_xlabel("$|k|$")
    ax.set_ylabel("power")
    k_hi = min(spec.bin_centers[-1], 4 * omega)
    ax.set_xlim(0, k_hi)
    shown = spec.power[(spec.bin_centers <= k_hi) & (spec.power > 0)]
    if shown.size:
        ax.set_ylim(shown.min() / 2, shown.max() * 2)
    return _save(fig, path)


def plot_pinwheels(omap, pinwheels, path):
    """Color-coded orientation map with detected singularities marked."""
    fig, ax = _figure(6, 6)
    ax.imshow(render_pinwheel_image(omap), extent=_extent(omap.grid))
    for sign, marker in ((0.5, "o"), (-0.5, "s")):
        pts = [(p.x, p.y) for p in pinwheels if p.charge == sign]
        if pts:
            xs, ys = zip(*pts)
            ax.plot(xs, ys, marker, mfc="none", mec="k", ms=4, ls="none",
                    label=f"charge {sign:+g}")
    if pinwheels:
        ax.legend(loc="upper right", fontsize=8)
    ax.set_xlabel("$x_1$")
    ax.set_ylabel("$x_2$")
    return _save(fig, path)


def plot_uncertainty(lams, pairs, path):
    """Normalized angular-position and angular-momentum spreads versus lambda."""
    pairs = np.asarray(pairs)
    fig, ax = _figure(6)
    ax.loglog(lams, pairs[:, 0], "o-", label=r"$\Delta_n X_1$")
    ax.loglog(lams, pairs[:, 1], "s-", label=r"$\Delta_n X_2$")
    ax.set_xlabel(r"$\lambda$")
    ax.legend()
    return _save(fig, path)
