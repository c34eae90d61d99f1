"""
End-to-end runs behind the CLI subcommands.

Each ``run_*`` takes a resolved :class:`RunConfig`, writes its artifacts into
``cfg.out`` and returns the JSON-ready summary it also stores there.
"""

from pathlib import Path

import numpy as np

from . import io, plotting
from . import operators as ops
from . import orientation as ori
from . import se2, states, synthesis
from . import spectrum as spx


def _out(cfg):
    path = Path(cfg.out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _want(cfg, fmt):
    return fmt in cfg.formats


def run_state(cfg):
    out = _out(cfg)
    params = cfg.state_params()
    f = states.coherent_state(params)
    rep = ops.uncertainty_report(params.ctx, f)
    rep.update(
        theta=params.theta,
        lam=params.lam,
        omega=params.omega,
        circular_std=states.circular_std(f),
        eigen_residual=states.eigen_residual(params.ctx, params.lam, f),
    )
    try:
        rep["normalized"] = list(states.normalized_uncertainty_pair(params.ctx, f))
    except ValueError:
        rep["normalized"] = None
    if _want(cfg, "csv"):
        io.write_circle_csv(out / "state.csv", f)
    if _want(cfg, "png"):
        plotting.plot_state_polar(f, out / "state_polar.png",
                                  title=f"lambda={params.lam:g}, theta={params.theta:.4g}")
    doc = {"report": rep, "config": cfg.to_dict()}
    io.write_json(out / "state.json", doc)
    return doc


def run_fan(cfg):
    out = _out(cfg)
    g = cfg.base_element()
    curves = se2.association_fan(cfg.k_values, g, cfg.s_max, cfg.n_steps)
    s = np.linspace(0.0, cfg.s_max, cfg.n_steps + 1)
    if _want(cfg, "csv"):
        io.write_fan_csv(out / "fan.csv", curves, s)
    if _want(cfg, "svg"):
        io.write_fan_svg(out / "fan.svg", curves)
    if _want(cfg, "png"):
        plotting.plot_fan(curves, out / "fan.png", base=(g.q1, g.q2))
    ends = [c[-1].tolist() for c in curves]
    doc = {"n_curves": len(curves), "base": [g.q1, g.q2, g.theta], "endpoints": ends,
           "config": cfg.to_dict()}
    io.write_json(out / "fan.json", doc)
    return doc


def _write_gray(out, stem, a, cfg):
    img, lo, hi = io.to_gray8(io.grid_to_image(a))
    if _want(cfg, "pgm"):
        io.write_pgm(out / f"{stem}.pgm", img)
    if _want(cfg, "png"):
        io.write_png(out / f"{stem}.png", img)
    return {"min": lo, "max": hi}


def _spectrum_block(fld, cfg, omega, out=None, stem="spectrum"):
    window = None if cfg.window == "none" else cfg.window
    spec = spx.radial_power_spectrum(fld, cfg.n_bins, window=window)
    metrics = spx.annulus_metrics(spec, omega, cfg.epsilon)
    metrics.update(bin_width=spec.width, epsilon=cfg.epsilon, window=cfg.window)
    if out is not None:
        if _want(cfg, "csv"):
            io.write_spectrum_csv(out / f"{stem}.csv", spec)
        if _want(cfg, "png"):
            plotting.plot_spectrum(spec, omega, cfg.epsilon, out / f"{stem}.png")
    return metrics


def circle_input(cfg):
    """The circle data a single-field run synthesizes."""
    if cfg.state_csv:
        return io.read_circle_csv(cfg.state_csv), "file"
    if cfg.bessel:
        return ops.CircleFunction(np.ones(cfg.m, dtype=complex)), "bessel"
    return states.coherent_state(cfg.state_params()), "coherent"


def run_map(cfg):
    out = _out(cfg)
    grid = cfg.grid()
    f, source = circle_input(cfg)
    fld = synthesis.synthesize(cfg.omega, f, grid)
    a = synthesis.activity_map(fld, cfg.mode)
    if _want(cfg, "csv"):
        io.write_field_csv(out / "field.csv", fld)
    norm = _write_gray(out, "field", a, cfg)
    i0, j0 = grid.origin_index()
    center = fld.values[i0, j0]
    doc = {
        "source": source,
        "normalization": norm,
        "center_value": [float(center.real), float(center.imag)],
        "content_sha256": io.sha256_array(fld.values),
        "spectrum": _spectrum_block(fld, cfg, cfg.omega),
        "config": cfg.to_dict(),
    }
    io.write_json(out / "field.json", doc)
    return doc


def build_orientation(cfg, workers=None):
    """Stack, orientation map and pinwheels for the configured run."""
    params = cfg.state_params()
    stack = ori.activity_stack(params, cfg.sample_set(), cfg.grid(), cfg.mode, workers=workers)
    omap = ori.ESTIMATORS[cfg.estimator](stack)
    return stack, omap, ori.detect_pinwheels(omap)


def orientation_histogram_ratio(omap, bins=18):
    h, _ = np.histogram(omap.preferred, bins=bins, range=(0.0, np.pi))
    return float(h.max() / h.min()) if h.min() > 0 else float("inf")


def run_pinwheel(cfg, workers=None):
    out = _out(cfg)
    stack, omap, pins = build_orientation(cfg, workers)
    maps_norm = []
    for j, a in enumerate(stack.maps):
        n = _write_gray(out, f"activity_{j:02d}", a, cfg)
        n["theta"] = float(stack.thetas[j])
        maps_norm.append(n)
    if _want(cfg, "png"):
        io.write_png(out / "pinwheel.png", ori.render_pinwheel_image(omap))
        plotting.plot_pinwheels(omap, pins, out / "pinwheel_plot.png")
    if _want(cfg, "csv"):
        io.write_orientation_csv(out / "orientation.csv", omap)
    io.write_json(out / "pinwheels.json", io.pinwheels_to_json(pins))

    zfield = spx.complex_order_field(omap)
    metrics = _spectrum_block(zfield, cfg, cfg.omega, out)
    raw = _spectrum_block(ori.vector_sum_field(stack), cfg, cfg.omega, out, stem="spectrum_vector_sum")
    charges = [p.charge for p in pins]
    summary = {
        "pinwheel_count": len(pins),
        "n_positive": sum(c > 0 for c in charges),
        "n_negative": sum(c < 0 for c in charges),
        "net_charge": float(sum(charges)),
        "boundary_winding": 0.5 * ori.boundary_winding(omap),
        "peak_radius": metrics["peak_radius"],
        "fraction_in_annulus": metrics["fraction_in_annulus"],
        "spectrum": metrics,
        "vector_sum_spectrum": raw,
        "orientation_histogram_ratio": orientation_histogram_ratio(omap),
        "activity_normalization": maps_norm,
        "config": cfg.to_dict(),
    }
    io.write_json(out / "summary.json", summary)
    return summary


def run_spectrum(cfg, workers=None):
    """Spectrum of the single-state field, the order field or the raw vector sum."""
    out = _out(cfg)
    if cfg.source == "field":
        f, _ = circle_input(cfg)
        fld = synthesis.synthesize(cfg.omega, f, cfg.grid())
    else:
        stack, omap, _ = build_orientation(cfg, workers)
        fld = spx.complex_order_field(omap) if cfg.source == "zfield" else ori.vector_sum_field(stack)
    doc = {"source": cfg.source, "spectrum": _spectrum_block(fld, cfg, cfg.omega, out),
           "config": cfg.to_dict()}
    io.write_json(out / "spectrum.json", doc)
    return doc
