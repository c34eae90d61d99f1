"""
Property checks run by ``pinwheels validate``.

Each check returns a :class:`Check` with the measured value, its tolerance
and the comparison used. Operators are looked up through their modules at
call time so a patched operator is picked up by every check.
"""

import time
from dataclasses import asdict, dataclass
from functools import lru_cache

import mpmath
import numpy as np

from . import operators as ops
from . import se2, states, synthesis
from . import spectrum as spx


@dataclass
class Check:
    name: str
    measured: float
    tolerance: float
    comparison: str
    passed: bool
    seconds: float = 0.0
    detail: str = ""

    def line(self):
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.name}: {self.measured:.6g} {self.comparison} {self.tolerance:.6g}"


def _check(name, measured, tolerance, comparison, detail=""):
    measured = float(measured)
    if comparison == "<":
        ok = measured < tolerance
    elif comparison == "<=":
        ok = measured <= tolerance
    elif comparison == ">":
        ok = measured > tolerance
    elif comparison == ">=":
        ok = measured >= tolerance
    else:
        raise ValueError(comparison)
    return Check(name, measured, float(tolerance), comparison, bool(ok), detail=detail)


# -- independent oracle ---------------------------------------------------

@lru_cache(maxsize=None)
def _j0_series_cached(x2_key):
    with mpmath.workdps(40):
        q = -mpmath.mpf(x2_key) / 4
        term = mpmath.mpf(1)
        total = mpmath.mpf(1)
        k = 0
        while True:
            k += 1
            term = term * q / (k * k)
            total += term
            if abs(term) < mpmath.mpf(10) ** -32 and k > abs(q):
                break
        return float(total)


def j0_series(x):
    """Bessel ``J0`` from its power series ``sum (-x^2/4)^k / (k!)^2``.

    Summed in 40-digit arithmetic so the alternating terms near ``x = 20``
    cancel without loss. Accepts scalars or arrays.
    """
    x = np.asarray(x, dtype=float)
    out = np.array([_j0_series_cached(repr(float(v * v))) for v in x.ravel()])
    return out.reshape(x.shape) if x.ndim else float(out[0])


# -- individual checks ----------------------------------------------------

# in units of 1/Omega; the equal-uncertainty point 1/(2 Omega) is added per call
SATURATION_LAMBDAS = (0.05, 0.1, 0.5, 1.0, 5.0, 25.0, 50.0)
ASYMPTOTIC_PRODUCTS = (10.0, 25.0, 50.0)


def check_uncertainty_inequality(omega=1.0, m=256, n=1000, seed=0):
    ctx = ops.OperatorContext(omega)
    rng = np.random.default_rng(seed)
    worst = np.inf
    for _ in range(n):
        band = int(rng.integers(1, m // 4 + 1))
        f = ops.random_bandlimited(rng, m, band=band, decay=float(rng.uniform(0, 0.3)))
        worst = min(worst, ops.uncertainty_gap(ctx, f))
    return _check("uncertainty_inequality", worst, -1e-9, ">=", f"min gap over {n} random states")


def saturation_values(omega=1.0, m=256, lambdas=None):
    """Max |gap| and max eigen-relation residual for zero-phase states at theta = 0."""
    ctx = ops.OperatorContext(omega)
    lambdas = [v / omega for v in (lambdas or SATURATION_LAMBDAS)] + [0.5 / omega]
    gaps, residuals = [], []
    for lam in lambdas:
        f = states.coherent_state(states.CoherentStateParams(omega, lam, 0.0, states.PhaseSpec.zero(), m))
        gaps.append(abs(ops.uncertainty_gap(ctx, f)))
        residuals.append(states.eigen_residual(ctx, lam, f))
    return max(gaps), max(residuals)


def check_saturation(omega=1.0, m=256):
    gap, res = saturation_values(omega, m)
    return [_check("saturation_gap", gap, 1e-8, "<", "max |gap| over the lambda grid"),
            _check("eigen_relation_residual", res, 1e-9, "<", "max ||X2 u - 2i lam X1 u|| / ||u||")]


def check_equal_uncertainty(omega=1.0, m=256):
    ctx = ops.OperatorContext(omega)
    f = states.coherent_state(states.CoherentStateParams(omega, 0.5 / omega, 0.0, states.PhaseSpec.zero(), m))
    d1, d2 = states.normalized_uncertainty_pair(ctx, f)
    return _check("equal_uncertainty", abs(d1 - d2), 1e-6, "<", f"Dn X1 = {d1:.12g}, Dn X2 = {d2:.12g}")


def delta_phi_products(omega=1.0, m=256):
    out = []
    for a in ASYMPTOTIC_PRODUCTS:
        lam = a / omega
        f = states.coherent_state(states.CoherentStateParams(omega, lam, 0.0, states.PhaseSpec.zero(), m))
        out.append(states.circular_std(f) * 2.0 * np.sqrt(omega * lam))
    return out


def check_delta_phi(omega=1.0, m=256):
    p = delta_phi_products(omega, m)
    dev = max(abs(v - 1.0) for v in p)
    return _check("delta_phi_asymptotics", dev, 0.05, "<=",
                  "max |2 sqrt(Omega lam) * circular_std - 1|; products " + ", ".join(f"{v:.4f}" for v in p))


def check_commutator(omega=1.0, m=256, n=50, seed=1):
    ctx = ops.OperatorContext(omega)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        f = ops.random_bandlimited(rng, m, band=m // 2 - 2)
        diff = ops.commutator(ctx, f) - ops.apply_x3(ctx, f)
        worst = max(worst, diff.norm() / f.norm())
    return _check("commutator_identity", worst, 1e-10, "<", "max relative ||[X1,X2] term - X3 f||")


def planar_bracket_errors(ns=(64, 128, 256), half_width=3.0):
    """Max error of the finite-difference bracket against ``-df/dx2`` on a Gaussian bump."""
    errs, hs = [], []
    for n in ns:
        x = np.linspace(-half_width, half_width, n + 1)
        h = x[1] - x[0]
        x1, x2 = np.meshgrid(x, x, indexing="ij")
        c1, c2 = 0.3, -0.2
        f = np.exp(-((x1 - c1) ** 2 + (x2 - c2) ** 2))
        exact = 2.0 * (x2 - c2) * f
        got = se2.planar_bracket(f, x1, x2, h)
        inner = (slice(4, -4), slice(4, -4))
        errs.append(np.abs(got - exact)[inner].max())
        hs.append(h)
    return np.array(hs), np.array(errs)


def check_planar_bracket():
    hs, errs = planar_bracket_errors()
    order = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    return _check("planar_bracket_order", order, 1.8, ">=",
                  f"observed convergence order; finest error {errs[-1]:.3g}")


def curve_errors(n_steps=200):
    worst = 0.0
    for k in (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0):
        s_max = np.pi / max(abs(k), 1.0)
        pts = se2.integral_curve_numeric(se2.IntegralCurveParams(k, s_max, n_steps))
        s = np.linspace(0.0, s_max, n_steps + 1)
        worst = max(worst, np.abs(pts - se2.integral_curve_analytic(k, s)).max())
    return worst


def check_curves():
    return _check("integral_curve_rk4", curve_errors(), 1e-6, "<", "max pointwise distance, |k s_max| <= pi")


def plane_wave_correlation(omega=1.0, m=256, grid=None, lam_omega=50.0, theta=0.0):
    grid = grid or synthesis.GridSpec.default_for(omega)
    f = states.coherent_state(states.CoherentStateParams(omega, lam_omega / omega, theta,
                                                         states.PhaseSpec.zero(), m))
    u = synthesis.synthesize(omega, f, grid).values.real
    p = synthesis.plane_wave_limit(omega, theta, grid).values.real
    return float(np.corrcoef(u.ravel(), p.ravel())[0, 1])


def bessel_error(omega=1.0, m=256, grid=None, r_max=20.0):
    """Max ``|u - pi J0(Omega r)|`` over grid nodes with ``Omega r <= r_max``."""
    grid = grid or synthesis.GridSpec.default_for(omega)
    u = synthesis.bessel_limit(omega, grid, m).values
    x1, x2 = grid.mesh()
    r = np.hypot(x1, x2)
    sel = omega * r <= r_max
    rr = omega * r[sel]
    uniq, inv = np.unique(rr, return_inverse=True)
    ref = np.pi * j0_series(uniq)[inv]
    return float(np.abs(u[sel] - ref).max())


def bessel_first_zero(omega=1.0, m=256, direction=0.3, lo=2.2, hi=2.6, tol=1e-12):
    """First root of the synthesized ``f = 1`` field along a ray, in units of ``Omega r``."""
    f = np.ones(m, dtype=complex)
    c, s = np.cos(direction), np.sin(direction)

    def u(t):
        return synthesis.synthesize_points(omega, f, c * t / omega, s * t / omega).real

    a, b = lo, hi
    fa = u(a)
    if fa * u(b) > 0:
        raise ArithmeticError("no sign change in the bracket")
    while b - a > tol:
        mid = 0.5 * (a + b)
        fm = u(mid)
        if fa * fm <= 0:
            b = mid
        else:
            a, fa = mid, fm
    return 0.5 * (a + b)


def check_limits(omega=1.0, m=256):
    # the lambda*Omega = 50 packet has transverse width sqrt(50)/Omega, so the
    # plane-wave limit is checked over one correlation length
    local = synthesis.GridSpec(256, 256, 2 * np.pi / omega)
    return [
        _check("plane_wave_correlation_local", plane_wave_correlation(omega, m, local), 0.99, ">",
               "lambda*Omega = 50, theta = 0, |x| <= 2 pi / Omega"),
        _check("bessel_series_error", bessel_error(omega, m), 1e-8, "<", "Omega r <= 20"),
        _check("bessel_first_zero", abs(bessel_first_zero(omega, m) - 2.4048), 1e-3, "<=",
               "|r0 - 2.4048|"),
    ]


def _single_state_fields(omega, m, grid):
    out = []
    for lam, theta, phase in ((0.01, 0.0, states.PhaseSpec.zero()),
                              (0.5, np.pi / 8, states.PhaseSpec.zero()),
                              (50.0, np.pi / 3, states.PhaseSpec.zero()),
                              (0.5, 0.0, states.PhaseSpec.random_smooth(seed=3))):
        f = states.coherent_state(states.CoherentStateParams(omega, lam / omega, theta, phase, m))
        out.append(synthesis.synthesize(omega, f, grid))
    return out


def parseval_error(fields):
    worst = 0.0
    for fld in fields:
        spec = spx.radial_power_spectrum(fld)
        energy = float(np.sum(np.abs(fld.values) ** 2))
        worst = max(worst, abs(spec.total - energy) / energy)
    return worst


def single_state_fractions(fields, omega, window="hann"):
    out = []
    for fld in fields:
        spec = spx.radial_power_spectrum(fld, window=window)
        eps = spx.bins_to_epsilon(spec, omega, 2)
        out.append(spx.annulus_metrics(spec, omega, eps)["fraction_in_annulus"])
    return out


def check_spectra(omega=1.0, m=256):
    grid = synthesis.GridSpec.default_for(omega)
    fields = _single_state_fields(omega, m, grid)
    raw = single_state_fractions(fields, omega, window=None)
    return [
        _check("parseval", parseval_error(fields), 1e-9, "<", "relative"),
        _check("single_state_annulus", min(single_state_fractions(fields, omega)), 0.99, ">=",
               "min fraction within 2 bins, Hann window; unwindowed min "
               f"{min(raw):.4f}"),
    ]


def run_all(omega=1.0, m=256, n_random=1000, seed=0):
    """Run every check; returns a list of :class:`Check`."""
    suite = [
        lambda: check_uncertainty_inequality(omega, m, n_random, seed),
        lambda: check_saturation(omega, m),
        lambda: check_equal_uncertainty(omega, m),
        lambda: check_delta_phi(omega, m),
        lambda: check_commutator(omega, m),
        check_planar_bracket,
        check_curves,
        lambda: check_limits(omega, m),
        lambda: check_spectra(omega, m),
    ]
    results = []
    for run in suite:
        t0 = time.perf_counter()
        out = run()
        out = out if isinstance(out, list) else [out]
        dt = time.perf_counter() - t0
        for c in out:
            c.seconds = dt / len(out)
        results.extend(out)
    return results


def report(results):
    return {
        "passed": all(c.passed for c in results),
        "checks": [asdict(c) for c in results],
    }
