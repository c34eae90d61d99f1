"""
Minimal-uncertainty states on the Fourier circle.

The ground state ``exp(lambda*Omega*cos(2 phi))`` solves
``X2 u = 2i lambda X1 u``; displacing it by ``theta`` gives the coherent
state centered on orientation ``theta``. A local phase ``exp(i alpha(phi))``
makes it covariant without changing its modulus.
"""

from dataclasses import dataclass, field

import numpy as np

from . import operators as ops
from .errors import ConfigurationError
from .operators import CircleFunction, OperatorContext
from .se2 import normalize_angle

MAX_EXPONENT = 300.0
DEFAULT_CUTOFF = 4
DEFAULT_AMPLITUDE = np.pi
_PHASE_PEAK_SAMPLES = 16384


@dataclass(frozen=True)
class PhaseSpec:
    """Local phase ``alpha(phi)``.

    ``variant`` is ``"zero"``, ``"linear"`` (``alpha = c*phi``, ``c`` an even
    integer so the state stays pi-periodic) or ``"random"`` (a seeded real
    trigonometric polynomial in ``2 phi`` of degree ``cutoff`` scaled to
    peak at ``amplitude``).
    """

    variant: str = "zero"
    c: float = 0.0
    seed: int = 0
    cutoff: int = DEFAULT_CUTOFF
    amplitude: float = DEFAULT_AMPLITUDE

    def __post_init__(self):
        if self.variant not in ("zero", "linear", "random"):
            raise ConfigurationError(f"unknown phase variant {self.variant!r}", key="phase")
        if self.variant == "linear" and (self.c != round(self.c) or round(self.c) % 2):
            raise ConfigurationError(
                f"linear phase slope must be an even integer for pi-periodicity, got {self.c}",
                key="phase_c")
        if self.variant == "random":
            if self.cutoff < 1:
                raise ConfigurationError(f"cutoff must be >= 1, got {self.cutoff}", key="cutoff")
            if self.amplitude < 0:
                raise ConfigurationError(f"amplitude must be >= 0, got {self.amplitude}",
                                         key="amplitude")
            if self.seed < 0:
                raise ConfigurationError(f"seed must be >= 0, got {self.seed}", key="seed")

    @classmethod
    def zero(cls):
        return cls("zero")

    @classmethod
    def linear(cls, c):
        return cls("linear", c=c)

    @classmethod
    def random_smooth(cls, seed=0, cutoff=DEFAULT_CUTOFF, amplitude=DEFAULT_AMPLITUDE):
        return cls("random", seed=seed, cutoff=cutoff, amplitude=amplitude)


def _random_coefficients(seed, cutoff):
    # Philox is counter based: the draw depends on the seed only
    rng = np.random.Generator(np.random.Philox(key=seed))
    a = rng.standard_normal(cutoff + 1)
    b = rng.standard_normal(cutoff + 1)
    b[0] = 0.0
    return a, b


def _trig_poly(a, b, phi):
    k = np.arange(a.size)
    arg = 2.0 * np.outer(phi, k)
    return np.cos(arg) @ a + np.sin(arg) @ b


def phase_values(spec, phi):
    """Evaluate ``alpha`` at the angles ``phi``."""
    phi = np.asarray(phi, dtype=float)
    if spec.variant == "zero":
        return np.zeros_like(phi)
    if spec.variant == "linear":
        return spec.c * phi
    a, b = _random_coefficients(spec.seed, spec.cutoff)
    peak = np.max(np.abs(_trig_poly(a, b, ops.circle_nodes(_PHASE_PEAK_SAMPLES))))
    if peak == 0 or spec.amplitude == 0:
        return np.zeros_like(phi)
    return _trig_poly(a, b, phi) * (spec.amplitude / peak)


@dataclass(frozen=True)
class CoherentStateParams:
    omega: float = 1.0
    lam: float | None = None
    theta: float = 0.0
    phase: PhaseSpec = field(default_factory=PhaseSpec)
    m: int = ops.DEFAULT_M

    def __post_init__(self):
        if not self.omega > 0:
            raise ConfigurationError(f"omega must be positive, got {self.omega}", key="omega")
        if self.lam is None:
            object.__setattr__(self, "lam", 0.5 / self.omega)
        if not self.lam > 0:
            raise ConfigurationError(f"lambda must be positive, got {self.lam}", key="lambda")
        if self.m < ops.MIN_M:
            raise ConfigurationError(f"m must be >= {ops.MIN_M}, got {self.m}", key="m")
        object.__setattr__(self, "theta", normalize_angle(self.theta))

    @property
    def ctx(self):
        return OperatorContext(self.omega)

    def with_theta(self, theta):
        return CoherentStateParams(self.omega, self.lam, theta, self.phase, self.m)


def _check_exponent(omega, lam):
    if lam * omega > MAX_EXPONENT:
        raise ConfigurationError(
            f"lambda*omega = {lam * omega:g} exceeds the overflow guard {MAX_EXPONENT:g}",
            key="lambda")


def ground_state(omega, lam, m=ops.DEFAULT_M):
    """Unit-norm samples of ``exp(lambda*Omega*cos(2 phi))``."""
    if not (omega > 0 and lam > 0):
        raise ConfigurationError(f"omega and lambda must be positive, got {omega}, {lam}")
    _check_exponent(omega, lam)
    phi = ops.circle_nodes(m)
    # shift the exponent so the peak sample is 1; normalization absorbs it
    return CircleFunction(np.exp(lam * omega * (np.cos(2.0 * phi) - 1.0))).normalized()


def coherent_state(p):
    """Unit-norm displaced state with local phase, sampled on ``p.m`` nodes."""
    _check_exponent(p.omega, p.lam)
    phi = ops.circle_nodes(p.m)
    modulus = np.exp(p.lam * p.omega * (np.cos(2.0 * (phi - p.theta)) - 1.0))
    return CircleFunction(modulus * np.exp(1j * phase_values(p.phase, phi))).normalized()


def eigen_residual(ctx, lam, f):
    """Relative residual ``||X2 u - 2i lambda X1 u|| / ||u||``."""
    r = ops.apply_x2(f) - 2j * lam * ops.apply_x1(ctx, f)
    return r.norm() / f.norm()


def circular_std(f, weight="modulus"):
    """Circular standard deviation of orientation for a state.

    The profile ``|f|`` (``weight="modulus"``) or ``|f|^2``
    (``weight="intensity"``) is used as a density on the doubled angle.
    With ``R = |<exp(2i phi)>|`` the result is ``sqrt(-2 ln R) / 2``; a
    uniform density gives ``inf``.
    """
    mod = np.abs(f.samples)
    if weight == "modulus":
        w = mod
    elif weight == "intensity":
        w = mod ** 2
    else:
        raise ValueError(f"weight must be 'modulus' or 'intensity', got {weight!r}")
    total = w.sum()
    if not total > 0:
        raise ValueError("zero-norm state")
    r = abs(np.sum(w * np.exp(2j * f.phi)) / total)
    if r < 1e-15:
        return np.inf
    return 0.5 * float(np.sqrt(max(-2.0 * np.log(min(r, 1.0)), 0.0)))


def normalized_uncertainty_pair(ctx, f):
    """``Delta X_i / |<X3>|^(1/2)`` for ``i = 1, 2``."""
    x3 = abs(ops.expectation("X3", ctx, f))
    if x3 <= 1e-12:
        raise ValueError(f"|<X3>| = {x3:g}: normalized uncertainties undefined")
    s = np.sqrt(x3)
    return ops.std_dev("X1", ctx, f) / s, ops.std_dev("X2", ctx, f) / s
