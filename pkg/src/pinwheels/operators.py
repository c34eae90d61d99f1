"""
Operators on pi-periodic functions living on the Fourier circle of radius Omega.

A :class:`CircleFunction` holds samples at ``phi_j = j*pi/M``. On that
circle the two generators act as

    X1 = -Omega sin(2 phi)     (multiplication, angular position)
    X2 = i d/dphi              (angular momentum)

and their commutator ``(i/2)(X2 X1 - X1 X2)`` is ``X3 = Omega cos(2 phi)``.

Integrals use the trapezoid rule on the periodic grid, which is spectrally
accurate for the analytic states handled here. Differentiation is spectral.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError

DEFAULT_M = 256
MIN_M = 8
VARIANCE_ROUNDOFF = 1e-12
IMAG_TOLERANCE = 1e-9
RESOLUTION_TOLERANCE = 1e-8


def circle_nodes(m):
    return np.arange(m) * (np.pi / m)


@dataclass(frozen=True, eq=False)
class CircleFunction:
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        s = np.array(self.samples, dtype=complex)
        if s.ndim != 1:
            raise ValueError(f"samples must be 1-D, got shape {s.shape}")
        if s.size < MIN_M:
            raise ValueError(f"need at least {MIN_M} samples, got {s.size}")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @classmethod
    def from_callable(cls, func, m=DEFAULT_M):
        return cls(func(circle_nodes(m)))

    @property
    def m(self):
        return self.samples.size

    @property
    def phi(self):
        return circle_nodes(self.m)

    def __len__(self):
        return self.m

    def __add__(self, other):
        return CircleFunction(self.samples + _samples(other))

    def __sub__(self, other):
        return CircleFunction(self.samples - _samples(other))

    def __mul__(self, c):
        return CircleFunction(self.samples * c)

    __rmul__ = __mul__

    def norm(self):
        return float(np.sqrt(inner(self, self).real))

    def normalized(self):
        n = self.norm()
        if n == 0:
            raise ValueError("cannot normalize the zero function")
        return CircleFunction(self.samples / n)


@dataclass(frozen=True)
class OperatorContext:
    omega: float = 1.0

    def __post_init__(self):
        if not self.omega > 0:
            raise ConfigurationError(f"omega must be positive, got {self.omega}", key="omega")


def _samples(f):
    return f.samples if isinstance(f, CircleFunction) else np.asarray(f, dtype=complex)


def mode_numbers(m):
    """Mode index ``k`` of ``exp(2ik phi)`` for each FFT slot, ``-M/2 .. M/2-1``."""
    return np.fft.fftfreq(m) * m


def top_mode_fraction(f):
    """Energy fraction in the Nyquist mode ``k = -M/2``."""
    c = np.fft.fft(_samples(f))
    total = np.sum(np.abs(c) ** 2)
    if total == 0:
        return 0.0
    return float(np.abs(c[c.size // 2]) ** 2 / total)


def apply_x1(ctx, f):
    return CircleFunction(-ctx.omega * np.sin(2.0 * f.phi) * f.samples)


def apply_x2(f):
    if f.m % 2:
        raise ConfigurationError(f"spectral derivative needs even M, got {f.m}", key="m")
    assert top_mode_fraction(f) < RESOLUTION_TOLERANCE, "state not resolved on the circle grid"
    k = mode_numbers(f.m)
    return CircleFunction(np.fft.ifft(np.fft.fft(f.samples) * (-2.0 * k)))


def apply_x3(ctx, f):
    return CircleFunction(ctx.omega * np.cos(2.0 * f.phi) * f.samples)


OPERATORS = {
    "X1": lambda ctx, f: apply_x1(ctx, f),
    "X2": lambda ctx, f: apply_x2(f),
    "X3": lambda ctx, f: apply_x3(ctx, f),
}


def commutator(ctx, f):
    """``(i/2)(X2 X1 - X1 X2) f``, computed by composing the operators."""
    return 0.5j * (apply_x2(apply_x1(ctx, f)) - apply_x1(ctx, apply_x2(f)))


def inner(f, g):
    a, b = _samples(f), _samples(g)
    if a.shape != b.shape:
        raise ValueError(f"sample counts differ: {a.size} vs {b.size}")
    return complex(np.pi / a.size * np.vdot(a, b))


def _norm2(f):
    n2 = inner(f, f).real
    if not n2 > 0:
        raise ValueError("zero-norm state")
    return n2


def _op(op):
    try:
        return OPERATORS[op]
    except KeyError:
        raise ValueError(f"unknown operator {op!r}; expected one of {sorted(OPERATORS)}") from None


def expectation(op, ctx, f):
    """Mean value ``<f, Op f> / <f, f>`` of a self-adjoint operator."""
    n2 = _norm2(f)
    val = inner(f, _op(op)(ctx, f)) / n2
    assert abs(val.imag) <= IMAG_TOLERANCE * max(1.0, abs(val)), \
        f"<{op}> has imaginary part {val.imag:g}"
    return val.real


def variance(op, ctx, f):
    apply = _op(op)
    n2 = _norm2(f)
    g = apply(ctx, f)
    mean = inner(f, g).real / n2
    # <Op^2> = ||Op f||^2 for self-adjoint Op; avoids a second derivative
    second = inner(g, g).real / n2
    var = second - mean * mean
    if var < 0:
        if var < -VARIANCE_ROUNDOFF * max(1.0, second):
            raise ArithmeticError(f"negative variance {var:g} for {op}")
        var = 0.0
    return var


def std_dev(op, ctx, f):
    return float(np.sqrt(variance(op, ctx, f)))


def uncertainty_bound(ctx, f):
    """Sharp lower bound ``|<X3>|`` on ``Delta X1 * Delta X2``.

    With ``X3 = (i/2)[X2, X1]`` the general commutator bound
    ``(1/2)|<[X1, X2]>|`` equals ``|<X3>|``.
    """
    return abs(expectation("X3", ctx, f))


def uncertainty_gap(ctx, f):
    """``Delta X1 * Delta X2 - |<X3>|``; non-negative, zero on minimizers."""
    return std_dev("X1", ctx, f) * std_dev("X2", ctx, f) - uncertainty_bound(ctx, f)


def uncertainty_report(ctx, f):
    d1 = std_dev("X1", ctx, f)
    d2 = std_dev("X2", ctx, f)
    x3 = expectation("X3", ctx, f)
    return {
        "delta_x1": d1,
        "delta_x2": d2,
        "mean_x3": x3,
        "half_abs_x3": 0.5 * abs(x3),
        "bound": abs(x3),
        "gap": d1 * d2 - abs(x3),
    }


def random_bandlimited(rng, m=DEFAULT_M, band=None, decay=0.0):
    """Random complex state with modes ``|k| <= band`` (default ``M/4``)."""
    band = m // 4 if band is None else band
    if band > m // 2 - 2:
        raise ConfigurationError(f"band {band} too wide for M={m}", key="band")
    k = np.arange(-band, band + 1)
    coef = (rng.normal(size=k.size) + 1j * rng.normal(size=k.size)) * np.exp(-decay * np.abs(k))
    phi = circle_nodes(m)
    return CircleFunction(np.exp(2j * np.outer(phi, k)) @ coef)
