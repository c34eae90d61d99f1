"""
Run configuration: a flat ``key = value`` document plus command-line overrides.

Values are JSON literals (numbers, strings, booleans, lists); a bare word is
read as a string. Lines starting with ``#`` are comments. The canonical
serialization sorts keys and writes every value as JSON, which is what the
output sidecars embed.
"""

import json
import math
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from .errors import ConfigurationError
from .operators import MIN_M
from .orientation import ESTIMATORS, OrientationSampleSet
from .se2 import DEFAULT_FAN_K, GroupElement, normalize_angle
from .states import MAX_EXPONENT, CoherentStateParams, PhaseSpec
from .synthesis import ACTIVITY_MODES, GridSpec

# phase variant used when the config leaves it unset
COMMAND_PHASE = {"pinwheel": "random", "spectrum": "random"}


@dataclass(frozen=True)
class RunConfig:
    omega: float = 1.0
    lam: float | None = None
    theta: float = 0.0
    phase: str | None = None
    phase_c: float = 0.0
    seed: int = 0
    cutoff: int = 4
    amplitude: float = math.pi
    n_orient: int = 8
    nx: int = 256
    ny: int = 256
    half_width: float | None = None
    m: int = 256
    mode: str = "real"
    estimator: str = "vector_sum"
    out: str = "out"
    formats: tuple = ("csv", "pgm", "png", "svg")
    k_values: tuple = DEFAULT_FAN_K
    s_max: float = math.pi / 2
    n_steps: int = 200
    q1: float = 0.0
    q2: float = 0.0
    n_bins: int | None = None
    epsilon: float = 0.15
    window: str = "none"
    bessel: bool = False
    n_random: int = 1000
    source: str = "zfield"
    state_csv: str | None = None

    # file and JSON key -> attribute
    ALIASES = {"lambda": "lam"}

    def resolved(self, command=None):
        """Fill command-dependent defaults and validate."""
        cfg = self
        if cfg.lam is None:
            cfg = replace(cfg, lam=0.5 / cfg.omega if cfg.omega > 0 else None)
        if cfg.half_width is None:
            cfg = replace(cfg, half_width=8 * math.pi / cfg.omega if cfg.omega > 0 else None)
        if cfg.phase is None:
            cfg = replace(cfg, phase=COMMAND_PHASE.get(command, "zero"))
        cfg = replace(cfg, theta=normalize_angle(cfg.theta), formats=tuple(cfg.formats),
                      k_values=tuple(float(k) for k in cfg.k_values))
        cfg.validate()
        return cfg

    def validate(self):
        def need(cond, key, msg):
            if not cond:
                raise ConfigurationError(f"{key}: {msg}", key=key)

        need(_num(self.omega) and self.omega > 0, "omega", f"must be positive, got {self.omega!r}")
        need(_num(self.lam) and self.lam > 0, "lambda", f"must be positive, got {self.lam!r}")
        need(self.lam * self.omega <= MAX_EXPONENT, "lambda",
             f"lambda*omega = {self.lam * self.omega:g} exceeds overflow guard {MAX_EXPONENT:g}")
        need(_num(self.theta), "theta", "must be a number")
        need(self.phase in ("zero", "linear", "random"), "phase",
             f"must be zero, linear or random, got {self.phase!r}")
        need(_int(self.seed) and self.seed >= 0, "seed", "must be a non-negative integer")
        need(_int(self.cutoff) and self.cutoff >= 1, "cutoff", "must be an integer >= 1")
        need(_num(self.amplitude) and self.amplitude >= 0, "amplitude", "must be >= 0")
        need(_int(self.n_orient) and self.n_orient >= 2, "n_orient", "must be an integer >= 2")
        need(_int(self.nx) and self.nx >= 8, "nx", "must be an integer >= 8")
        need(_int(self.ny) and self.ny >= 8, "ny", "must be an integer >= 8")
        need(_num(self.half_width) and self.half_width > 0, "half_width", "must be positive")
        need(_int(self.m) and self.m >= MIN_M and self.m % 2 == 0, "m",
             f"must be an even integer >= {MIN_M}")
        need(self.mode in ACTIVITY_MODES, "mode", f"must be one of {ACTIVITY_MODES}")
        need(self.estimator in ESTIMATORS, "estimator", f"must be one of {tuple(ESTIMATORS)}")
        need(set(self.formats) <= {"csv", "pgm", "png", "svg"}, "formats",
             "allowed: csv, pgm, png, svg")
        need(len(self.k_values) > 0, "k_values", "must be non-empty")
        need(_num(self.s_max) and self.s_max > 0, "s_max", "must be positive")
        need(_int(self.n_steps) and self.n_steps >= 2, "n_steps", "must be an integer >= 2")
        need(self.n_bins is None or (_int(self.n_bins) and self.n_bins >= 4), "n_bins",
             "must be an integer >= 4")
        need(_num(self.epsilon) and 0 < self.epsilon < 1, "epsilon", "must be in (0, 1)")
        need(self.window in ("none", "hann"), "window", "must be none or hann")
        need(isinstance(self.bessel, bool), "bessel", "must be true or false")
        need(_int(self.n_random) and self.n_random >= 1, "n_random", "must be a positive integer")
        need(self.source in ("zfield", "field", "vector_sum"), "source",
             "must be zfield, field or vector_sum")
        need(self.state_csv is None or isinstance(self.state_csv, str), "state_csv",
             "must be a file path")
        self.phase_spec()
        self.grid().check_resolves(self.omega)

    def phase_spec(self):
        return PhaseSpec(self.phase, c=self.phase_c, seed=self.seed, cutoff=self.cutoff,
                         amplitude=self.amplitude)

    def state_params(self):
        return CoherentStateParams(self.omega, self.lam, self.theta, self.phase_spec(), self.m)

    def grid(self):
        return GridSpec(self.nx, self.ny, self.half_width)

    def sample_set(self):
        return OrientationSampleSet(self.n_orient)

    def base_element(self):
        return GroupElement(self.q1, self.q2, self.theta)

    def to_dict(self):
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        d["formats"] = list(self.formats)
        d["k_values"] = list(self.k_values)
        return dict(sorted(d.items()))

    def dumps(self):
        return "".join(f"{k} = {json.dumps(v)}\n" for k, v in self.to_dict().items())


def _num(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def _int(x):
    return isinstance(x, int) and not isinstance(x, bool)


FIELD_NAMES = {f.name for f in fields(RunConfig)}
KEYS = (FIELD_NAMES - {"lam"}) | {"lambda"}


def _coerce(key, value):
    attr = RunConfig.ALIASES.get(key, key)
    if attr in ("formats", "k_values"):
        if isinstance(value, str):
            value = [v.strip() for v in value.split(",") if v.strip()]
            if attr == "k_values":
                try:
                    value = [float(v) for v in value]
                except ValueError:
                    raise ConfigurationError(f"{key}: not a list of numbers", key=key) from None
        if not isinstance(value, (list, tuple)):
            raise ConfigurationError(f"{key}: expected a list", key=key)
        return attr, tuple(value)
    if attr in ("omega", "lam", "theta", "phase_c", "amplitude", "half_width", "s_max",
                "epsilon", "q1", "q2") and _int(value):
        value = float(value)
    return attr, value


def from_mapping(mapping, base=None):
    """Apply ``mapping`` over ``base``; unknown keys raise :class:`ConfigurationError`."""
    updates = {}
    for key, value in mapping.items():
        if key not in KEYS:
            raise ConfigurationError(f"unknown config key {key!r}", key=key)
        attr, value = _coerce(key, value)
        updates[attr] = value
    return replace(base or RunConfig(), **updates)


def parse_text(text, source="<config>"):
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigurationError(f"{source}:{n}: expected 'key = value'")
        key, raw = (s.strip() for s in line.split("=", 1))
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        if key in out:
            raise ConfigurationError(f"{source}:{n}: duplicate key {key!r}", key=key)
        out[key] = value
    return out


def load(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigurationError(f"cannot read config {path}: {e}", key="config") from e
    return from_mapping(parse_text(text, str(path)))
