"""Pinwheel orientation maps as minimal-uncertainty coherent states on SE(2)."""

from .errors import ConfigurationError
from .operators import CircleFunction, OperatorContext
from .se2 import GroupElement, PlanarPoint
from .states import CoherentStateParams, PhaseSpec, coherent_state, ground_state
from .synthesis import ComplexField, GridSpec, synthesize

__all__ = [
    "CircleFunction",
    "CoherentStateParams",
    "ComplexField",
    "ConfigurationError",
    "GridSpec",
    "GroupElement",
    "OperatorContext",
    "PhaseSpec",
    "PlanarPoint",
    "coherent_state",
    "ground_state",
    "synthesize",
]

__version__ = "0.1.0"
