"""Quantum vortex rings in a torus pipe.

Filament geometry and local-induction dynamics, the quantized circulation
spectrum with its time-scale hierarchy, and vortex creation ensembles.
"""

from .errors import (
    ConfigError,
    ConsistencyError,
    DomainError,
    NumericalError,
    RangeError,
    ResourceError,
    SizeError,
    VortexError,
)
from .filament import FluidDomain, RingState, TangentField, canonical_momentum, reconstruct_curve
from .dynamics import EvolutionConfig, ModeSpectrum, integrate_lie, kelvin_evolve, kelvin_rate
from .spectrum import Spectrum, SpectrumBounds, circulation, enumerate_spectrum, gamma_min, n_max
from .hierarchy import box_counting_dimension, t_max, time_scale
from .turbulence import CoherentEnsemble, ModeRegister, fock_oracle_evolve, sample_ensemble

__version__ = "0.1.0"

__all__ = [
    "CoherentEnsemble",
    "ConfigError",
    "ConsistencyError",
    "DomainError",
    "EvolutionConfig",
    "FluidDomain",
    "ModeRegister",
    "ModeSpectrum",
    "NumericalError",
    "RangeError",
    "ResourceError",
    "RingState",
    "SizeError",
    "Spectrum",
    "SpectrumBounds",
    "TangentField",
    "VortexError",
    "box_counting_dimension",
    "canonical_momentum",
    "circulation",
    "enumerate_spectrum",
    "fock_oracle_evolve",
    "gamma_min",
    "integrate_lie",
    "kelvin_evolve",
    "kelvin_rate",
    "n_max",
    "reconstruct_curve",
    "sample_ensemble",
    "t_max",
    "time_scale",
]
