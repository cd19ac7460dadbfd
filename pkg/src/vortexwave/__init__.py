"""Scattering of a particle off an impenetrable magnetic vortex in Euclidean or conical space.

Classical ray scattering, exact partial-wave series and the quasiclassical
(short-wavelength) decomposition, plus a CLI that tabulates and verifies them.
"""

from vortexwave.errors import (
    ConfigError,
    DomainError,
    KinematicsError,
    RangeError,
    SingularityError,
    TruncationError,
    UnsupportedRegimeError,
    VortexwaveError,
)
from vortexwave.geometry import ConeGeometry, Region, TubeSpec
from vortexwave.exact import TruncationPolicy, VortexConfig, WaveState

__version__ = "0.1.0"

__all__ = [
    "ConeGeometry",
    "ConfigError",
    "DomainError",
    "KinematicsError",
    "RangeError",
    "Region",
    "SingularityError",
    "TruncationError",
    "TruncationPolicy",
    "TubeSpec",
    "UnsupportedRegimeError",
    "VortexConfig",
    "VortexwaveError",
    "WaveState",
    "__version__",
]
