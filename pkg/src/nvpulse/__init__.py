"""Extended pi-pulse dynamical decoupling toolkit for NV-center nanoscale NMR."""

from .errors import (
    BoundViolation,
    ConfigError,
    DegenerateDenominator,
    EdgeSingularity,
    EvenHarmonic,
    InsufficientSites,
    NoRoom,
    NumericalError,
    NVPulseError,
    OutOfRange,
    Overlap,
    StepTooLarge,
    UnknownNucleus,
    ZeroFrequency,
)

__version__ = "0.1.0"
