"""Exception types raised by the toolkit."""


class NVPulseError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(NVPulseError):
    pass


class NumericalError(NVPulseError):
    """Raised when a computation cannot produce a physically valid result."""


class ZeroFrequency(NumericalError):
    pass


class InsufficientSites(NVPulseError):
    pass


class EvenHarmonic(NVPulseError):
    pass


class OutOfRange(NVPulseError):
    pass


class NoRoom(NVPulseError):
    pass


class DegenerateDenominator(NumericalError):
    pass


class BoundViolation(NumericalError):
    def __init__(self, overshoot, message=None):
        self.overshoot = overshoot
        super().__init__(message or f"max|F| exceeds 1 by {overshoot:.3e}")


class EdgeSingularity(NumericalError):
    pass


class Overlap(NVPulseError):
    pass


class UnknownNucleus(NVPulseError, KeyError):
    pass


class StepTooLarge(NumericalError):
    pass
