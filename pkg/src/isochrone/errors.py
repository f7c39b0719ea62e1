"""Exception types shared across the toolkit."""


class IsochroneError(Exception):
    """Base class for all toolkit errors."""


class NonHomogeneousError(IsochroneError):
    """A polynomial required to be homogeneous (and nonzero) is not."""


class EmptyRadialError(IsochroneError):
    """The radial coefficient sequence is empty."""


class ZeroRadialError(IsochroneError):
    """The radial factor R is identically zero."""


class NonzeroMeanError(IsochroneError):
    """Antiderivative requested for a trig polynomial with nonzero mean."""


class IdenticallyZeroError(IsochroneError):
    """A trig polynomial required to be nonzero is identically zero."""


class NotACenterError(IsochroneError):
    """Classification requested for a system that fails the center condition."""


class OutsideValidIntervalError(IsochroneError):
    """Evaluation point lies outside the quadrature's root-free interval."""


class BlowUpError(IsochroneError):
    """A trajectory exceeded the blow-up ceiling before completing its span."""

    def __init__(self, theta_escape: float):
        self.theta_escape = theta_escape
        super().__init__(f"trajectory escaped at theta = {theta_escape:.6f}")


class ZeroTopPartError(IsochroneError):
    """The system's top homogeneous part vanishes (H is identically zero)."""


class ZeroInputError(IsochroneError):
    """A structural check received the zero polynomial."""


class IdentityViolationError(IsochroneError):
    """An identity that must hold exactly failed (indicates an arithmetic bug)."""


class SpecParseError(IsochroneError):
    """A system specification file or value could not be parsed."""
