"""Exception types shared by every module."""


class ChannelError(Exception):
    """Base class for errors raised by this package."""


class DomainError(ChannelError, ValueError):
    """A parameter lies outside the domain of the operation."""


class CarrierMismatch(ChannelError, ValueError):
    """Two objects that must live on the same carrier do not."""


class UnknownLabel(ChannelError, KeyError):
    """An outcome label is not part of the carrier."""


class NonConvergent(ChannelError, ArithmeticError):
    """Adaptive quadrature exhausted its panel budget."""


class NonFinite(ChannelError, ArithmeticError):
    """An integrand produced NaN or an infinity at a quadrature node."""


class ZeroValidity(ChannelError, ArithmeticError):
    """Conditioning on a random variable whose validity is (numerically) zero."""


class ZeroMassObservation(ZeroValidity):
    """Bayesian inversion requested at an observation of zero predicted mass."""
