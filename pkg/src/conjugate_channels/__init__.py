"""Channels (Markov kernels) on finite and continuous spaces, Bayesian
inversion, and executable checks for conjugate priors."""

__version__ = "0.1.0"

from .continuous import (
    FiniteObs,
    LikelihoodChannel,
    PdfChannel,
    PdfState,
    PointState,
    RandVarC,
    RealObs,
    inversion_pdf,
    pull_pdf,
    push_pdf,
    update_pdf,
    validity_pdf,
)
from .discrete import DiscreteChannel, FiniteDist, RandVarD
from .errors import (
    CarrierMismatch,
    ChannelError,
    DomainError,
    NonConvergent,
    NonFinite,
    UnknownLabel,
    ZeroMassObservation,
    ZeroValidity,
)
from .numerics import DEFAULT_CONFIG, Interval, QuadConfig, Simplex

__all__ = [
    "CarrierMismatch", "ChannelError", "DEFAULT_CONFIG", "DiscreteChannel", "DomainError",
    "FiniteDist", "FiniteObs", "Interval", "LikelihoodChannel", "NonConvergent", "NonFinite",
    "PdfChannel", "PdfState", "PointState", "QuadConfig", "RandVarC", "RandVarD", "RealObs",
    "Simplex", "UnknownLabel", "ZeroMassObservation", "ZeroValidity", "inversion_pdf",
    "pull_pdf", "push_pdf", "update_pdf", "validity_pdf",
]
