"""Stability of catenoids and catenoid cousins: profiles, Jacobi fields, spectra."""

from .errors import (
    Divergent,
    IdenticalCurves,
    LindelofError,
    NoSignChange,
    NumericalError,
    OutOfDomain,
    RecoveryMismatch,
    StepUnderflow,
    TolExceeded,
    UnsupportedFamily,
)
from .profiles import FamilySpec, build_profile, embed, heights, scale_profile
from .jacobi import combined_field, jacobi_pair, tail_integral, wronskian
from .stability import DomainSpec, StabilityReport, classify, conjugate_point
from .spectral import assemble, lambda1

__version__ = "0.1.0"

__all__ = [
    "Divergent",
    "DomainSpec",
    "FamilySpec",
    "IdenticalCurves",
    "LindelofError",
    "NoSignChange",
    "NumericalError",
    "OutOfDomain",
    "RecoveryMismatch",
    "StabilityReport",
    "StepUnderflow",
    "TolExceeded",
    "UnsupportedFamily",
    "assemble",
    "build_profile",
    "classify",
    "combined_field",
    "conjugate_point",
    "embed",
    "heights",
    "jacobi_pair",
    "lambda1",
    "scale_profile",
    "tail_integral",
    "wronskian",
]
