"""Transition rates of uniformly accelerated single and entangled two-atom
systems coupled to a massless scalar field, in free space, near a single
mirror, and inside a cavity, from both the inertial and the coaccelerated
viewpoint.
"""

from .backend import BACKEND_NAME
from .errors import (
    FduError,
    InternalError,
    InvalidParameterError,
    OracleConvergenceError,
    SeriesTruncationError,
)
from .rates import (
    AtomSpec,
    Cavity,
    Coaccelerated,
    Direction,
    FreeSpace,
    Inertial,
    PairConfig,
    RateBreakdown,
    SingleBoundary,
    pair_rate,
    rate_per_unit,
    rate_ratio,
    single_rate,
)
from .series import (
    SeriesControl,
    SeriesValue,
    f_sum,
    g_kernel,
    h_sum,
    m_sum,
    n_sum,
    planck_occupation,
)

__version__ = "0.1.0"

__all__ = [
    "AtomSpec",
    "BACKEND_NAME",
    "Cavity",
    "Coaccelerated",
    "Direction",
    "FduError",
    "FreeSpace",
    "Inertial",
    "InternalError",
    "InvalidParameterError",
    "OracleConvergenceError",
    "PairConfig",
    "RateBreakdown",
    "SeriesControl",
    "SeriesTruncationError",
    "SeriesValue",
    "SingleBoundary",
    "f_sum",
    "g_kernel",
    "h_sum",
    "m_sum",
    "n_sum",
    "pair_rate",
    "planck_occupation",
    "rate_per_unit",
    "rate_ratio",
    "single_rate",
    "__version__",
]
