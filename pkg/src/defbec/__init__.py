"""Scattered-light spectrum of a number-conserving (deformed) Bose condensate."""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    DefbecError,
    DomainError,
    NoConvergence,
    SingularSolve,
    TrajectoryOverflow,
    TruncationError,
    UnstableSteadyState,
)
from .params import DerivedParams, ModelParams, derive_params  # noqa: F401
from .spectrum import (  # noqa: F401
    SpectrumTable,
    Variant,
    deviation_curve,
    spectrum_at,
    spectrum_surface,
    spectrum_values,
    stationary_occupation,
    xi,
)
from .steady import (  # noqa: F401
    FluctuationCoeffs,
    SteadyState,
    deformed_residual,
    drift_eigenvalues,
    fluctuation_coeffs,
    mean_field_relax,
    solve_deformed_steady_state,
    undeformed_steady_state,
)
