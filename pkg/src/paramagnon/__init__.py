"""Parametrically driven cavity magnonics: stability, spin currents, enhancement."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BracketError,
    EigensolverError,
    NumericalError,
    ParamagnonError,
    ParameterError,
    SingularMatrixError,
    UnstableError,
    ZeroResponseError,
)
from .fluctuations import NoiseSpec, solve_lyapunov, total_spin_current  # noqa: E402
from .model import (  # noqa: E402
    EffectiveMatrix,
    ModelParams,
    SymmetricParams,
    build_drive_vector,
    build_full_matrix,
    build_reduced_matrix,
)
from .response import (  # noqa: E402
    enhancement_curve,
    enhancement_factor,
    solve_steady_state,
    spin_current,
)
from .stability import compute_spectrum, critical_G, is_stable, trace_boundary  # noqa: E402
from .sweep import eigenvalue_tracks, run_sweep  # noqa: E402
