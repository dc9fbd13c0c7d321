"""Bell nonlocality of a two-mode squeezed vacuum decaying in thermal baths."""
from ._accel import HAVE_NUMBA, backend
from .bell import BellResult, OptimizerConfig, bell_function, bell_m, bell_m_dominates, grid_oracle, max_bell
from .phase_space import (
    BathSpec,
    ChannelTime,
    GaussianCoeffs,
    SqueezeSpec,
    asymptotic_coeffs,
    coeffs_at,
    evolve_coeffs,
    initial_wigner,
    thermal_wigner,
    wigner_value,
)

__version__ = "0.1.0"
