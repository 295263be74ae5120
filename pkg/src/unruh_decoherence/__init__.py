"""Inertial detection of quantum light emitted by a uniformly accelerated source.

A source on a uniformly accelerated trajectory imprints a coherent displacement,
a single-mode squeeze or a two-mode squeeze on a localized Rindler wave packet.
An inertial homodyne detector sees that state through the Unruh modes, which
adds frequency-dependent thermal noise.  This package gives the closed-form
detected statistics, the squeezing/entanglement boundaries, the purifying
left-wedge displacement, and an independent discretized Gaussian oracle.
"""

from .errors import (
    ConsistencyError,
    DomainError,
    IntegrationError,
    SolverError,
    UnruhError,
    ValidationError,
)
from .modes import (
    AccelerationFrame,
    GaussianPacket,
    ModeIntegrals,
    TabulatedPacket,
    TopHatPacket,
    mode_integrals,
    narrowband_integrals,
    packet_from_dict,
    r_omega,
    scaled_frequency_for_ic,
    unruh_factors,
)
from .purify import (
    PurificationScenario,
    lm_factors,
    optimal_z_narrowband,
    purified_variance,
    solve_z,
    solve_z_integrals,
)
from .single_mode import (
    CRITICAL_ASYMPTOTE,
    Region,
    SqueezeScenario,
    classify,
    coherent_quadrature,
    critical_frequency,
    critical_ic,
    critical_scaled_frequency,
    purity_product,
    squeezer_variance,
    vmax_vmin,
)
from .two_mode import (
    CovMat4,
    covariance_matrix,
    log_negativity,
    nu_minus,
    symplectic_spectrum,
)
from .unruh import bogoliubov_a, bogoliubov_b, e_quantities

__version__ = "0.1.0"
