"""Radiation-pressure cat states and their phase-space macroscopicity.

Evolve a cavity-mechanics system under cubic (end-mirror) or quartic
(membrane) coupling, post-select the mechanics by homodyning the cavity, and
quantify the resulting superposition with the phase-space measure I bounded
by the mean phonon number M.
"""

from .numerics import (
    HERMITE_PLAIN_MAX,
    IntegrationResult,
    MaxDepthExceeded,
    NonDecayingIntegrand,
    QuadratureSpec,
    hermite,
    hermite_function,
    hermite_function_table,
    hermite_log,
    integrate2d,
    log_factorial,
)
from .states import (
    CoherentSuperposition,
    FockVector,
    SqueezedSuperposition,
    TruncationInsufficient,
    ZeroNorm,
    coherent_displaced_overlap,
    coherent_fock_expansion,
    coherent_overlap,
    displace,
    fock_expansion,
    gram_matrix,
    make_cat,
    mean_phonon,
    normalize,
    position_amplitude,
    squeezed_fock_expansion,
    squeezed_overlap,
)
from .cubic import (
    CubicParams,
    branch_amplitude,
    condition_joint_on_x,
    conditional_state,
    default_photon_truncation,
    joint_state_fock,
    kerr_phase,
)
from .quartic import (
    QuarticParams,
    SqueezeBranch,
    conditional_state_quartic,
    photon_coefficient,
    squeeze_degree,
    two_component_fidelity,
)
from .macroscopicity import (
    CharFunction,
    GaussianState,
    InvalidCovariance,
    MacroResult,
    cat_equivalent_amplitude,
    char_function,
    eq9_closed_form,
    measure_I_coherent_exact,
    measure_I_gaussian,
    measure_I_quadrature,
    occupation_from_temperature,
    temperature_from_occupation,
    thermal_average_char,
    thermal_mean_phonon,
)
from .wigner import WignerGrid, wigner

__version__ = "0.1.0"
