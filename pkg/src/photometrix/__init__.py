"""Fisher-information engines, protocol optimization, and an exact
atom-cavity simulator for weakly invasive two-mode photonic metrology."""

__version__ = "0.1.0"

from .core import (
    JointFockPMF,
    LossChannel,
    MixedFockDecomposition,
    PhotonPMF,
    TwoModeBasis,
    apply_loss_joint,
    beamsplitter_prob,
    binomial_loss_pmf,
    mixed_qfi_oracle,
    poisson_pmf,
    spectral_qfi_oracle,
)
from .fisher import (
    Coherent,
    FisherResult,
    FockPair,
    Noon,
    SqueezedParams,
    TwinFock,
    cfi_nrm,
    cfi_nrm_g0_closed,
    cfi_nrm_gstar,
    cfi_nrm_poisson,
    cfi_nrm_poisson_gstar,
    cfi_of_L,
    cfi_squeezed,
    optimal_measurement_L,
    optimize_squeezed,
    per_test_cfi_nrm_g0,
    per_test_qfi,
    qfi_coherent,
    qfi_fock_pair,
    qfi_noon,
    qfi_noon_poisson,
    qfi_tfs_exact,
    qfi_tfs_poisson,
    qfi_upper_bound,
    squeezed_poisson_cfi,
)
from .protocol import (
    Budget,
    PrecisionResult,
    advantage_boundary,
    advantage_eta_threshold,
    advantage_ratio,
    bound_eta,
    bound_finite_N,
    bound_text,
    classical_bound,
    crossing_n_abs,
    general_boundary,
    j_max,
    j_of_t,
    n_abs,
    optimize_nu,
)
from .dicke import (
    DickeConfig,
    LadderSector,
    ac_precision,
    build_sector,
    eta_from_perror,
    evolve_sector,
    mean_photons,
    meanfield_evolve,
    p_error,
    peak_mean_photons,
    photon_pmf,
    q_linear,
    switch_time,
    switch_time_formula,
    t_meas,
    t_prep,
)
