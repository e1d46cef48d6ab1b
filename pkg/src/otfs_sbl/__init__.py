"""Sparse Bayesian channel estimation for OTFS systems with Gaussian-mixture priors.

A NumPy/SciPy library covering the full pipeline: DD/TF/time transforms,
clustered channel generation, time-domain pilot dictionaries, the
GMM-SBL estimator with classical baselines, Oracle-MMSE and BCRLB
references, LMMSE detection, and a deterministic Monte Carlo harness.
"""

from .bounds import (
    DiagonalGmm,
    FimEstimate,
    bcrlb_closed_form,
    bcrlb_gmm_mc,
    prior_fim_mc,
    theorem1_bound_check,
)
from .channel import (
    ChannelRealization,
    GmmSpec,
    PathSpec,
    apply_channel,
    default_mixture,
    gmm_case,
    load_dd_profile,
    profile_to_taps,
    sample_channel,
    shift_diagonals,
    td_channel_matrix,
)
from .detection import (
    lmmse_detect,
    lmmse_detect_td,
    nmse,
    qpsk_demod,
    qpsk_mod,
    reconstruct_hdd,
    ser,
)
from .estimators import (
    ESTIMATOR_NAMES,
    EstimateResult,
    GmmSblConfig,
    GmmSblState,
    e_step,
    focuss,
    gmm_sbl_fit,
    lasso,
    m_step,
    omp,
    oracle_mmse,
    run_estimator,
    sbl_fit,
)
from .frame import (
    FrameConfig,
    add_cp,
    dd_effective_channel,
    demodulate,
    isfft,
    modulate,
    noise_cov_dd,
    remove_cp,
    sfft,
)
from .harness import ResultRow, RunConfig, emit_csv, load_config, parse_results_csv, run_trial, sweep
from .linalg import log_det_hpd, solve_hpd
from .pilots import (
    Dictionary,
    PilotSpec,
    build_dictionary,
    forward_model,
    generate_pilot,
    pilot_overhead,
    sparse_truth,
    true_support,
)

__version__ = "0.1.0"
