//! Magnitude-only sparse beam alignment for mmWave phased arrays.
//!
//! A phased-array receiver with N antennas observes a K-sparse direction
//! spectrum x (K ≪ N physical paths). Each measurement frame applies one
//! unit-modulus weight vector a and returns only the magnitude |a·F'x|,
//! because an unknown carrier-frequency offset scrambles the phase. This
//! crate implements:
//!
//! * multi-armed beam hashing — B beams, each splitting the array into R
//!   segments pointed at different directions, so every frame observes a
//!   bin of directions at full per-arm gain ([`beams`]);
//! * pseudo-random generalized permutations of the direction domain,
//!   realized purely as phase-shifter rearrangements ([`permute`]);
//! * score-based detection, energy estimation and voting recovery across
//!   L independent hashings, one- and two-sided ([`recover`]);
//! * exhaustive-search and 802.11ad (SLS/MID/BC) baselines with a
//!   quasi-omnidirectional pattern model ([`baselines`]);
//! * the 802.11ad A-BFT/beacon-interval latency model ([`mac_latency`]);
//! * slow, independent reference implementations used to cross-check the
//!   fast paths ([`oracle`]);
//! * Monte-Carlo scenario drivers and CSV output ([`experiment`]).
//!
//! Conventions: the forward DFT is F[j,k] = ω^{−jk}/√n with ω = e^{2πi/n},
//! its inverse F' = F* is symmetric, so a·F'_p equals the p-th entry of
//! F'a and beam responses are computed with one inverse FFT per pattern.

pub mod baselines;
pub mod beams;
pub mod experiment;
pub mod mac_latency;
pub mod measure;
pub mod oracle;
pub mod permute;
pub mod recover;
pub mod spectrum;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("infeasible hash geometry: {0}")]
    InfeasibleGeometry(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use baselines::{
    achieved_snr_db, beam_response, exhaustive_search, matched_power, quasi_omni, snr_loss,
    standard_11ad, AlignmentResult, OmniBase, QuasiOmniModel,
};
pub use beams::{
    boxcar, build_hash, build_hash_theory, coverage, feasible_r, multi_arm_pattern, single_beam,
    BoxcarFilter, HashFunction, HashOptions, PhasePattern,
};
pub use experiment::{run, run_agile, detection_rates, verify, ExperimentConfig, ExperimentRecord, Scenario};
pub use mac_latency::{
    alignment_delay, client_training_frames, scheme_delay_ms, scheme_frame_budget, MacTimingConfig,
    Scheme,
};
pub use measure::{measure_hash, measure_one, measure_two_sided, MeasurementSet};
pub use oracle::{dense_power_map, oracle_recover, slow_beam_power, DensePowerMap};
pub use permute::{apply_to_pattern, permute_spectrum, sample_permutation, Permutation};
pub use recover::{
    auto_threshold, detect_hard, estimate_total_energy, fine_grid_score, recover_top_k,
    recover_two_sided, score, select_peaks, soft_vote, DetectionConfig, ScoreTable, VoteMode,
};
pub use spectrum::{
    angle_to_frac_index, frac_index_to_angle, make_channel, ChannelInstance, ChannelSide,
    DirectionSpectrum, FourierContext, PathSpec,
};
