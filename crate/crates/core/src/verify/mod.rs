//! Verification sweeps and their reports.

pub mod derivatives;
pub mod explore;
pub mod proof;
pub mod report;
pub mod sweeps;

pub use derivatives::{derivative_consistency, DEFAULT_REL_TOL};
pub use explore::{explore_theorem, Exploration, HypothesisReport};
pub use proof::{
    alpha_ratio_onset, check_g_negative, check_samples, eq2_check, eq2_sides, eq3_sides,
    eq4_threshold, eq5_check, eq6_sides, eq7_sides, proof_samples, Eq4Threshold, GNegative,
    SampleError, PROOF_START,
};
pub use report::{InequalityReport, ParamsInfo, Sample, Tally, DEFAULT_TIE_BAND};
pub use sweeps::{
    verify_classic, verify_corollary, verify_dusart, verify_table_integrity, ClassicBound,
    DusartSide,
};
