//! Equidistribution probes, growth fits, norm-constant lower estimates and
//! Monte Carlo checks of probability bounds.

mod counting;
mod deviation;
mod dyadic;
mod mesh;
mod profiles;
mod pseudo;
mod relation_bound;
mod verdict;
mod weyl;
mod zalcwasser;

pub use counting::{counting_band_report, BlockAudit, CountingReport, CountingRow};
pub use deviation::{
    check_deviation_bound, check_grid_deviation_bound, check_weyl_deviation, MAX_DEVIATION_GRID, MIN_DEVIATION_TRIALS,
};
pub use dyadic::{
    check_dyadic_block_bound, interval_psi, interval_psi_bound, relation_length_cap, DyadicBoundParams,
    MAX_DYADIC_BLOCK,
};
pub use mesh::{mesh_exponent_fit, powers_of_two, two_power_pairs, MeshFit, MESH_RESIDUAL_LIMIT};
pub use profiles::{
    lambda_q_profile, rider_ratio, uc_lower_bound, LambdaQProfile, LambdaQRow, RiderEstimate, UcEstimate, Witness,
    RIDER_SIGN_SAMPLES,
};
pub use pseudo::{pseudo_complement_trial, PseudoComplementTrial};
pub use relation_bound::{
    check_relation_bound, feasible_c, relation_tail_sum, FeasibleConstant, RelationBoundParams, RelationConstant,
    DEFAULT_TAIL_CAP, SERIES_TERMS,
};
pub use verdict::{frequency, BoundCheckResult, Verdict};
pub use weyl::{
    average_at, golden_angles, last_octave_max, weighted_average, weyl_profile, Angle, AngleProfile, WeylClass,
    WeylPoint, WeylProfile,
};
pub use zalcwasser::{quadratic_weyl_sum, zalcwasser_fit, ZalcwasserRow};
