//! Minimization of `‖Log(Q*Z)‖` and its variants over the unitary group: objective
//! evaluation, random search, chart descent, the diagonal reduction, Ky Fan
//! minimizer families and the rectangular example.

mod descent;
mod kyfan;
mod objective;
mod reduce;
mod search;

pub use descent::{
    chart_gradient, chart_point, coords_of_skew, local_descent, skew_basis, skew_from_coords,
    DescentResult, DescentStatus, FD_STEP,
};
pub use kyfan::{
    kyfan_minimizer_family, kyfan_profile, permuted_svd_by_log_modulus, sample_admissible_member,
    uniqueness_probe, DescentProbe, FamilyProbe, KyFanMember, UniquenessReport, MIN_LOG_SEPARATION,
};
pub use objective::{Evaluation, LogSpectra, Mode, Objective, UNITARY_TOL};
pub use reduce::{
    rectangular_counterexample_check, reduce_to_diagonal, DiagonalReduction, RectangularReport,
};
pub use search::{
    haar_trial, linear_family_counterexample_search, linear_family_value, nearest_unitary_gap,
    random_search_grid, random_search_min, structured_candidates, LinearFamilySearch,
    NearestUnitaryGap, SearchResult, SKIP_FLAG_FRACTION,
};
