//! Numerical core for semantic information analysis.
//!
//! The crate measures information relative to *meaning*: a label or estimate
//! is modelled by a truth (membership) function over a discrete support, and
//! the information it conveys is the log ratio of its truth value at the
//! outcome to its prior-weighted average. On top of that measure the crate
//! provides:
//!
//! - [`prob`] — grids, distributions, truth functions, Shannon and semantic
//!   channels, and the conversions among likelihoods, truth functions, and
//!   distortion functions;
//! - [`measures`] — semantic/Shannon KL information, semantic mutual
//!   information with entropy breakdowns, a gaussian closed form, and the
//!   softmax loss/information identity;
//! - [`rate_fidelity`] — the minimum Shannon rate compatible with a semantic
//!   information level, via alternating softmax/prior updates, plus a
//!   brute-force oracle;
//! - [`freshness`] — aging of an extrapolated position estimate: information
//!   lifespan, relative age, and update gain;
//! - [`purposive`] — goal-related information and the softmax-tilted control
//!   family trading information against efficiency.
//!
//! ## Example
//!
//! ```rust
//! use semg_core::{logical_probability, semantic_bayes, semantic_kl, shannon_kl};
//! use semg_core::{Dist, Grid, TruthFamily};
//!
//! // "the reading is near 2" on a five-point support with a uniform prior
//! let grid = Grid::from_range(0.0, 4.0, 1.0).unwrap();
//! let prior = Dist::uniform(grid.len());
//! let truth = TruthFamily::Gaussian { center: 2.0, sigma: 1.0 }
//!     .evaluate(&grid)
//!     .unwrap();
//!
//! // logical probability: how often the claim holds a priori
//! let t_logical = logical_probability(&truth, &prior).unwrap();
//! assert!(t_logical > 0.0 && t_logical < 1.0);
//!
//! // conditioning the prior on the claim gives its best-case audience
//! let posterior = semantic_bayes(&truth, &prior).unwrap();
//! let g = semantic_kl(&posterior, &truth, &prior).unwrap();
//! let r = shannon_kl(&posterior, &prior).unwrap();
//! assert!((g - r).abs() < 1e-12); // the posterior spends exactly what it gains
//!
//! // a mismatched outcome carries less semantic information
//! let offset = Dist::new(vec![0.0, 0.0, 0.0, 0.5, 0.5]).unwrap();
//! assert!(semantic_kl(&offset, &truth, &prior).unwrap() < g);
//! ```

// `!(x > 0.0)` deliberately rejects NaN along with nonpositive values, and
// indexed loops mirror the double-subscript sums they implement.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod freshness;
pub mod measures;
pub mod prob;
pub mod purposive;
pub mod rate_fidelity;

pub use error::{Error, Result};
pub use freshness::{FreshnessPoint, GpsParams, GpsScenario, PredictionVariant};
pub use measures::{
    gaussian_semantic_info, mutual_info_pair, semantic_info_point, semantic_kl, shannon_kl,
    softmax_semantic_info, InfoBreakdown, SimilaritySet, SoftmaxInfo,
};
pub use prob::{
    distortion_to_truth, fit_truth_parametric, logical_probability, optimize_truth_from_channel,
    semantic_bayes, truth_from_likelihood, truth_to_distortion, Dist, FitFamilyKind, Grid,
    SemanticChannel, ShannonChannel, TruthFamily, TruthFn, DIST_TOLERANCE, TRUTH_EPSILON,
};
pub use purposive::{
    control_distribution, control_point, normal_approx_point, normal_approx_spec,
    point_mass_comparison, purposive_increment, purposive_info_likelihood, purposive_info_truth,
    ControlPoint, ControlProblem, NormalApproxSpec, PointMassComparison,
};
pub use rate_fidelity::{
    brute_force_rg, channel_step, info_ratio_matrix, mmi_solve, rg_curve, MmiOptions, RGCurve,
    RGPoint,
};
