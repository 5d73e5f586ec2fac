//! Goal-related information for constraint control: how much an achieved
//! distribution tells us relative to a goal, where the goal is encoded either
//! as a target likelihood or as a truth function (a fuzzy constraint on the
//! outcome).
//!
//! For a truth-function goal, the family of softmax-tilted distributions
//! `P(x) T(x)^s / Z(s)` traces the trade-off between the information carried
//! about the goal (G) and the Shannon information spent moving the population
//! away from its prior (R). At `s = 1` the tilt equals the Bayes-conditioned
//! prior and G = R exactly; for larger `s` G saturates while R keeps growing,
//! so the information efficiency G/R falls.

use crate::error::{Error, Result};
use crate::measures::{semantic_kl, shannon_kl};
use crate::prob::{
    check_len, logical_probability, semantic_bayes, Dist, Grid, TruthFn, TRUTH_EPSILON,
};

const LN_2: f64 = std::f64::consts::LN_2;

/// A constraint-control instance: a prior population distribution on a grid
/// and a truth-function goal.
#[derive(Debug, Clone)]
pub struct ControlProblem {
    grid: Grid,
    prior: Dist,
    goal: TruthFn,
    goal_logical: f64,
}

impl ControlProblem {
    pub fn new(grid: Grid, prior: Dist, goal: TruthFn) -> Result<Self> {
        check_len(prior.len(), grid.len(), "prior vs grid")?;
        check_len(goal.len(), grid.len(), "goal vs grid")?;
        if prior.weights().iter().any(|w| *w <= 0.0) {
            return Err(Error::InvalidDist(
                "control prior must be positive on every grid point".into(),
            ));
        }
        let goal_logical = logical_probability(&goal, &prior)?;
        if goal_logical >= 1.0 {
            return Err(Error::DegenerateTruth(
                "goal is a tautology under the prior".into(),
            ));
        }
        Ok(Self {
            grid,
            prior,
            goal,
            goal_logical,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn prior(&self) -> &Dist {
        &self.prior
    }

    pub fn goal(&self) -> &TruthFn {
        &self.goal
    }

    /// Logical probability of the goal under the prior.
    pub fn goal_logical_prob(&self) -> f64 {
        self.goal_logical
    }

    /// `log2(1 / T(theta))`: the ceiling that G and the average distortion
    /// share for every control distribution.
    pub fn max_info_bits(&self) -> f64 {
        -self.goal_logical.log2()
    }
}

/// One solved control point: the tilted distribution and its information
/// accounting.
#[derive(Debug, Clone)]
pub struct ControlPoint {
    pub s: f64,
    /// Shannon information of the control: KL(result || prior), bits.
    pub r_bits: f64,
    /// Goal-related semantic information of the result, bits.
    pub g_bits: f64,
    /// Average distortion `-sum result(x) log2 T(x)`, bits.
    pub dbar_bits: f64,
    /// G/R; absent when R = 0.
    pub efficiency: Option<f64>,
    /// The achieved distribution.
    pub result: Dist,
}

/// Mean and standard deviation of the normal surrogate used by
/// [`normal_approx_point`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalApproxSpec {
    pub mean: f64,
    pub sd: f64,
}

/// Result of replacing the control distribution by a single point mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointMassComparison {
    pub semantic_bits: f64,
    pub shannon_bits: f64,
    pub efficiency: f64,
}

/// Goal-related information with a likelihood goal:
/// `sum_i goal(x_i) log2[actual(x_i)/prior(x_i)]`.
///
/// The weights come from the goal; the ratio from the achieved distribution.
/// Maximal (equal to `shannon_kl(goal, prior)`) exactly when the achieved
/// distribution equals the goal.
pub fn purposive_info_likelihood(goal: &Dist, actual: &Dist, prior: &Dist) -> Result<f64> {
    check_len(goal.len(), actual.len(), "goal vs actual")?;
    check_len(goal.len(), prior.len(), "goal vs prior")?;
    let mut nats = 0.0;
    for (i, &g) in goal.weights().iter().enumerate() {
        if g <= 0.0 {
            continue;
        }
        let p = prior.get(i);
        if p <= 0.0 {
            return Err(Error::SupportMismatch(format!(
                "goal positive at index {i} where the prior is zero"
            )));
        }
        let a = actual.get(i).max(TRUTH_EPSILON);
        nats += g * (a.ln() - p.ln());
    }
    Ok(nats / LN_2)
}

/// Goal-related information with a truth-function goal:
/// `sum_i actual(x_i) log2[T(x_i)/T(theta)]` — the semantic KL information of
/// the achieved distribution against the goal.
pub fn purposive_info_truth(actual: &Dist, goal: &TruthFn, prior: &Dist) -> Result<f64> {
    semantic_kl(actual, goal, prior)
}

/// Information increment of a control action:
/// `sum_i [actual(x_i) - prior(x_i)] log2[P(x_i|theta)/P(x_i)]`. Zero when no
/// control is applied (`actual = prior`).
pub fn purposive_increment(actual: &Dist, goal: &TruthFn, prior: &Dist) -> Result<f64> {
    check_len(actual.len(), prior.len(), "actual vs prior")?;
    check_len(goal.len(), prior.len(), "goal vs prior")?;
    let conditioned = semantic_bayes(goal, prior)?;
    let mut nats = 0.0;
    for i in 0..actual.len() {
        let diff = actual.get(i) - prior.get(i);
        if diff != 0.0 {
            let c = conditioned.get(i).max(TRUTH_EPSILON);
            let p = prior.get(i).max(TRUTH_EPSILON);
            nats += diff * (c.ln() - p.ln());
        }
    }
    Ok(nats / LN_2)
}

/// The softmax-tilted control distribution
/// `P(x_i) T(x_i)^s / sum_k P(x_k) T(x_k)^s`, computed in log space.
pub fn control_distribution(problem: &ControlProblem, s: f64) -> Result<Dist> {
    if !s.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "s must be finite, got {s}"
        )));
    }
    let log_weights: Vec<f64> = problem
        .prior
        .weights()
        .iter()
        .zip(problem.goal.values())
        .map(|(&p, &t)| p.ln() + s * t.max(TRUTH_EPSILON).ln())
        .collect();
    let max = log_weights
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Err(Error::NumericalDegeneracy(
            "all tilted weights vanished".into(),
        ));
    }
    let weights: Vec<f64> = log_weights.iter().map(|&w| (w - max).exp()).collect();
    Dist::from_unnormalized(weights)
}

/// Information accounting of the tilted distribution at one `s`: R, G, the
/// average distortion, and the efficiency.
///
/// The conservation identity `G + dbar = log2(1/T(theta))` is verified before
/// returning.
pub fn control_point(problem: &ControlProblem, s: f64) -> Result<ControlPoint> {
    let result = control_distribution(problem, s)?;
    point_for_distribution(problem, s, result)
}

/// Moments of the tilted distribution, used to build its normal surrogate.
pub fn normal_approx_spec(problem: &ControlProblem, s: f64) -> Result<NormalApproxSpec> {
    let result = control_distribution(problem, s)?;
    let mean = result.mean(&problem.grid)?;
    let variance = result.variance(&problem.grid)?;
    if !(variance > 0.0) {
        return Err(Error::NumericalDegeneracy(
            "tilted distribution has zero variance".into(),
        ));
    }
    Ok(NormalApproxSpec {
        mean,
        sd: variance.sqrt(),
    })
}

/// Same accounting as [`control_point`], but for the discretized normal
/// surrogate that matches the tilted distribution's mean and variance.
pub fn normal_approx_point(problem: &ControlProblem, s: f64) -> Result<ControlPoint> {
    let spec = normal_approx_spec(problem, s)?;
    let surrogate = Dist::discretized_normal(&problem.grid, spec.mean, spec.sd)?;
    point_for_distribution(problem, s, surrogate)
}

fn point_for_distribution(problem: &ControlProblem, s: f64, result: Dist) -> Result<ControlPoint> {
    let r_bits = shannon_kl(&result, &problem.prior)?;
    let g_bits = purposive_info_truth(&result, &problem.goal, &problem.prior)?;
    let dbar_bits: f64 = -result
        .weights()
        .iter()
        .zip(problem.goal.values())
        .filter(|(w, _)| **w > 0.0)
        .map(|(w, t)| w * t.max(TRUTH_EPSILON).ln())
        .sum::<f64>()
        / LN_2;

    let ceiling = problem.max_info_bits();
    let drift = (g_bits + dbar_bits - ceiling).abs();
    if drift > 1e-9 {
        return Err(Error::NumericalDegeneracy(format!(
            "conservation violated: G + dbar departs from {ceiling} by {drift}"
        )));
    }

    let efficiency = (r_bits > 1e-12).then(|| g_bits / r_bits);
    Ok(ControlPoint {
        s,
        r_bits,
        g_bits,
        dbar_bits,
        efficiency,
        result,
    })
}

/// Replace the control distribution with all mass on `x_star` and report the
/// same accounting; the efficiency collapses because the point mass pays
/// `-log2 P(x_star)` Shannon bits.
pub fn point_mass_comparison(problem: &ControlProblem, x_star: f64) -> Result<PointMassComparison> {
    let index = problem
        .grid
        .index_of(x_star)
        .ok_or_else(|| Error::OutOfRange(format!("{x_star} is not a grid point")))?;
    let semantic_bits =
        (problem.goal.get(index).max(TRUTH_EPSILON).ln() - problem.goal_logical.ln()) / LN_2;
    let shannon_bits = -problem.prior.get(index).log2();
    Ok(PointMassComparison {
        semantic_bits,
        shannon_bits,
        efficiency: semantic_bits / shannon_bits,
    })
}
