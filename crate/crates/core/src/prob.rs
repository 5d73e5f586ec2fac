//! Probability framework: grids, distributions, truth (membership) functions,
//! Shannon and semantic channels, and the conversions among likelihoods, truth
//! functions, and distortion functions.
//!
//! Two kinds of probability live side by side here. A [`Dist`] is a statistical
//! probability vector over a [`Grid`]. A [`TruthFn`] is a membership function:
//! the degree, in `[0, 1]`, to which each grid point makes a label true. Its
//! prior-weighted average ([`logical_probability`]) is the logical probability
//! of the label, and conditioning a prior on a truth function
//! ([`semantic_bayes`]) yields a likelihood. [`truth_from_likelihood`] inverts
//! that step, so likelihoods and truth functions convert both ways.
//!
//! All arithmetic is done in natural log internally; reporting layers convert
//! to bits.

use crate::error::{Error, Result};

/// Truth values below this are clamped before any logarithm is taken.
pub const TRUTH_EPSILON: f64 = 1e-300;

/// A probability vector must sum to 1 within this tolerance to be accepted.
pub const DIST_TOLERANCE: f64 = 1e-9;

/// Gaps are considered uniform when they agree within this tolerance.
const SPACING_TOLERANCE: f64 = 1e-12;

/// Ordered discrete support of the instance variable: a strictly increasing
/// list of at least two real points.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    points: Vec<f64>,
}

impl Grid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 points, got {}",
                points.len()
            )));
        }
        if points.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidGrid("non-finite point".into()));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGrid(
                "points must be strictly increasing".into(),
            ));
        }
        Ok(Self { points })
    }

    /// Inclusive range `[min, max]` sampled every `step`.
    pub fn from_range(min: f64, max: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !min.is_finite() || !max.is_finite() || max <= min {
            return Err(Error::InvalidGrid(format!(
                "bad range: min={min}, max={max}, step={step}"
            )));
        }
        let n = ((max - min) / step).round() as usize;
        let points = (0..=n).map(|k| min + step * k as f64).collect();
        Self::new(points)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: at least 2 points
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn point(&self, i: usize) -> f64 {
        self.points[i]
    }

    pub fn min(&self) -> f64 {
        self.points[0]
    }

    pub fn max(&self) -> f64 {
        *self.points.last().unwrap()
    }

    /// Uniform spacing, if all gaps agree within 1e-12.
    pub fn spacing(&self) -> Option<f64> {
        let d0 = self.points[1] - self.points[0];
        let uniform = self
            .points
            .windows(2)
            .all(|w| ((w[1] - w[0]) - d0).abs() <= SPACING_TOLERANCE * d0.abs().max(1.0));
        uniform.then_some(d0)
    }

    /// Index of the grid point equal to `x` (within 1e-9), if any.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        self.points.iter().position(|&p| (p - x).abs() <= 1e-9)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.min() && x <= self.max()
    }
}

/// A probability vector aligned with a grid: nonnegative weights summing to 1.
///
/// Inputs outside the 1e-9 sum tolerance are rejected rather than silently
/// renormalized; use [`Dist::from_unnormalized`] when renormalization is the
/// intended behaviour (e.g. discretized densities).
#[derive(Debug, Clone, PartialEq)]
pub struct Dist {
    weights: Vec<f64>,
}

impl Dist {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDist("empty weight vector".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidDist(
                "weights must be finite and nonnegative".into(),
            ));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > DIST_TOLERANCE {
            return Err(Error::InvalidDist(format!("weights sum to {sum}, not 1")));
        }
        Ok(Self { weights })
    }

    /// Normalize a nonnegative weight vector to sum exactly 1.
    pub fn from_unnormalized(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDist("empty weight vector".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidDist(
                "weights must be finite and nonnegative".into(),
            ));
        }
        let sum: f64 = weights.iter().sum();
        if sum <= 0.0 {
            return Err(Error::InvalidDist("all weights are zero".into()));
        }
        Ok(Self {
            weights: weights.into_iter().map(|w| w / sum).collect(),
        })
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            weights: vec![1.0 / n as f64; n],
        }
    }

    pub fn point_mass(n: usize, index: usize) -> Self {
        let mut weights = vec![0.0; n];
        weights[index] = 1.0;
        Self { weights }
    }

    /// Pointwise normal density on the grid, truncated and renormalized.
    pub fn discretized_normal(grid: &Grid, mean: f64, sd: f64) -> Result<Self> {
        if !(sd > 0.0) || !mean.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "normal needs finite mean and sd > 0, got mean={mean}, sd={sd}"
            )));
        }
        let weights = grid
            .points()
            .iter()
            .map(|&x| {
                let z = (x - mean) / sd;
                (-0.5 * z * z).exp()
            })
            .collect();
        Self::from_unnormalized(weights)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn get(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn mean(&self, grid: &Grid) -> Result<f64> {
        check_len(self.len(), grid.len(), "distribution vs grid")?;
        Ok(self
            .weights
            .iter()
            .zip(grid.points())
            .map(|(w, x)| w * x)
            .sum())
    }

    /// Second central moment about the distribution's own mean.
    pub fn variance(&self, grid: &Grid) -> Result<f64> {
        let m = self.mean(grid)?;
        Ok(self
            .weights
            .iter()
            .zip(grid.points())
            .map(|(w, x)| w * (x - m) * (x - m))
            .sum())
    }
}

/// A truth (membership) function: one value in `[0, 1]` per grid point, with
/// at least one strictly positive value.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthFn {
    values: Vec<f64>,
}

impl TruthFn {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidTruth("empty value vector".into()));
        }
        if values
            .iter()
            .any(|v| !v.is_finite() || *v < 0.0 || *v > 1.0)
        {
            return Err(Error::InvalidTruth("values must lie in [0, 1]".into()));
        }
        if values.iter().all(|v| *v <= 0.0) {
            return Err(Error::InvalidTruth("all values are zero".into()));
        }
        Ok(Self { values })
    }

    /// The tautology: true everywhere.
    pub fn tautology(n: usize) -> Self {
        Self {
            values: vec![1.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn max_value(&self) -> f64 {
        self.values
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Lowest-index maximizer.
    pub fn argmax(&self) -> usize {
        let m = self.max_value();
        self.values.iter().position(|&v| v == m).unwrap()
    }
}

/// Parametric or tabulated membership-function family.
#[derive(Debug, Clone, PartialEq)]
pub enum TruthFamily {
    /// `exp(-(x - center)^2 / (2 sigma^2))` — peak 1 at the center.
    Gaussian { center: f64, sigma: f64 },
    /// `1 / (1 + exp(-slope (x - midpoint)))` — value 1/2 at the midpoint.
    Logistic { slope: f64, midpoint: f64 },
    /// Explicit table of values.
    Table(TruthFn),
}

impl TruthFamily {
    pub fn evaluate(&self, grid: &Grid) -> Result<TruthFn> {
        match self {
            TruthFamily::Gaussian { center, sigma } => {
                if !(*sigma > 0.0) || !center.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "gaussian needs finite center and sigma > 0, got center={center}, sigma={sigma}"
                    )));
                }
                let values = grid
                    .points()
                    .iter()
                    .map(|&x| {
                        let z = (x - center) / sigma;
                        (-0.5 * z * z).exp()
                    })
                    .collect();
                TruthFn::new(values)
            }
            TruthFamily::Logistic { slope, midpoint } => {
                if !slope.is_finite() || *slope == 0.0 || !midpoint.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "logistic needs finite nonzero slope, got slope={slope}, midpoint={midpoint}"
                    )));
                }
                let values = grid
                    .points()
                    .iter()
                    .map(|&x| 1.0 / (1.0 + (-slope * (x - midpoint)).exp()))
                    .collect();
                TruthFn::new(values)
            }
            TruthFamily::Table(t) => {
                check_len(t.len(), grid.len(), "truth table vs grid")?;
                Ok(t.clone())
            }
        }
    }
}

/// Row-stochastic transition matrix `P(y|x)`: one distribution over the label
/// set per grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct ShannonChannel {
    rows: Vec<Vec<f64>>,
    n_labels: usize,
}

impl ShannonChannel {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidDist("channel has no rows".into()));
        }
        let n_labels = rows[0].len();
        if n_labels == 0 {
            return Err(Error::InvalidDist("channel has no labels".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n_labels {
                return Err(Error::LengthMismatch(format!(
                    "channel row {i} has {} entries, expected {n_labels}",
                    row.len()
                )));
            }
            if row.iter().any(|p| !p.is_finite() || *p < 0.0) {
                return Err(Error::InvalidDist(format!(
                    "channel row {i} has negative entries"
                )));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > DIST_TOLERANCE {
                return Err(Error::InvalidDist(format!(
                    "channel row {i} sums to {sum}, not 1"
                )));
            }
        }
        Ok(Self { rows, n_labels })
    }

    pub fn n_inputs(&self) -> usize {
        self.rows.len()
    }

    pub fn n_labels(&self) -> usize {
        self.n_labels
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    pub fn prob(&self, i: usize, j: usize) -> f64 {
        self.rows[i][j]
    }

    /// Label marginal `P(y_j) = sum_i P(x_i) P(y_j|x_i)`.
    pub fn label_marginal(&self, source: &Dist) -> Result<Dist> {
        check_len(source.len(), self.n_inputs(), "source vs channel rows")?;
        let mut marginal = vec![0.0; self.n_labels];
        for (i, row) in self.rows.iter().enumerate() {
            let p = source.get(i);
            for (j, &c) in row.iter().enumerate() {
                marginal[j] += p * c;
            }
        }
        Dist::from_unnormalized(marginal)
    }
}

/// A semantic channel: one truth function per label, on a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SemanticChannel {
    truth_fns: Vec<TruthFn>,
}

impl SemanticChannel {
    pub fn new(truth_fns: Vec<TruthFn>) -> Result<Self> {
        if truth_fns.is_empty() {
            return Err(Error::InvalidTruth("semantic channel has no labels".into()));
        }
        let n = truth_fns[0].len();
        for (j, t) in truth_fns.iter().enumerate() {
            if t.len() != n {
                return Err(Error::LengthMismatch(format!(
                    "truth function {j} has {} points, expected {n}",
                    t.len()
                )));
            }
        }
        Ok(Self { truth_fns })
    }

    pub fn from_families(families: &[TruthFamily], grid: &Grid) -> Result<Self> {
        let truth_fns = families
            .iter()
            .map(|f| f.evaluate(grid))
            .collect::<Result<Vec<_>>>()?;
        Self::new(truth_fns)
    }

    /// Best-matching semantic channel for a Shannon channel: every label's
    /// truth function is the max-normalized backward transition.
    pub fn matched_to_channel(channel: &ShannonChannel, source: &Dist) -> Result<Self> {
        let truth_fns = (0..channel.n_labels())
            .map(|j| optimize_truth_from_channel(channel, source, j))
            .collect::<Result<Vec<_>>>()?;
        Self::new(truth_fns)
    }

    pub fn n_labels(&self) -> usize {
        self.truth_fns.len()
    }

    pub fn n_points(&self) -> usize {
        self.truth_fns[0].len()
    }

    pub fn truth_fn(&self, j: usize) -> &TruthFn {
        &self.truth_fns[j]
    }

    pub fn truth_fns(&self) -> &[TruthFn] {
        &self.truth_fns
    }
}

pub(crate) fn check_len(got: usize, expected: usize, what: &str) -> Result<()> {
    if got != expected {
        return Err(Error::LengthMismatch(format!(
            "{what}: {got} vs {expected}"
        )));
    }
    Ok(())
}

/// Logical probability of a label: the prior-weighted average of its truth
/// function, `sum_i P(x_i) T(x_i)`.
pub fn logical_probability(truth: &TruthFn, prior: &Dist) -> Result<f64> {
    check_len(truth.len(), prior.len(), "truth vs prior")?;
    let t: f64 = truth
        .values()
        .iter()
        .zip(prior.weights())
        .map(|(t, p)| t * p)
        .sum();
    if t <= 0.0 {
        return Err(Error::DegenerateTruth(
            "truth function is zero wherever the prior is positive".into(),
        ));
    }
    Ok(t)
}

/// Condition a prior on a truth function: `P(x_i) T(x_i) / T(theta)`.
pub fn semantic_bayes(truth: &TruthFn, prior: &Dist) -> Result<Dist> {
    let t_logical = logical_probability(truth, prior)?;
    let weights = truth
        .values()
        .iter()
        .zip(prior.weights())
        .map(|(t, p)| t * p / t_logical)
        .collect();
    Dist::from_unnormalized(weights)
}

/// Recover a truth function from a likelihood and a prior:
/// `T(x) = [L(x)/P(x)] / max_x [L(x)/P(x)]`, so the output peaks at exactly 1.
pub fn truth_from_likelihood(likelihood: &Dist, prior: &Dist) -> Result<TruthFn> {
    check_len(likelihood.len(), prior.len(), "likelihood vs prior")?;
    let mut ratios = Vec::with_capacity(likelihood.len());
    for (i, (&l, &p)) in likelihood.weights().iter().zip(prior.weights()).enumerate() {
        if l > 0.0 && p <= 0.0 {
            return Err(Error::SupportMismatch(format!(
                "likelihood positive at index {i} where the prior is zero"
            )));
        }
        ratios.push(if p > 0.0 { l / p } else { 0.0 });
    }
    let max = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(max > 0.0) {
        return Err(Error::DegenerateTruth(
            "likelihood has no positive mass".into(),
        ));
    }
    TruthFn::new(ratios.into_iter().map(|r| (r / max).min(1.0)).collect())
}

/// Truth function that makes the semantic channel match a Shannon channel on
/// one label: the backward transition normalized by its maximum over x.
pub fn optimize_truth_from_channel(
    channel: &ShannonChannel,
    source: &Dist,
    label: usize,
) -> Result<TruthFn> {
    check_len(source.len(), channel.n_inputs(), "source vs channel rows")?;
    if label >= channel.n_labels() {
        return Err(Error::InvalidParameter(format!(
            "label {label} out of range for {} labels",
            channel.n_labels()
        )));
    }
    let emitted: f64 = (0..channel.n_inputs())
        .map(|i| source.get(i) * channel.prob(i, label))
        .sum();
    if emitted <= 0.0 {
        return Err(Error::ZeroLabel(label));
    }
    let column: Vec<f64> = (0..channel.n_inputs())
        .map(|i| channel.prob(i, label))
        .collect();
    let max = column.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    TruthFn::new(column.into_iter().map(|c| (c / max).min(1.0)).collect())
}

/// Distortion of a truth function: `d(x) = ln(1/T(x))` in nats, with values
/// below [`TRUTH_EPSILON`] clamped before the log.
pub fn truth_to_distortion(truth: &TruthFn) -> Vec<f64> {
    truth
        .values()
        .iter()
        .map(|&t| -t.max(TRUTH_EPSILON).ln())
        .collect()
}

/// Inverse of [`truth_to_distortion`]: `T(x) = exp(-d(x))`.
pub fn distortion_to_truth(distortion: &[f64]) -> Result<TruthFn> {
    if distortion.iter().any(|d| d.is_nan() || *d < 0.0) {
        return Err(Error::InvalidParameter(
            "distortion values must be nonnegative".into(),
        ));
    }
    TruthFn::new(distortion.iter().map(|&d| (-d).exp()).collect())
}

/// Which two-parameter family [`fit_truth_parametric`] should fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitFamilyKind {
    Gaussian,
    Logistic,
}

/// Fit a smooth parametric truth function to a (possibly unsmooth) sample
/// distribution by maximizing `sum_i sample(x_i) ln[T(x_i)/T(theta)]` over the
/// family's two parameters. Coarse grid scan followed by local pattern-search
/// refinement until the objective improves by less than 1e-10 nats.
///
/// Returns the fitted family and the achieved objective in nats.
pub fn fit_truth_parametric(
    sample: &Dist,
    prior: &Dist,
    grid: &Grid,
    kind: FitFamilyKind,
) -> Result<(TruthFamily, f64)> {
    check_len(sample.len(), prior.len(), "sample vs prior")?;
    check_len(sample.len(), grid.len(), "sample vs grid")?;

    let objective = |family: &TruthFamily| -> f64 {
        let truth = match family.evaluate(grid) {
            Ok(t) => t,
            Err(_) => return f64::NEG_INFINITY,
        };
        let t_logical = match logical_probability(&truth, prior) {
            Ok(t) => t,
            Err(_) => return f64::NEG_INFINITY,
        };
        let ln_t_logical = t_logical.max(TRUTH_EPSILON).ln();
        sample
            .weights()
            .iter()
            .zip(truth.values())
            .filter(|(w, _)| **w > 0.0)
            .map(|(w, t)| w * (t.max(TRUTH_EPSILON).ln() - ln_t_logical))
            .sum()
    };

    let range = grid.max() - grid.min();
    let min_gap = grid
        .points()
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);

    // Coarse scan. First parameter is the location (center/midpoint), second
    // is a log-scale width (sigma) or signed slope.
    let locations: Vec<f64> = (0..=40)
        .map(|k| grid.min() + range * k as f64 / 40.0)
        .collect();
    let build = |loc: f64, scale: f64| -> TruthFamily {
        match kind {
            FitFamilyKind::Gaussian => TruthFamily::Gaussian {
                center: loc,
                sigma: scale,
            },
            FitFamilyKind::Logistic => TruthFamily::Logistic {
                slope: scale,
                midpoint: loc,
            },
        }
    };
    let scales: Vec<f64> = match kind {
        FitFamilyKind::Gaussian => {
            let lo = (0.25 * min_gap).max(1e-12);
            let hi = 10.0 * range;
            log_spaced(lo, hi, 30)
        }
        FitFamilyKind::Logistic => {
            let magnitudes = log_spaced(0.5 / range, 20.0 / min_gap, 15);
            magnitudes
                .iter()
                .map(|m| -m)
                .chain(magnitudes.iter().cloned())
                .collect()
        }
    };

    let mut best = f64::NEG_INFINITY;
    let mut best_params = (locations[0], scales[0]);
    for &loc in &locations {
        for &scale in &scales {
            let val = objective(&build(loc, scale));
            if val > best {
                best = val;
                best_params = (loc, scale);
            }
        }
    }
    if !best.is_finite() {
        return Err(Error::FitFailure(
            "objective not finite anywhere on the scan grid".into(),
        ));
    }

    // Pattern search in (location, ln |scale|) with shrinking steps.
    let sign = best_params.1.signum();
    let (mut loc, mut ln_scale) = (best_params.0, best_params.1.abs().ln());
    let mut step_loc = range / 40.0;
    let mut step_scale = 0.2;
    let mut rounds = 0;
    loop {
        rounds += 1;
        if rounds > 10_000 {
            break;
        }
        let mut improved = false;
        let mut candidate = (loc, ln_scale, best);
        for (dl, ds) in [
            (-1.0, 0.0),
            (1.0, 0.0),
            (0.0, -1.0),
            (0.0, 1.0),
            (-1.0, -1.0),
            (-1.0, 1.0),
            (1.0, -1.0),
            (1.0, 1.0),
        ] {
            let l = loc + dl * step_loc;
            let s = ln_scale + ds * step_scale;
            let val = objective(&build(l, sign * s.exp()));
            if val > candidate.2 {
                candidate = (l, s, val);
                improved = true;
            }
        }
        if improved {
            let gain = candidate.2 - best;
            (loc, ln_scale, best) = candidate;
            if gain < 1e-10 && step_loc < 1e-9 * range.max(1.0) {
                break;
            }
        } else {
            step_loc *= 0.5;
            step_scale *= 0.5;
            if step_loc < 1e-12 * range.max(1.0) && step_scale < 1e-12 {
                break;
            }
        }
    }

    let family = build(loc, sign * ln_scale.exp());
    Ok((family, best))
}

fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (ln_lo, ln_hi) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| (ln_lo + (ln_hi - ln_lo) * k as f64 / (n - 1) as f64).exp())
        .collect()
}
