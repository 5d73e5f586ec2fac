//! Scalar information quantities: the pointwise semantic information measure,
//! semantic and Shannon KL information, semantic mutual information with its
//! entropy breakdown, the gaussian-channel closed form, and the softmax
//! (InfoNCE-style) loss/information identity.
//!
//! All public results are in bits except the softmax quantities, which are
//! natural-log objects and stay in nats.

use crate::error::{Error, Result};
use crate::prob::{
    check_len, logical_probability, Dist, Grid, SemanticChannel, ShannonChannel, TruthFn,
    TRUTH_EPSILON,
};

const LN_2: f64 = std::f64::consts::LN_2;

/// Mutual-information breakdown for a (Shannon channel, semantic channel)
/// pair over a common source.
#[derive(Debug, Clone, PartialEq)]
pub struct InfoBreakdown {
    /// Semantic mutual information in bits.
    pub semantic_mutual_bits: f64,
    /// Generalized entropy `H(Y_theta) = -sum_j P(y_j) log T(theta_j)`.
    pub generalized_entropy_bits: f64,
    /// Fuzzy entropy `H(Y_theta|X) = -sum_ij P(x_i, y_j) log T(theta_j|x_i)`.
    pub fuzzy_entropy_bits: f64,
    /// Ordinary Shannon mutual information in bits.
    pub shannon_mutual_bits: f64,
}

/// A softmax comparison instance: similarity scores, a temperature, and the
/// index of the positive candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilaritySet {
    similarities: Vec<f64>,
    temperature: f64,
    positive_index: usize,
}

impl SimilaritySet {
    pub fn new(similarities: Vec<f64>, temperature: f64, positive_index: usize) -> Result<Self> {
        if similarities.is_empty() {
            return Err(Error::InvalidParameter("no similarities".into()));
        }
        if similarities.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidParameter("non-finite similarity".into()));
        }
        if !(temperature > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "temperature must be positive, got {temperature}"
            )));
        }
        if positive_index >= similarities.len() {
            return Err(Error::InvalidParameter(format!(
                "positive index {positive_index} out of range for {} candidates",
                similarities.len()
            )));
        }
        Ok(Self {
            similarities,
            temperature,
            positive_index,
        })
    }

    pub fn similarities(&self) -> &[f64] {
        &self.similarities
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn positive_index(&self) -> usize {
        self.positive_index
    }
}

/// Softmax loss and the semantic information it carries, both in nats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SoftmaxInfo {
    pub loss_nats: f64,
    pub info_nats: f64,
}

/// Pointwise semantic information `log2(T(x) / T(theta))` in bits. Negative
/// when the hypothesis is less true at `x` than on average: a wrong
/// hypothesis conveys negative information.
pub fn semantic_info_point(truth_at_x: f64, truth_logical: f64) -> f64 {
    let t = truth_at_x.max(TRUTH_EPSILON);
    let tl = truth_logical.max(TRUTH_EPSILON);
    (t.ln() - tl.ln()) / LN_2
}

/// Semantic KL information `sum_i actual(x_i) log2[T(x_i)/T(theta)]` in bits.
///
/// The weights come from `actual` while the logical probability is taken
/// under `prior`; terms with zero weight contribute nothing.
pub fn semantic_kl(actual: &Dist, truth: &TruthFn, prior: &Dist) -> Result<f64> {
    check_len(actual.len(), truth.len(), "actual vs truth")?;
    let t_logical = logical_probability(truth, prior)?;
    let ln_t_logical = t_logical.ln();
    let nats: f64 = actual
        .weights()
        .iter()
        .zip(truth.values())
        .filter(|(w, _)| **w > 0.0)
        .map(|(w, t)| w * (t.max(TRUTH_EPSILON).ln() - ln_t_logical))
        .sum();
    Ok(nats / LN_2)
}

/// Shannon KL information `sum_i actual(x_i) log2[actual(x_i)/prior(x_i)]`
/// in bits; nonnegative.
pub fn shannon_kl(actual: &Dist, prior: &Dist) -> Result<f64> {
    check_len(actual.len(), prior.len(), "actual vs prior")?;
    let mut nats = 0.0;
    for (i, (&a, &p)) in actual.weights().iter().zip(prior.weights()).enumerate() {
        if a > 0.0 {
            if p <= 0.0 {
                return Err(Error::SupportMismatch(format!(
                    "actual positive at index {i} where the prior is zero"
                )));
            }
            nats += a * (a.ln() - p.ln());
        }
    }
    Ok((nats / LN_2).max(0.0))
}

/// Semantic and Shannon mutual information for a source, a Shannon channel,
/// and a semantic channel sharing one label set.
pub fn mutual_info_pair(
    source: &Dist,
    channel: &ShannonChannel,
    sem: &SemanticChannel,
) -> Result<InfoBreakdown> {
    check_len(source.len(), channel.n_inputs(), "source vs channel rows")?;
    check_len(sem.n_points(), source.len(), "semantic channel vs source")?;
    check_len(
        sem.n_labels(),
        channel.n_labels(),
        "semantic vs Shannon labels",
    )?;

    let n = source.len();
    let k = channel.n_labels();

    let label_marginal: Vec<f64> = (0..k)
        .map(|j| (0..n).map(|i| source.get(i) * channel.prob(i, j)).sum())
        .collect();
    let logical: Vec<f64> = (0..k)
        .map(|j| logical_probability(sem.truth_fn(j), source))
        .collect::<Result<Vec<_>>>()?;

    let mut generalized_entropy = 0.0; // H(Y_theta), nats
    for j in 0..k {
        if label_marginal[j] > 0.0 {
            generalized_entropy -= label_marginal[j] * logical[j].ln();
        }
    }

    let mut fuzzy_entropy = 0.0; // H(Y_theta|X), nats
    let mut shannon = 0.0; // I(X;Y), nats
    for i in 0..n {
        let p = source.get(i);
        if p <= 0.0 {
            continue;
        }
        for j in 0..k {
            let joint = p * channel.prob(i, j);
            if joint > 0.0 {
                fuzzy_entropy -= joint * sem.truth_fn(j).get(i).max(TRUTH_EPSILON).ln();
                shannon += joint * (channel.prob(i, j).ln() - label_marginal[j].ln());
            }
        }
    }

    Ok(InfoBreakdown {
        semantic_mutual_bits: (generalized_entropy - fuzzy_entropy) / LN_2,
        generalized_entropy_bits: generalized_entropy / LN_2,
        fuzzy_entropy_bits: fuzzy_entropy / LN_2,
        shannon_mutual_bits: (shannon / LN_2).max(0.0),
    })
}

/// Closed form for a gaussian semantic channel: `I_max - dbar`, where
/// `I_max = H(Y_theta)` and `dbar` is the average quadratic distortion
/// `sum_ij P(x_i, y_j) (x_i - x_j)^2 / (2 sigma_j^2)` converted to bits.
///
/// Independent code path from [`mutual_info_pair`]; on a gaussian channel the
/// two must agree to 1e-9 bits.
pub fn gaussian_semantic_info(
    grid: &Grid,
    source: &Dist,
    joint: &[Vec<f64>],
    centers: &[f64],
    sigmas: &[f64],
) -> Result<f64> {
    check_len(source.len(), grid.len(), "source vs grid")?;
    check_len(centers.len(), sigmas.len(), "centers vs sigmas")?;
    check_len(joint.len(), grid.len(), "joint rows vs grid")?;
    let k = centers.len();
    if sigmas.iter().any(|s| !(*s > 0.0)) {
        return Err(Error::InvalidParameter(
            "all sigmas must be positive".into(),
        ));
    }
    let mut total = 0.0;
    for (i, row) in joint.iter().enumerate() {
        check_len(row.len(), k, "joint columns vs labels")?;
        if row.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidDist(format!(
                "joint row {i} has negative mass"
            )));
        }
        total += row.iter().sum::<f64>();
    }
    if (total - 1.0).abs() > crate::prob::DIST_TOLERANCE {
        return Err(Error::InvalidDist(format!("joint sums to {total}, not 1")));
    }

    let mut i_max = 0.0; // H(Y_theta), nats
    for j in 0..k {
        let marginal: f64 = joint.iter().map(|row| row[j]).sum();
        if marginal <= 0.0 {
            continue;
        }
        let logical: f64 = grid
            .points()
            .iter()
            .zip(source.weights())
            .map(|(&x, &p)| {
                let z = (x - centers[j]) / sigmas[j];
                p * (-0.5 * z * z).exp()
            })
            .sum();
        if logical <= 0.0 {
            return Err(Error::DegenerateTruth(format!(
                "gaussian label {j} has zero logical probability"
            )));
        }
        i_max -= marginal * logical.ln();
    }

    let mut dbar = 0.0; // nats
    for (i, row) in joint.iter().enumerate() {
        let x = grid.point(i);
        for j in 0..k {
            if row[j] > 0.0 {
                let dev = x - centers[j];
                dbar += row[j] * dev * dev / (2.0 * sigmas[j] * sigmas[j]);
            }
        }
    }

    Ok((i_max - dbar) / LN_2)
}

/// Softmax classification loss and the semantic information carried by the
/// positive candidate, in nats. The two are computed by different algebraic
/// routes and satisfy `info = -loss` exactly up to roundoff.
pub fn softmax_semantic_info(set: &SimilaritySet) -> SoftmaxInfo {
    let tau = set.temperature();
    let scores = set.similarities();
    let positive = set.positive_index();

    // Loss route: log-sum-exp anchored at the positive score.
    let s_pos = scores[positive];
    let loss_nats = scores
        .iter()
        .map(|&s| ((s - s_pos) / tau).exp())
        .sum::<f64>()
        .ln();

    // Distortion route: d_i = (m - s_i) / tau with m the maximum score, so
    // every exponent is clamp-free in (0, 1].
    let m = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let distortions: Vec<f64> = scores.iter().map(|&s| (m - s) / tau).collect();
    let partition: f64 = distortions.iter().map(|&d| (-d).exp()).sum();
    let info_nats = -distortions[positive] - partition.ln();

    SoftmaxInfo {
        loss_nats,
        info_nats,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::TruthFamily;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn pointwise_measure() {
        assert_close(semantic_info_point(0.3, 0.3), 0.0, 1e-15);
        assert_close(semantic_info_point(1.0, 0.25), 2.0, 1e-12);
        assert_close(semantic_info_point(0.1, 0.2), -1.0, 1e-12);
    }

    #[test]
    fn semantic_kl_tautology_is_zero() {
        let p = Dist::new(vec![0.2, 0.3, 0.5]).unwrap();
        let actual = Dist::new(vec![0.6, 0.2, 0.2]).unwrap();
        let taut = TruthFn::tautology(3);
        assert_close(semantic_kl(&actual, &taut, &p).unwrap(), 0.0, 1e-15);
    }

    #[test]
    fn shannon_kl_basics() {
        let p = Dist::new(vec![0.25, 0.75]).unwrap();
        assert_close(shannon_kl(&p, &p).unwrap(), 0.0, 1e-15);

        let q = Dist::new(vec![0.75, 0.25]).unwrap();
        let expected = 0.75 * (3f64).log2() + 0.25 * (1.0f64 / 3.0).log2();
        assert_close(shannon_kl(&q, &p).unwrap(), expected, 1e-12);

        let hole = Dist::new(vec![1.0, 0.0]).unwrap();
        let wide = Dist::new(vec![0.5, 0.5]).unwrap();
        assert!(shannon_kl(&wide, &hole).is_err());
    }

    #[test]
    fn matched_bsc_info_breakdown() {
        let source = Dist::uniform(2);
        let channel = ShannonChannel::new(vec![vec![0.9, 0.1], vec![0.1, 0.9]]).unwrap();
        let sem = SemanticChannel::matched_to_channel(&channel, &source).unwrap();
        let info = mutual_info_pair(&source, &channel, &sem).unwrap();

        // matched semantic channel reaches the Shannon mutual information
        assert_close(info.semantic_mutual_bits, info.shannon_mutual_bits, 1e-9);

        // 1 - H_b(0.1)
        let hb = -(0.1f64.log2() * 0.1 + 0.9f64.log2() * 0.9);
        assert_close(info.shannon_mutual_bits, 1.0 - hb, 1e-12);
        assert_close(info.semantic_mutual_bits, 0.531004, 5e-7);

        // identity SMI = H(Y_theta) - H(Y_theta|X)
        assert_close(
            info.semantic_mutual_bits,
            info.generalized_entropy_bits - info.fuzzy_entropy_bits,
            1e-12,
        );
    }

    #[test]
    fn breaking_the_channel_match_loses_information() {
        // Equality with the Shannon mutual information requires every truth
        // function to be proportional to its backward transition; bending
        // one of them opens a strict gap.
        let source = Dist::new(vec![0.4, 0.6]).unwrap();
        let channel = ShannonChannel::new(vec![vec![0.8, 0.2], vec![0.3, 0.7]]).unwrap();
        let matched = SemanticChannel::matched_to_channel(&channel, &source).unwrap();

        let mut bent = matched.truth_fns().to_vec();
        let values: Vec<f64> = bent[0].values().iter().map(|v| v * v).collect();
        bent[0] = TruthFn::new(values).unwrap();
        let bent = SemanticChannel::new(bent).unwrap();

        let info = mutual_info_pair(&source, &channel, &bent).unwrap();
        assert!(
            info.semantic_mutual_bits < info.shannon_mutual_bits - 1e-6,
            "expected a strict gap, got {} vs {}",
            info.semantic_mutual_bits,
            info.shannon_mutual_bits
        );
    }

    #[test]
    fn tautological_semantic_channel_has_zero_entropies() {
        let source = Dist::uniform(2);
        let channel = ShannonChannel::new(vec![vec![0.7, 0.3], vec![0.4, 0.6]]).unwrap();
        let sem = SemanticChannel::new(vec![TruthFn::tautology(2), TruthFn::tautology(2)]).unwrap();
        let info = mutual_info_pair(&source, &channel, &sem).unwrap();
        assert_close(info.semantic_mutual_bits, 0.0, 1e-15);
        assert_close(info.generalized_entropy_bits, 0.0, 1e-15);
        assert_close(info.fuzzy_entropy_bits, 0.0, 1e-15);
    }

    #[test]
    fn gaussian_closed_form_matches_generic_path() {
        let grid = Grid::from_range(-10.0, 10.0, 0.5).unwrap();
        let source = Dist::discretized_normal(&grid, 0.0, 3.0).unwrap();
        let centers = [-2.0, 1.5];
        let sigmas = [2.0, 1.0];
        let families: Vec<TruthFamily> = centers
            .iter()
            .zip(&sigmas)
            .map(|(&c, &s)| TruthFamily::Gaussian {
                center: c,
                sigma: s,
            })
            .collect();
        let sem = SemanticChannel::from_families(&families, &grid).unwrap();
        let rows: Vec<Vec<f64>> = (0..grid.len())
            .map(|i| {
                let a = 0.3 + 0.4 * (i as f64 / grid.len() as f64);
                vec![a, 1.0 - a]
            })
            .collect();
        let channel = ShannonChannel::new(rows.clone()).unwrap();

        let joint: Vec<Vec<f64>> = (0..grid.len())
            .map(|i| vec![source.get(i) * rows[i][0], source.get(i) * rows[i][1]])
            .collect();
        let closed = gaussian_semantic_info(&grid, &source, &joint, &centers, &sigmas).unwrap();
        let generic = mutual_info_pair(&source, &channel, &sem).unwrap();
        assert_close(closed, generic.semantic_mutual_bits, 1e-9);
    }

    #[test]
    fn gaussian_closed_form_no_distortion_and_half_nat() {
        // all mass at the center: result is exactly I_max
        let grid = Grid::new(vec![0.0, 1.0, 2.0]).unwrap();
        let source = Dist::uniform(3);
        let joint = vec![vec![0.0], vec![1.0], vec![0.0]];
        let result = gaussian_semantic_info(&grid, &source, &joint, &[1.0], &[0.5]).unwrap();
        let logical: f64 = grid
            .points()
            .iter()
            .map(|&x| (1.0 / 3.0) * (-0.5 * ((x - 1.0) / 0.5).powi(2)).exp())
            .sum();
        assert_close(result, -logical.log2(), 1e-12);

        // sample spread with sd = channel sigma: dbar is half a nat
        let fine = Grid::from_range(-40.0, 40.0, 0.1).unwrap();
        let source = Dist::uniform(fine.len());
        let spread = Dist::discretized_normal(&fine, 0.0, 5.0).unwrap();
        let joint: Vec<Vec<f64>> = spread.weights().iter().map(|&w| vec![w]).collect();
        let result = gaussian_semantic_info(&fine, &source, &joint, &[0.0], &[5.0]).unwrap();
        let logical: f64 = fine
            .points()
            .iter()
            .zip(source.weights())
            .map(|(&x, &p)| p * (-0.5 * (x / 5.0) * (x / 5.0)).exp())
            .sum();
        let i_max = -logical.log2();
        assert_close(result, i_max - 0.5 / std::f64::consts::LN_2, 1e-3);
    }

    #[test]
    fn softmax_uniform_and_dominant() {
        let k_plus_1 = 8;
        let set = SimilaritySet::new(vec![0.7; k_plus_1], 0.2, 3).unwrap();
        let out = softmax_semantic_info(&set);
        assert_close(out.loss_nats, (k_plus_1 as f64).ln(), 1e-12);
        assert_close(out.info_nats, -(k_plus_1 as f64).ln(), 1e-12);

        // dominant positive: s_+ - s_i = 50 tau
        let tau = 0.3;
        let mut sims = vec![0.0; 5];
        sims[2] = 50.0 * tau;
        let set = SimilaritySet::new(sims, tau, 2).unwrap();
        let out = softmax_semantic_info(&set);
        assert!(out.loss_nats < 1e-9, "loss {}", out.loss_nats);
        assert!(out.loss_nats >= 0.0);
    }
}
