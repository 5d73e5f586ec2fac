//! The information rate-fidelity curve: for a fixed source and semantic
//! channel, the minimum Shannon mutual information compatible with a given
//! level of semantic mutual information.
//!
//! The solution is parameterized by a trade-off exponent `s` (the slope
//! `dR/dG`): each label's share of the channel is tilted by the s-th power of
//! the normalized truth value and renormalized (a softmax step), and the label
//! prior is alternately refit to the induced marginal, driving the mutual
//! information down. `s = 0` yields a constant channel (R = 0), `s = 1` the
//! matched point where R = G, and large `s` pushes G toward its supremum.
//! Negative `s` traces the left branch of the bowl, where the channel is
//! actively anti-informative.
//!
//! [`brute_force_rg`] is an exhaustive-search oracle over small channels used
//! to validate the iterative solver.

use crate::error::{Error, Result};
use crate::prob::{
    check_len, logical_probability, Dist, SemanticChannel, ShannonChannel, TRUTH_EPSILON,
};

const LN_2: f64 = std::f64::consts::LN_2;

/// One solved point of the rate-fidelity trade-off.
#[derive(Debug, Clone)]
pub struct RGPoint {
    /// Trade-off parameter (slope dR/dG at this point).
    pub s: f64,
    /// Shannon mutual information at the optimum, bits.
    pub r_bits: f64,
    /// Semantic mutual information at the optimum, bits.
    pub g_bits: f64,
    /// Information efficiency G/R; absent when R = 0.
    pub efficiency: Option<f64>,
    /// The optimizing channel.
    pub channel: ShannonChannel,
    /// The optimizing label prior.
    pub label_prior: Dist,
    pub iterations: usize,
    pub converged: bool,
}

/// A sweep of [`RGPoint`]s ordered by `s`.
#[derive(Debug, Clone)]
pub struct RGCurve {
    points: Vec<RGPoint>,
}

impl RGCurve {
    pub fn points(&self) -> &[RGPoint] {
        &self.points
    }

    /// Points on one sign branch, ordered by `s`. Zero belongs to the
    /// nonnegative branch.
    pub fn branch(&self, positive: bool) -> Vec<&RGPoint> {
        self.points
            .iter()
            .filter(|p| if positive { p.s >= 0.0 } else { p.s < 0.0 })
            .collect()
    }
}

/// Stopping rule for [`mmi_solve`]: iterate until the change of R relative to
/// `max(|R|, 1)` drops below `tolerance` and the label prior is stationary,
/// or `max_iterations` is reached.
#[derive(Debug, Clone, Copy)]
pub struct MmiOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for MmiOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 100_000,
        }
    }
}

/// Normalized truth-value matrix `m[i][j] = T(theta_j|x_i) / T(theta_j)`,
/// with truth values clamped at [`TRUTH_EPSILON`].
pub fn info_ratio_matrix(sem: &SemanticChannel, source: &Dist) -> Result<Vec<Vec<f64>>> {
    check_len(sem.n_points(), source.len(), "semantic channel vs source")?;
    let logical: Vec<f64> = (0..sem.n_labels())
        .map(|j| logical_probability(sem.truth_fn(j), source))
        .collect::<Result<Vec<_>>>()?;
    Ok((0..source.len())
        .map(|i| {
            (0..sem.n_labels())
                .map(|j| sem.truth_fn(j).get(i).max(TRUTH_EPSILON) / logical[j])
                .collect()
        })
        .collect())
}

/// One softmax channel update: `P(y_j|x_i) = P(y_j) m_ij^s / lambda_i` with
/// `lambda_i = sum_j P(y_j) m_ij^s`.
///
/// Returns the updated channel and `ln lambda_i` (computed in log space, so
/// large `|s|` cannot overflow).
pub fn channel_step(
    s: f64,
    label_prior: &Dist,
    m: &[Vec<f64>],
) -> Result<(ShannonChannel, Vec<f64>)> {
    if m.is_empty() {
        return Err(Error::InvalidParameter("empty ratio matrix".into()));
    }
    let k = label_prior.len();
    let mut rows = Vec::with_capacity(m.len());
    let mut log_lambdas = Vec::with_capacity(m.len());
    for (i, m_row) in m.iter().enumerate() {
        check_len(m_row.len(), k, "ratio matrix columns vs label prior")?;
        let log_terms: Vec<f64> = (0..k)
            .map(|j| {
                let prior = label_prior.get(j);
                if prior > 0.0 && m_row[j] > 0.0 {
                    prior.ln() + s * m_row[j].ln()
                } else {
                    f64::NEG_INFINITY
                }
            })
            .collect();
        let max = log_terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            return Err(Error::NumericalDegeneracy(format!(
                "row {i}: every label has zero tilted weight"
            )));
        }
        let log_lambda = max + log_terms.iter().map(|&t| (t - max).exp()).sum::<f64>().ln();
        let mut row: Vec<f64> = log_terms.iter().map(|&t| (t - log_lambda).exp()).collect();
        let row_sum: f64 = row.iter().sum();
        for p in &mut row {
            *p /= row_sum;
        }
        rows.push(row);
        log_lambdas.push(log_lambda);
    }
    Ok((ShannonChannel::new(rows)?, log_lambdas))
}

/// Minimum-mutual-information point for one trade-off parameter `s`.
///
/// Alternates [`channel_step`] with the label-prior refit
/// `P(y_j) <- sum_i P(x_i) P(y_j|x_i)` until R stabilizes. With a single
/// label the prior refit is vacuous and the optimum is the tilted posterior
/// itself, available in closed form; R is then the KL information of that
/// posterior against the source.
pub fn mmi_solve(
    s: f64,
    source: &Dist,
    sem: &SemanticChannel,
    init_prior: Option<&Dist>,
    opts: &MmiOptions,
) -> Result<RGPoint> {
    if !s.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "s must be finite, got {s}"
        )));
    }
    let m = info_ratio_matrix(sem, source)?;
    let k = sem.n_labels();

    if k == 1 {
        return single_label_point(s, source, &m);
    }

    let mut prior = match init_prior {
        Some(p) => {
            check_len(p.len(), k, "initial label prior vs labels")?;
            if p.weights().iter().any(|w| *w <= 0.0) {
                return Err(Error::InvalidParameter(
                    "initial label prior must be strictly positive".into(),
                ));
            }
            p.clone()
        }
        None => Dist::uniform(k),
    };

    let mut previous_r = f64::INFINITY;
    let mut converged = false;
    let mut iterations = 0;
    let mut channel;
    let mut log_lambdas;
    loop {
        iterations += 1;
        let step = channel_step(s, &prior, &m)?;
        channel = step.0;
        log_lambdas = step.1;

        let (g_nats, _) = averages(source, &channel, &m);
        let penalty: f64 = source
            .weights()
            .iter()
            .zip(&log_lambdas)
            .map(|(p, ll)| p * ll)
            .sum();
        let r_nats = s * g_nats - penalty;

        let delta = (r_nats - previous_r).abs();
        previous_r = r_nats;
        let refit = channel.label_marginal(source)?;
        // The prior must be stationary too: near a label collapse the
        // objective can stall while the prior is still drifting, and the
        // reported R would then disagree with the channel's actual mutual
        // information.
        let prior_gap = refit
            .weights()
            .iter()
            .zip(prior.weights())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        prior = refit;

        if delta <= opts.tolerance * r_nats.abs().max(1.0) && prior_gap <= 1e-7 {
            converged = true;
            break;
        }
        if iterations >= opts.max_iterations {
            break;
        }
    }

    // One final pass with the refit prior so the reported triple
    // (channel, prior, R) is self-consistent.
    let (channel, log_lambdas) = channel_step(s, &prior, &m)?;
    let (g_nats, _) = averages(source, &channel, &m);
    let penalty: f64 = source
        .weights()
        .iter()
        .zip(&log_lambdas)
        .map(|(p, ll)| p * ll)
        .sum();
    let r_nats = (s * g_nats - penalty).max(0.0);

    let r_bits = r_nats / LN_2;
    let g_bits = g_nats / LN_2;
    Ok(RGPoint {
        s,
        r_bits,
        g_bits,
        efficiency: efficiency(g_bits, r_bits),
        channel,
        label_prior: prior,
        iterations,
        converged,
    })
}

fn single_label_point(s: f64, source: &Dist, m: &[Vec<f64>]) -> Result<RGPoint> {
    // Tilted posterior q_i = P(x_i) m_i^s / lambda, in log space.
    let log_terms: Vec<f64> = source
        .weights()
        .iter()
        .zip(m.iter())
        .map(|(&p, row)| {
            if p > 0.0 {
                p.ln() + s * row[0].ln()
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect();
    let max = log_terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Err(Error::NumericalDegeneracy(
            "source has no positive mass".into(),
        ));
    }
    let log_lambda = max + log_terms.iter().map(|&t| (t - max).exp()).sum::<f64>().ln();
    let posterior: Vec<f64> = log_terms.iter().map(|&t| (t - log_lambda).exp()).collect();
    let posterior = Dist::from_unnormalized(posterior)?;

    let g_nats: f64 = posterior
        .weights()
        .iter()
        .zip(m.iter())
        .filter(|(q, _)| **q > 0.0)
        .map(|(&q, row)| q * row[0].ln())
        .sum();
    let r_nats = (s * g_nats - log_lambda).max(0.0);

    let rows = vec![vec![1.0]; source.len()];
    let r_bits = r_nats / LN_2;
    let g_bits = g_nats / LN_2;
    Ok(RGPoint {
        s,
        r_bits,
        g_bits,
        efficiency: efficiency(g_bits, r_bits),
        channel: ShannonChannel::new(rows)?,
        label_prior: Dist::uniform(1),
        iterations: 1,
        converged: true,
    })
}

fn efficiency(g_bits: f64, r_bits: f64) -> Option<f64> {
    (r_bits > 1e-12).then(|| g_bits / r_bits)
}

/// Joint averages under `P(x) P(y|x)`: semantic information (nats) and
/// Shannon mutual information (nats).
fn averages(source: &Dist, channel: &ShannonChannel, m: &[Vec<f64>]) -> (f64, f64) {
    let k = channel.n_labels();
    let marginal: Vec<f64> = (0..k)
        .map(|j| {
            (0..source.len())
                .map(|i| source.get(i) * channel.prob(i, j))
                .sum()
        })
        .collect();
    let mut g = 0.0;
    let mut mi = 0.0;
    for i in 0..source.len() {
        let p = source.get(i);
        if p <= 0.0 {
            continue;
        }
        for j in 0..k {
            let joint = p * channel.prob(i, j);
            if joint > 0.0 {
                g += joint * m[i][j].ln();
                mi += joint * (channel.prob(i, j).ln() - marginal[j].ln());
            }
        }
    }
    (g, mi)
}

/// Sweep of [`mmi_solve`] over a list of trade-off parameters, returned in
/// ascending `s` order.
pub fn rg_curve(
    source: &Dist,
    sem: &SemanticChannel,
    s_values: &[f64],
    opts: &MmiOptions,
) -> Result<RGCurve> {
    if s_values.is_empty() {
        return Err(Error::InvalidParameter("no s values supplied".into()));
    }
    let mut s_sorted = s_values.to_vec();
    s_sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite s values"));
    let points = s_sorted
        .into_iter()
        .map(|s| mmi_solve(s, source, sem, None, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(RGCurve { points })
}

/// Exhaustive-search oracle: minimum Shannon mutual information (bits) among
/// row-stochastic channels, enumerated at `resolution`, whose semantic mutual
/// information is at least `g_target_bits` minus half a resolution step.
///
/// Tractable only for tiny instances; callers must keep the source at no more
/// than 3 points and the semantic channel at no more than 2 labels.
pub fn brute_force_rg(
    source: &Dist,
    sem: &SemanticChannel,
    g_target_bits: f64,
    resolution: f64,
) -> Result<f64> {
    let n = source.len();
    let k = sem.n_labels();
    if n > 3 || k > 2 {
        return Err(Error::InvalidParameter(format!(
            "oracle limited to 3 source points and 2 labels, got {n} x {k}"
        )));
    }
    if !(resolution > 0.0 && resolution <= 0.5) {
        return Err(Error::InvalidParameter(format!(
            "resolution must be in (0, 0.5], got {resolution}"
        )));
    }
    let m = info_ratio_matrix(sem, source)?;
    // I_ij in bits
    let info: Vec<Vec<f64>> = m
        .iter()
        .map(|row| row.iter().map(|v| v.ln() / LN_2).collect())
        .collect();
    let slack = g_target_bits - 0.5 * resolution;

    if k == 1 {
        // only one channel exists; G is fixed and R = 0
        let g: f64 = source
            .weights()
            .iter()
            .zip(&info)
            .map(|(p, row)| p * row[0])
            .sum();
        return if g >= slack {
            Ok(0.0)
        } else {
            Err(Error::Infeasible(format!(
                "target {g_target_bits} bits exceeds the achievable {g} bits"
            )))
        };
    }

    let steps = (1.0 / resolution).round() as usize;
    let levels: Vec<f64> = (0..=steps).map(|t| t as f64 / steps as f64).collect();

    let mut best_r = f64::INFINITY;
    let mut max_g = f64::NEG_INFINITY;
    let mut assignment = vec![0usize; n];
    loop {
        // channel row i is [a_i, 1 - a_i]
        let mut g = 0.0;
        let mut q0 = 0.0;
        for i in 0..n {
            let a = levels[assignment[i]];
            let p = source.get(i);
            g += p * (a * info[i][0] + (1.0 - a) * info[i][1]);
            q0 += p * a;
        }
        if g > max_g {
            max_g = g;
        }
        if g >= slack {
            let mut mi = 0.0;
            if q0 > 0.0 && q0 < 1.0 {
                for i in 0..n {
                    let a = levels[assignment[i]];
                    let p = source.get(i);
                    if a > 0.0 {
                        mi += p * a * (a / q0).log2();
                    }
                    if a < 1.0 {
                        mi += p * (1.0 - a) * ((1.0 - a) / (1.0 - q0)).log2();
                    }
                }
            }
            if mi < best_r {
                best_r = mi;
            }
        }

        // advance the odometer
        let mut pos = 0;
        loop {
            if pos == n {
                break;
            }
            assignment[pos] += 1;
            if assignment[pos] <= steps {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
        if pos == n {
            break;
        }
    }

    if best_r.is_finite() {
        Ok(best_r.max(0.0))
    } else {
        Err(Error::Infeasible(format!(
            "target {g_target_bits} bits exceeds the achievable {max_g} bits at this resolution"
        )))
    }
}
