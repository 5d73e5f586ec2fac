//! Acceptance suite: one test per shipping criterion, each printing a single
//! PASS/FAIL line (visible with `--nocapture`). Every tolerance is pinned
//! here, in code.
//!
//! Criteria 1 and 2 carry a documented defect in their reference data: the
//! matched-point column of the control table (its "s = 1" cells) can only be
//! reproduced at s = 1.1, where this implementation matches every cell of
//! that column to print precision. At s = 1 exactly, the same instance that
//! reproduces all other reference values yields R = G = 2.1302 bits, not
//! 2.19. Those cells are asserted as stated and fail honestly.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use semg_core::*;

const LN_2: f64 = std::f64::consts::LN_2;

/// Collects per-cell failures so one criterion reports all of them at once.
struct Criterion {
    name: &'static str,
    failures: Vec<String>,
}

impl Criterion {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            failures: Vec::new(),
        }
    }

    fn close(&mut self, what: &str, got: f64, expected: f64, tol: f64) {
        if !((got - expected).abs() <= tol) {
            self.failures.push(format!(
                "{what}: got {got:.6}, expected {expected} +/- {tol}"
            ));
        }
    }

    fn require(&mut self, what: &str, ok: bool) {
        if !ok {
            self.failures.push(what.to_string());
        }
    }

    fn finish(self) {
        if self.failures.is_empty() {
            println!("acceptance {}: PASS", self.name);
        } else {
            println!(
                "acceptance {}: FAIL\n  {}",
                self.name,
                self.failures.join("\n  ")
            );
            panic!("{} failed: {:?}", self.name, self.failures);
        }
    }
}

/// Ages 0..110, normal(50, 10) prior, logistic goal rising at 60.
fn control_demo() -> ControlProblem {
    let grid = Grid::from_range(0.0, 110.0, 1.0).unwrap();
    let prior = Dist::discretized_normal(&grid, 50.0, 10.0).unwrap();
    let goal = TruthFamily::Logistic {
        slope: 0.8,
        midpoint: 60.0,
    }
    .evaluate(&grid)
    .unwrap();
    ControlProblem::new(grid, prior, goal).unwrap()
}

/// Two overlapping gaussian truth functions on a two-point grid.
fn binary_demo() -> (Dist, SemanticChannel) {
    let grid = Grid::new(vec![0.0, 1.0]).unwrap();
    let sem = SemanticChannel::from_families(
        &[
            TruthFamily::Gaussian {
                center: 0.0,
                sigma: 1.0,
            },
            TruthFamily::Gaussian {
                center: 1.0,
                sigma: 1.0,
            },
        ],
        &grid,
    )
    .unwrap();
    (Dist::uniform(2), sem)
}

#[test]
fn criterion_01_control_table_softmax() {
    let mut c = Criterion::new("1 control table, softmax family");
    let problem = control_demo();
    let expected = [
        (1.0, 2.19, 2.19, 1.00),
        (20.0, 3.36, 2.58, 0.77),
        (40.0, 3.58, 2.59, 0.72),
    ];
    for (s, r_exp, g_exp, eff_exp) in expected {
        let point = control_point(&problem, s).unwrap();
        c.close(&format!("R(s={s})"), point.r_bits, r_exp, 0.03);
        c.close(&format!("G(s={s})"), point.g_bits, g_exp, 0.03);
        c.close(
            &format!("efficiency(s={s})"),
            point.efficiency.unwrap(),
            eff_exp,
            0.02,
        );
    }
    c.finish();
}

#[test]
fn criterion_02_control_table_normal_family() {
    let mut c = Criterion::new("2 control table, normal family");
    let problem = control_demo();
    let expected = [
        (1.0, 2.08, 1.99, 0.95),
        (20.0, 3.13, 2.52, 0.80),
        (40.0, 3.38, 2.55, 0.76),
    ];
    for (s, r_exp, g_exp, eff_exp) in expected {
        let point = normal_approx_point(&problem, s).unwrap();
        c.close(&format!("R1(s={s})"), point.r_bits, r_exp, 0.04);
        c.close(&format!("G1(s={s})"), point.g_bits, g_exp, 0.04);
        c.close(
            &format!("efficiency1(s={s})"),
            point.efficiency.unwrap(),
            eff_exp,
            0.03,
        );
    }
    c.finish();
}

#[test]
fn criterion_03_point_mass_comparison() {
    let mut c = Criterion::new("3 point-mass comparison");
    let problem = control_demo();
    let pm = point_mass_comparison(&problem, 80.0).unwrap();
    c.close("semantic", pm.semantic_bits, 2.60, 0.02);
    c.close("shannon", pm.shannon_bits, 11.14, 0.02);
    c.close("efficiency", pm.efficiency, 0.23, 0.01);
    c.finish();
}

#[test]
fn criterion_04_conservation_identity() {
    let mut c = Criterion::new("4 conservation G + dbar");
    let problem = control_demo();
    let ceiling = problem.max_info_bits();
    for k in 0..50 {
        let s = 100.0 * k as f64 / 49.0;
        let point = control_point(&problem, s).unwrap();
        c.close(
            &format!("G + dbar at s={s:.2}"),
            point.g_bits + point.dbar_bits,
            ceiling,
            1e-9,
        );
    }
    c.finish();
}

#[test]
fn criterion_05_gps_lifespan_and_variants() {
    let mut c = Criterion::new("5 prediction lifespan and improved variants");
    let inaccurate = GpsScenario::table_variant(PredictionVariant::Inaccurate);
    let accurate = GpsScenario::table_variant(PredictionVariant::MoreAccurate);
    let fuzzier = GpsScenario::table_variant(PredictionVariant::Fuzzier);
    let dt_max = 178.0;

    let lifespan = inaccurate.lifespan(dt_max, 1.0).unwrap();
    c.require("inaccurate variant has a zero crossing", lifespan.is_some());
    if let Some(t) = lifespan {
        c.close("lifespan", t, 114.0, 3.0);
    }

    // The improved variants decay slower at every sampled delay. (Sampling
    // starts at 30 s: below ~27 s the fuzzier variant actually lies under
    // the inaccurate one — widening the truth function costs information
    // before the deviation penalty makes it pay off.)
    let sampled = [30.0, 50.0, 70.0, 90.0, 110.0, 130.0, 150.0];
    for &dt in &sampled {
        let base = inaccurate.freshness_at(dt).unwrap().semantic_bits;
        let acc = accurate.freshness_at(dt).unwrap().semantic_bits;
        let fuz = fuzzier.freshness_at(dt).unwrap().semantic_bits;
        c.require(&format!("accurate > inaccurate at dt={dt}"), acc > base);
        c.require(&format!("fuzzier > inaccurate at dt={dt}"), fuz > base);
    }

    // Strictly larger lifespans: neither improved variant crosses zero
    // within the scan horizon.
    for (name, scenario) in [("accurate", &accurate), ("fuzzier", &fuzzier)] {
        let improved = scenario.lifespan(dt_max, 1.0).unwrap();
        let larger = match (improved, lifespan) {
            (None, Some(_)) => true,
            (Some(a), Some(b)) => a > b,
            _ => false,
        };
        c.require(&format!("{name} lifespan strictly larger"), larger);
    }

    // Semantic information decreases strictly over the window where 4 sigma
    // of both gaussians stays on the grid (edge truncation bends the curves
    // upward beyond ~157 s).
    for (name, scenario) in [
        ("inaccurate", &inaccurate),
        ("accurate", &accurate),
        ("fuzzier", &fuzzier),
    ] {
        let mut prev = f64::INFINITY;
        let mut strict = true;
        let mut bounded = true;
        for dt in 0..=147 {
            let point = scenario.freshness_at(dt as f64).unwrap();
            if point.semantic_bits >= prev {
                strict = false;
            }
            if point.semantic_bits > point.shannon_bits + 1e-9 {
                bounded = false;
            }
            prev = point.semantic_bits;
        }
        c.require(&format!("{name} strictly decreasing on [0, 147]"), strict);
        c.require(&format!("{name} semantic <= shannon at every dt"), bounded);
    }
    c.finish();
}

#[test]
fn criterion_06_rate_matches_semantic_info_at_unit_slope() {
    let mut c = Criterion::new("6 R = G at s = 1");

    // single-label control demo through the rate solver
    let problem = control_demo();
    let sem = SemanticChannel::new(vec![problem.goal().clone()]).unwrap();
    let point = mmi_solve(1.0, problem.prior(), &sem, None, &MmiOptions::default()).unwrap();
    c.require("control demo converged", point.converged);
    c.require(
        "control demo |R - G| < 1e-6",
        (point.r_bits - point.g_bits).abs() < 1e-6,
    );

    let (source, sem) = binary_demo();
    let point = mmi_solve(1.0, &source, &sem, None, &MmiOptions::default()).unwrap();
    c.require("binary demo converged", point.converged);
    c.require(
        "binary demo |R - G| < 1e-6",
        (point.r_bits - point.g_bits).abs() < 1e-6,
    );
    c.finish();
}

/// Random overlapping truth-function pair on a two-point grid: each label is
/// fully true at its own point and partially true at the other (gaussian
/// pairs of random width land in exactly this form). Near-proportional truth
/// functions are avoided on purpose — they make the semantic channel
/// uninformative and the trade-off curve degenerates to its flat bottom.
fn random_binary_instance(rng: &mut StdRng) -> (Dist, SemanticChannel) {
    let p = rng.random_range(0.3..0.7);
    let source = Dist::new(vec![p, 1.0 - p]).unwrap();
    let sem = SemanticChannel::new(vec![
        TruthFn::new(vec![1.0, rng.random_range(0.2..0.8)]).unwrap(),
        TruthFn::new(vec![rng.random_range(0.2..0.8), 1.0]).unwrap(),
    ])
    .unwrap();
    (source, sem)
}

#[test]
fn criterion_07_oracle_equivalence_and_curve_shape() {
    let mut c = Criterion::new("7 brute-force oracle and curve shape");
    let mut rng = StdRng::seed_from_u64(7);
    let opts = MmiOptions::default();

    for instance in 0..5 {
        let (source, sem) = random_binary_instance(&mut rng);

        // oracle agreement at matched G
        let point = mmi_solve(1.0, &source, &sem, None, &opts).unwrap();
        let oracle = brute_force_rg(&source, &sem, point.g_bits, 1e-3).unwrap();
        c.require(
            &format!(
                "instance {instance}: |R_solver - R_oracle| <= 2e-3 (got {:.6})",
                (point.r_bits - oracle).abs()
            ),
            (point.r_bits - oracle).abs() <= 2e-3,
        );

        // swept curve: convexity and slope bracketing on the positive branch
        let s_values: Vec<f64> = (2..=12).map(|k| 0.25 * k as f64).collect();
        let curve = rg_curve(&source, &sem, &s_values, &opts).unwrap();
        let points = curve.points();
        c.require(
            &format!("instance {instance}: sweep converged"),
            points.iter().all(|p| p.converged),
        );

        let mut slopes: Vec<(f64, f64)> = Vec::new(); // (s_mid, slope)
        for w in points.windows(2) {
            let dg = w[1].g_bits - w[0].g_bits;
            if dg > 1e-9 {
                slopes.push(((w[0].s + w[1].s) / 2.0, (w[1].r_bits - w[0].r_bits) / dg));
            }
        }
        for w in slopes.windows(2) {
            c.require(
                &format!(
                    "instance {instance}: convexity (slope {:.6} -> {:.6})",
                    w[0].1, w[1].1
                ),
                w[1].1 >= w[0].1 - 1e-6,
            );
        }
        for (s_mid, slope) in &slopes {
            c.require(
                &format!(
                    "instance {instance}: slope {slope:.4} brackets s_mid {s_mid:.2} within 10%"
                ),
                ((slope - s_mid) / s_mid).abs() < 0.1,
            );
        }
    }
    c.finish();
}

fn random_dist(rng: &mut StdRng, n: usize) -> Dist {
    let weights: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    Dist::from_unnormalized(weights).unwrap()
}

fn random_truth(rng: &mut StdRng, n: usize) -> TruthFn {
    TruthFn::new((0..n).map(|_| rng.random_range(0.05..1.0)).collect()).unwrap()
}

fn random_channel(rng: &mut StdRng, n: usize, k: usize) -> ShannonChannel {
    let rows = (0..n)
        .map(|_| {
            let row: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
            let sum: f64 = row.iter().sum();
            row.into_iter().map(|v| v / sum).collect()
        })
        .collect();
    ShannonChannel::new(rows).unwrap()
}

#[test]
fn criterion_08_measure_inequalities() {
    let mut c = Criterion::new("8 measure inequalities");
    let mut rng = StdRng::seed_from_u64(8);
    let mut worst_kl_gap = f64::INFINITY;
    let mut worst_mi_gap = f64::INFINITY;
    let mut worst_matched = 0.0f64;
    for _ in 0..1000 {
        let n = rng.random_range(2..=6);
        let k = rng.random_range(2..=4);
        let prior = random_dist(&mut rng, n);
        let actual = random_dist(&mut rng, n);
        let truth = random_truth(&mut rng, n);
        let channel = random_channel(&mut rng, n, k);

        let sem_val = semantic_kl(&actual, &truth, &prior).unwrap();
        let sh_val = shannon_kl(&actual, &prior).unwrap();
        worst_kl_gap = worst_kl_gap.min(sh_val - sem_val);

        let sem =
            SemanticChannel::new((0..k).map(|_| random_truth(&mut rng, n)).collect()).unwrap();
        let info = mutual_info_pair(&prior, &channel, &sem).unwrap();
        worst_mi_gap = worst_mi_gap.min(info.shannon_mutual_bits - info.semantic_mutual_bits);

        let matched = SemanticChannel::matched_to_channel(&channel, &prior).unwrap();
        let info = mutual_info_pair(&prior, &channel, &matched).unwrap();
        worst_matched =
            worst_matched.max((info.shannon_mutual_bits - info.semantic_mutual_bits).abs());
    }
    c.require(
        &format!("semantic_kl <= shannon_kl (worst gap {worst_kl_gap:.3e})"),
        worst_kl_gap >= -1e-9,
    );
    c.require(
        &format!("SMI <= Shannon MI (worst gap {worst_mi_gap:.3e})"),
        worst_mi_gap >= -1e-9,
    );
    c.require(
        &format!("matched channels agree within 1e-9 (worst {worst_matched:.3e})"),
        worst_matched <= 1e-9,
    );
    c.finish();
}

#[test]
fn criterion_09_round_trip_identities() {
    let mut c = Criterion::new("9 round-trip identities");
    let mut rng = StdRng::seed_from_u64(9);
    let mut worst_likelihood = 0.0f64;
    let mut worst_truth = 0.0f64;
    let mut worst_distortion = 0.0f64;
    let mut worst_softmax = 0.0f64;
    for _ in 0..1000 {
        let n = rng.random_range(2..=8);
        let prior = random_dist(&mut rng, n);
        let likelihood = random_dist(&mut rng, n);
        let truth = random_truth(&mut rng, n);

        // likelihood -> truth -> likelihood
        let t = truth_from_likelihood(&likelihood, &prior).unwrap();
        let back = semantic_bayes(&t, &prior).unwrap();
        for i in 0..n {
            worst_likelihood = worst_likelihood.max((back.get(i) - likelihood.get(i)).abs());
        }

        // truth -> likelihood -> truth (recovered up to its maximum)
        let l = semantic_bayes(&truth, &prior).unwrap();
        let t_back = truth_from_likelihood(&l, &prior).unwrap();
        let max = truth.max_value();
        for i in 0..n {
            worst_truth = worst_truth.max((t_back.get(i) - truth.get(i) / max).abs());
        }

        // truth <-> distortion
        let d = truth_to_distortion(&truth);
        let t_d = distortion_to_truth(&d).unwrap();
        for i in 0..n {
            worst_distortion = worst_distortion.max((t_d.get(i) - truth.get(i)).abs());
        }

        // softmax loss/information identity
        let count = rng.random_range(2..=20);
        let sims: Vec<f64> = (0..count).map(|_| rng.random_range(-5.0..5.0)).collect();
        let tau = rng.random_range(0.05..2.0);
        let positive = rng.random_range(0..count);
        let out = softmax_semantic_info(&SimilaritySet::new(sims, tau, positive).unwrap());
        worst_softmax = worst_softmax.max((out.info_nats + out.loss_nats).abs());
    }
    c.require(
        &format!("likelihood round trip within 1e-9 (worst {worst_likelihood:.3e})"),
        worst_likelihood <= 1e-9,
    );
    c.require(
        &format!("truth round trip within 1e-9 (worst {worst_truth:.3e})"),
        worst_truth <= 1e-9,
    );
    c.require(
        &format!("distortion round trip within 1e-9 (worst {worst_distortion:.3e})"),
        worst_distortion <= 1e-9,
    );
    c.require(
        &format!("softmax info = -loss within 1e-12 (worst {worst_softmax:.3e})"),
        worst_softmax <= 1e-12,
    );
    c.finish();
}

/// Continuum oracle for the position scenario: gaussian integrals over an
/// unbounded line with uniform prior density 1/L.
fn continuum_semantic_bits(l: f64, sigma_hat: f64, delta_mean: f64, sigma_actual: f64) -> f64 {
    (l / (sigma_hat * (2.0 * std::f64::consts::PI).sqrt())).log2()
        - (delta_mean * delta_mean + sigma_actual * sigma_actual)
            / (2.0 * sigma_hat * sigma_hat)
            / LN_2
}

fn continuum_shannon_bits(l: f64, sigma_actual: f64) -> f64 {
    l.log2() - (sigma_actual * (2.0 * std::f64::consts::PI * std::f64::consts::E).sqrt()).log2()
}

#[test]
fn criterion_10_freshness_closed_form_oracle() {
    let mut c = Criterion::new("10 freshness closed-form oracle");
    let l = 4200.0;
    for (name, variant, pred_speed, sigma_rate) in [
        ("inaccurate", PredictionVariant::Inaccurate, 20.0, 1.0),
        ("accurate", PredictionVariant::MoreAccurate, 22.0, 1.0),
        ("fuzzier", PredictionVariant::Fuzzier, 20.0, 2.0),
    ] {
        let scenario = GpsScenario::table_variant(variant);
        for &dt in &[12.0, 30.0, 60.0, 90.0, 120.0, 137.0] {
            let actual_mean = 100.0 + 23.0 * dt;
            let actual_sigma = 30.0 + dt;
            let center = 100.0 + pred_speed * dt;
            let sigma_hat = 60.0 + sigma_rate * dt;
            // the oracle only applies with 4 sigma of grid on each side
            let inside = actual_mean - 4.0 * actual_sigma >= 0.0
                && actual_mean + 4.0 * actual_sigma <= l
                && center - 4.0 * sigma_hat >= 0.0
                && center + 4.0 * sigma_hat <= l;
            c.require(&format!("{name} dt={dt}: 4-sigma window"), inside);

            let point = scenario.freshness_at(dt).unwrap();
            let sem_oracle =
                continuum_semantic_bits(l, sigma_hat, actual_mean - center, actual_sigma);
            let sh_oracle = continuum_shannon_bits(l, actual_sigma);
            c.close(
                &format!("{name} dt={dt}: semantic"),
                point.semantic_bits,
                sem_oracle,
                0.02,
            );
            c.close(
                &format!("{name} dt={dt}: shannon"),
                point.shannon_bits,
                sh_oracle,
                0.02,
            );
        }
    }
    c.finish();
}
