//! Shared fixtures for the benchmark targets.

use semg_core::{ControlProblem, Dist, Grid, SemanticChannel, TruthFamily};

/// A moderately sized rate-fidelity instance: a gaussian source over 64
/// points with 8 gaussian labels spread across the support.
pub fn rate_instance() -> (Dist, SemanticChannel) {
    let grid = Grid::from_range(0.0, 63.0, 1.0).expect("static grid");
    let source = Dist::discretized_normal(&grid, 32.0, 12.0).expect("static source");
    let families: Vec<TruthFamily> = (0..8)
        .map(|j| TruthFamily::Gaussian {
            center: 4.0 + 8.0 * j as f64,
            sigma: 6.0,
        })
        .collect();
    let sem = SemanticChannel::from_families(&families, &grid).expect("static channel");
    (source, sem)
}

/// The death-age control demo.
pub fn control_instance() -> ControlProblem {
    let grid = Grid::from_range(0.0, 110.0, 1.0).expect("static grid");
    let prior = Dist::discretized_normal(&grid, 50.0, 10.0).expect("static prior");
    let goal = TruthFamily::Logistic {
        slope: 0.8,
        midpoint: 60.0,
    }
    .evaluate(&grid)
    .expect("static goal");
    ControlProblem::new(grid, prior, goal).expect("static problem")
}
