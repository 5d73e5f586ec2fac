//! Aging of predictive information: a position estimate extrapolated from two
//! past fixes keeps informing us about the present, but less and less as the
//! delay grows.
//!
//! The scenario is one-dimensional: a vehicle on a road with a uniform prior
//! over positions. The device reports fixes `x0` at `t0` and `x1` at `t1`; a
//! constant-velocity extrapolation predicts the position `dt` seconds after
//! `t1`, with a gaussian truth function whose width grows with `dt`. The true
//! position is itself a (truncated, renormalized) normal whose mean and
//! spread also drift with `dt`. Semantic information of the stale prediction
//! against the actual distribution decays with `dt`, reaches zero at the
//! information lifespan, and goes negative beyond it.

use crate::error::{Error, Result};
use crate::measures::{semantic_kl, shannon_kl};
use crate::prob::{Dist, Grid, TruthFamily, TruthFn};

/// Motion and uncertainty parameters for a [`GpsScenario`].
#[derive(Debug, Clone, Copy)]
pub struct GpsParams {
    /// First fix: position at time `t0`.
    pub x0: f64,
    pub t0: f64,
    /// Second fix: position at time `t1 > t0`.
    pub x1: f64,
    pub t1: f64,
    /// Device resolution (RMS) — the truth-function width at `dt = 0`.
    pub device_sigma: f64,
    /// True speed of the vehicle.
    pub actual_speed: f64,
    /// Spread of the actual position at `dt = 0`.
    pub actual_sigma0: f64,
    /// Growth rate of the actual spread per second.
    pub actual_sigma_rate: f64,
    /// Predicted speed; `None` derives it from the two fixes.
    pub predicted_speed: Option<f64>,
    /// Growth rate of the prediction's truth-function width per second.
    pub predicted_sigma_rate: f64,
}

/// The three parameter rows of the reference scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictionVariant {
    /// Speed from the two fixes (20 m/s), width growing 1 m/s.
    Inaccurate,
    /// Speed corrected to 22 m/s, width growing 1 m/s.
    MoreAccurate,
    /// Speed from the two fixes, width growing 2 m/s.
    Fuzzier,
}

/// A fully specified prediction-aging scenario on a position grid.
#[derive(Debug, Clone)]
pub struct GpsScenario {
    grid: Grid,
    prior: Dist,
    params: GpsParams,
    predicted_speed: f64,
}

/// Information carried by the stale prediction at one delay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreshnessPoint {
    pub dt: f64,
    pub shannon_bits: f64,
    pub semantic_bits: f64,
}

impl GpsScenario {
    pub fn new(grid: Grid, params: GpsParams) -> Result<Self> {
        if !(params.t1 > params.t0) {
            return Err(Error::InvalidParameter(format!(
                "need t1 > t0, got t0={}, t1={}",
                params.t0, params.t1
            )));
        }
        if !(params.device_sigma > 0.0) || !(params.actual_sigma0 > 0.0) {
            return Err(Error::InvalidParameter(
                "device and actual sigmas must be positive".into(),
            ));
        }
        if params.actual_sigma_rate < 0.0 || params.predicted_sigma_rate < 0.0 {
            return Err(Error::InvalidParameter(
                "sigma growth rates must be nonnegative".into(),
            ));
        }
        let predicted_speed = params
            .predicted_speed
            .unwrap_or((params.x1 - params.x0) / (params.t1 - params.t0));
        let prior = Dist::uniform(grid.len());
        Ok(Self {
            grid,
            prior,
            params,
            predicted_speed,
        })
    }

    /// Reference scenario: a 0..4200 m road at 1 m spacing, fixes 0 m at 0 s
    /// and 100 m at 5 s, device RMS 60 m, true motion 23 m/s with spread
    /// `30 + dt`.
    pub fn table_variant(variant: PredictionVariant) -> Self {
        let (predicted_speed, predicted_sigma_rate) = match variant {
            PredictionVariant::Inaccurate => (None, 1.0),
            PredictionVariant::MoreAccurate => (Some(22.0), 1.0),
            PredictionVariant::Fuzzier => (None, 2.0),
        };
        let grid = Grid::from_range(0.0, 4200.0, 1.0).expect("static grid");
        Self::new(
            grid,
            GpsParams {
                x0: 0.0,
                t0: 0.0,
                x1: 100.0,
                t1: 5.0,
                device_sigma: 60.0,
                actual_speed: 23.0,
                actual_sigma0: 30.0,
                actual_sigma_rate: 1.0,
                predicted_speed,
                predicted_sigma_rate,
            },
        )
        .expect("static parameters")
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn prior(&self) -> &Dist {
        &self.prior
    }

    pub fn predicted_speed(&self) -> f64 {
        self.predicted_speed
    }

    /// Constant-velocity extrapolation `x1 + speed * dt`.
    pub fn extrapolate_position(&self, dt: f64) -> f64 {
        self.params.x1 + self.predicted_speed * dt
    }

    fn actual_mean(&self, dt: f64) -> f64 {
        self.params.x1 + self.params.actual_speed * dt
    }

    /// Truth-function width at delay `dt`.
    pub fn predicted_sigma(&self, dt: f64) -> f64 {
        self.params.device_sigma + self.params.predicted_sigma_rate * dt
    }

    /// Actual-position spread at delay `dt`.
    pub fn actual_sigma(&self, dt: f64) -> f64 {
        self.params.actual_sigma0 + self.params.actual_sigma_rate * dt
    }

    /// Prediction truth function and actual-position distribution at delay
    /// `dt`. Errors once either mean leaves the grid.
    pub fn at(&self, dt: f64) -> Result<(TruthFn, Dist)> {
        if !(dt >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "dt must be >= 0, got {dt}"
            )));
        }
        let predicted = self.extrapolate_position(dt);
        let actual_mean = self.actual_mean(dt);
        if !self.grid.contains(predicted) || !self.grid.contains(actual_mean) {
            return Err(Error::OutOfRange(format!(
                "at dt = {dt} the predicted ({predicted}) or actual ({actual_mean}) mean leaves the grid"
            )));
        }
        let truth = TruthFamily::Gaussian {
            center: predicted,
            sigma: self.predicted_sigma(dt),
        }
        .evaluate(&self.grid)?;
        let actual = Dist::discretized_normal(&self.grid, actual_mean, self.actual_sigma(dt))?;
        Ok((truth, actual))
    }

    /// Shannon and semantic information of the prediction at one delay.
    pub fn freshness_at(&self, dt: f64) -> Result<FreshnessPoint> {
        let (truth, actual) = self.at(dt)?;
        Ok(FreshnessPoint {
            dt,
            shannon_bits: shannon_kl(&actual, &self.prior)?,
            semantic_bits: semantic_kl(&actual, &truth, &self.prior)?,
        })
    }

    /// Freshness at each delay in `dt_values` (nonnegative, increasing).
    pub fn freshness_curve(&self, dt_values: &[f64]) -> Result<Vec<FreshnessPoint>> {
        if dt_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "dt values must be strictly increasing".into(),
            ));
        }
        dt_values.iter().map(|&dt| self.freshness_at(dt)).collect()
    }

    /// Delay at which the semantic information crosses zero: scanned at
    /// `step`, then bisected to 1e-3 s. `None` if no crossing occurs by
    /// `dt_max`. Requires positive semantic information at `dt = 0`.
    pub fn lifespan(&self, dt_max: f64, step: f64) -> Result<Option<f64>> {
        if !(step > 0.0) || !(dt_max > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "need positive dt_max and step, got {dt_max}, {step}"
            )));
        }
        let initial = self.freshness_at(0.0)?.semantic_bits;
        if initial <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "semantic information at dt = 0 is {initial}, not positive"
            )));
        }
        let mut lo = 0.0;
        let mut dt = step;
        loop {
            if dt > dt_max {
                return Ok(None);
            }
            if self.freshness_at(dt)?.semantic_bits <= 0.0 {
                // bisect the bracketing interval
                let mut hi = dt;
                while hi - lo > 1e-3 {
                    let mid = 0.5 * (lo + hi);
                    if self.freshness_at(mid)?.semantic_bits <= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                return Ok(Some(0.5 * (lo + hi)));
            }
            lo = dt;
            dt += step;
        }
    }

    /// Share of the initial semantic information already lost at `dt`, in
    /// percent: 0 at `dt = 0`, 100 at the lifespan, above 100 beyond it.
    pub fn relative_age(&self, dt: f64) -> Result<f64> {
        let initial = self.freshness_at(0.0)?.semantic_bits;
        if initial <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "semantic information at dt = 0 is {initial}, not positive"
            )));
        }
        let current = self.freshness_at(dt)?.semantic_bits;
        Ok((1.0 - current / initial) * 100.0)
    }

    /// Semantic-information gain of replacing the stale prediction at `dt`
    /// with a fresh message described by `new_truth` and `new_actual`.
    pub fn update_gain(&self, dt: f64, new_truth: &TruthFn, new_actual: &Dist) -> Result<f64> {
        let stale = self.freshness_at(dt)?.semantic_bits;
        let fresh = semantic_kl(new_actual, new_truth, &self.prior)?;
        Ok(fresh - stale)
    }
}
