//! Efficiency and purity curves as functions of the measurement strength.

use qfeedback_core::trajectory::uniform_grid;
use qfeedback_core::{run_protocol, Axis, Error, Mode, ProtocolConfig, Result};
use rayon::prelude::*;
use serde::Serialize;

use crate::csv;

pub const CSV_HEADER: [&str; 6] = [
    "theta",
    "eps_x_mb",
    "eps_x_coh",
    "eps_z",
    "gamma_x",
    "gamma_z",
];

/// Uniform θ grid over `[start, stop]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepSpec {
    pub fn new(start: f64, stop: f64, steps: usize) -> Result<Self> {
        if start.is_nan() || stop.is_nan() || start >= stop {
            return Err(Error::InvalidParameter {
                name: "start",
                value: start,
                reason: "must be below stop",
            });
        }
        if steps < 2 {
            return Err(Error::InvalidParameter {
                name: "steps",
                value: steps as f64,
                reason: "need at least 2",
            });
        }
        Ok(Self { start, stop, steps })
    }

    /// θ ∈ [0.01, π/2] in 200 steps.
    pub fn fig3() -> Self {
        Self {
            start: 0.01,
            stop: std::f64::consts::FRAC_PI_2,
            steps: 200,
        }
    }

    pub fn grid(&self) -> Vec<f64> {
        uniform_grid(self.start, self.stop, self.steps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub theta: f64,
    /// NaN when undefined.
    pub eps_x_mb: f64,
    pub eps_x_coh: f64,
    pub eps_z: f64,
    pub gamma_x: f64,
    pub gamma_z: f64,
}

/// Runs the explicit and coherent x-protocols and the z-protocol (in
/// `z_mode`) at every grid point. Rows come back in grid order.
pub fn sweep(
    alpha: f64,
    lambda: f64,
    kt: f64,
    z_mode: Mode,
    spec: &SweepSpec,
) -> Result<Vec<SweepRow>> {
    spec.grid()
        .into_par_iter()
        .map(|theta| {
            let base =
                ProtocolConfig::new(alpha, lambda, theta, Axis::X, Mode::Explicit).with_kt(kt);
            let x_mb = run_protocol(&base)?;
            let x_coh = run_protocol(&base.with_mode(Mode::Coherent))?;
            let z = run_protocol(&base.with_axis(Axis::Z).with_mode(z_mode))?;
            Ok(SweepRow {
                theta,
                eps_x_mb: x_mb.ledger.epsilon.or_nan(),
                eps_x_coh: x_coh.ledger.epsilon.or_nan(),
                eps_z: z.ledger.epsilon.or_nan(),
                gamma_x: x_mb.gamma_final,
                gamma_z: z.gamma_final,
            })
        })
        .collect()
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    csv::write_table(
        &CSV_HEADER,
        rows.iter().map(|r| {
            [
                r.theta,
                r.eps_x_mb,
                r.eps_x_coh,
                r.eps_z,
                r.gamma_x,
                r.gamma_z,
            ]
            .into_iter()
            .map(csv::float)
            .collect()
        }),
    )
}

/// JSON array of rows; NaN becomes `null`.
pub fn to_json(rows: &[SweepRow]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialise");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validation() {
        assert!(SweepSpec::new(1.0, 0.5, 10).is_err());
        assert!(SweepSpec::new(0.0, 0.5, 1).is_err());
        assert_eq!(SweepSpec::new(0.0, 1.0, 5).unwrap().grid().len(), 5);
    }

    #[test]
    fn rows_follow_the_grid() {
        let spec = SweepSpec::new(0.0, 1.0, 6).unwrap();
        let rows = sweep(0.4, 0.8, 1.0, Mode::Explicit, &spec).unwrap();
        assert_eq!(rows.len(), 6);
        assert!(rows.windows(2).all(|w| w[0].theta < w[1].theta));
        assert!(rows[0].eps_x_mb.is_nan() && rows[0].eps_z.is_nan());
        let csv = to_csv(&rows);
        assert!(csv.starts_with("theta,eps_x_mb,eps_x_coh,eps_z,gamma_x,gamma_z\n"));
        assert_eq!(csv.lines().count(), 7);
        assert!(csv.lines().nth(1).unwrap().contains(",nan,"));
        let json: serde_json::Value = serde_json::from_str(&to_json(&rows)).unwrap();
        assert!(json[0]["eps_z"].is_null());
    }

    #[test]
    fn out_of_range_grid_is_an_error() {
        let spec = SweepSpec::new(0.0, 2.0, 3).unwrap();
        assert!(sweep(0.4, 0.8, 1.0, Mode::Explicit, &spec).is_err());
    }
}
