//! Side-by-side mutual-information traces of the x- and z-protocols on a
//! shared time grid.

use qfeedback_core::trajectory::uniform_grid;
use qfeedback_core::{Axis, Leg, Mode, ProtocolConfig, Result, Trajectory};

use crate::csv;

pub const CSV_HEADER: [&str; 4] = ["t", "stage", "I_x", "I_z"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRow {
    pub t: f64,
    pub stage: Leg,
    pub i_x: Option<f64>,
    pub i_z: Option<f64>,
}

/// The shared grid is the measurement leg sampled uniformly, followed by the
/// union of both protocols' uniform feedback grids. The x-trace ends first;
/// past its end `i_x` is `None`.
pub fn trajectory_table(
    alpha: f64,
    lambda: f64,
    theta: f64,
    mode: Mode,
    kt: f64,
    samples_per_stage: usize,
) -> Result<Vec<TrajectoryRow>> {
    if samples_per_stage < 2 {
        return Err(qfeedback_core::Error::InvalidParameter {
            name: "steps",
            value: samples_per_stage as f64,
            reason: "need at least 2",
        });
    }
    let config = ProtocolConfig::new(alpha, lambda, theta, Axis::X, mode).with_kt(kt);
    let x = Trajectory::new(&config)?;
    let z = Trajectory::new(&config.with_axis(Axis::Z))?;

    let mut rows = Vec::new();
    for t in uniform_grid(0.0, theta, samples_per_stage) {
        rows.push(TrajectoryRow {
            t,
            stage: Leg::Measurement,
            i_x: Some(x.point_at(Leg::Measurement, t)?.mutual_information),
            i_z: Some(z.point_at(Leg::Measurement, t)?.mutual_information),
        });
    }

    let mut times = uniform_grid(theta, x.total_duration(), samples_per_stage);
    times.extend(uniform_grid(theta, z.total_duration(), samples_per_stage));
    times.sort_by(f64::total_cmp);
    times.dedup();

    let sample = |traj: &Trajectory, t: f64| -> Result<Option<f64>> {
        if t <= traj.total_duration() {
            Ok(Some(traj.point_at(Leg::Feedback, t)?.mutual_information))
        } else {
            Ok(None)
        }
    };
    for t in times {
        rows.push(TrajectoryRow {
            t,
            stage: Leg::Feedback,
            i_x: sample(&x, t)?,
            i_z: sample(&z, t)?,
        });
    }
    Ok(rows)
}

pub fn to_csv(rows: &[TrajectoryRow]) -> String {
    let cell = |v: Option<f64>| v.map(csv::float).unwrap_or_default();
    csv::write_table(
        &CSV_HEADER,
        rows.iter().map(|r| {
            vec![
                csv::float(r.t),
                match r.stage {
                    Leg::Measurement => "measurement".to_string(),
                    Leg::Feedback => "feedback".to_string(),
                },
                cell(r.i_x),
                cell(r.i_z),
            ]
        }),
    )
}

pub fn to_json(rows: &[TrajectoryRow]) -> String {
    let values: Vec<_> = rows
        .iter()
        .map(|r| {
            serde_json::json!({
                "t": r.t,
                "stage": r.stage,
                "I_x": r.i_x,
                "I_z": r.i_z,
            })
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&values).expect("rows serialise");
    s.push('\n');
    s
}
