//! Mutual information along the measurement and feedback legs, with the
//! accumulated Bloch rotation angle as the time coordinate.
//!
//! On the measurement leg `t` is the auxiliary rotation angle, `0 → θ`. On
//! the feedback leg it continues as `θ + τ` where `τ` is the system rotation
//! angle, `0 → φ` for x and `0 → π` for z. In explicit mode the decoherence
//! map acts instantaneously at `t = θ`.

use serde::Serialize;

use crate::eigen::unitary_from_generator;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::protocol::{
    decohere_auxiliary, feedback_unitary, initial_joint, measurement_generator, Mode,
    ProtocolConfig, QubitBasis, Stage, StageRecord,
};
use crate::state::DensityMatrix;

pub const DEFAULT_SAMPLES_PER_STAGE: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Leg {
    Measurement,
    Feedback,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub stage: Leg,
    #[serde(rename = "I")]
    pub mutual_information: f64,
    #[serde(rename = "H_S")]
    pub h_system: f64,
    #[serde(rename = "H_A")]
    pub h_auxiliary: f64,
}

/// Continuous-time view of one protocol run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    config: ProtocolConfig,
    initial: DensityMatrix,
    measurement_generator: ComplexMatrix,
    /// State entering the feedback leg (after decoherence in explicit mode).
    feedback_start: DensityMatrix,
    feedback_generator: ComplexMatrix,
    feedback_duration: f64,
}

impl Trajectory {
    pub fn new(config: &ProtocolConfig) -> Result<Self> {
        config.validate()?;
        let initial = initial_joint(config.alpha, config.lambda)?;
        let measurement_generator = measurement_generator(config.axis.unit_vector());
        let measured = initial.evolve(&unitary_from_generator(
            &measurement_generator,
            config.theta,
        )?)?;
        let feedback_start = match config.mode {
            Mode::Explicit if config.theta > 0.0 => {
                decohere_auxiliary(&measured, &QubitBasis::sigma_x())?
            }
            _ => measured,
        };
        let fb = feedback_unitary(config.axis, config.theta, config.alpha, config.lambda)?;
        Ok(Self {
            config: *config,
            initial,
            measurement_generator,
            feedback_start,
            feedback_generator: fb.generator,
            feedback_duration: fb.phi,
        })
    }

    pub fn measurement_duration(&self) -> f64 {
        self.config.theta
    }

    pub fn feedback_duration(&self) -> f64 {
        self.feedback_duration
    }

    pub fn total_duration(&self) -> f64 {
        self.config.theta + self.feedback_duration
    }

    /// Joint state at time `t` on `leg`. Measurement-leg times run over
    /// `[0, θ]`, feedback-leg times over `[θ, θ + duration]`.
    pub fn state_at(&self, leg: Leg, t: f64) -> Result<DensityMatrix> {
        let slack = 1e-12;
        match leg {
            Leg::Measurement => {
                if !(-slack..=self.config.theta + slack).contains(&t) {
                    return Err(Error::param("t", t, "outside the measurement leg"));
                }
                let t = t.clamp(0.0, self.config.theta);
                let u = unitary_from_generator(&self.measurement_generator, t)?;
                self.initial.evolve(&u)
            }
            Leg::Feedback => {
                let tau = t - self.config.theta;
                if !(-slack..=self.feedback_duration + slack).contains(&tau) {
                    return Err(Error::param("t", t, "outside the feedback leg"));
                }
                let tau = tau.clamp(0.0, self.feedback_duration);
                let u = unitary_from_generator(&self.feedback_generator, tau)?;
                self.feedback_start.evolve(&u)
            }
        }
    }

    pub fn point_at(&self, leg: Leg, t: f64) -> Result<TrajectoryPoint> {
        // stage label is irrelevant for the entropies
        let record = StageRecord::new(Stage::Initial, self.state_at(leg, t)?)?;
        Ok(TrajectoryPoint {
            t,
            stage: leg,
            mutual_information: record.mutual_information,
            h_system: record.h_system,
            h_auxiliary: record.h_auxiliary,
        })
    }
}

/// Uniform samples `start + k (stop - start) / (n - 1)`, endpoints exact.
pub fn uniform_grid(start: f64, stop: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| {
            if k + 1 == n {
                stop
            } else {
                start + (stop - start) * k as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// Samples both legs on uniform grids of `samples_per_stage` points each.
pub fn mutual_information_trace(
    config: &ProtocolConfig,
    samples_per_stage: usize,
) -> Result<Vec<TrajectoryPoint>> {
    if samples_per_stage < 2 {
        return Err(Error::param(
            "samples_per_stage",
            samples_per_stage as f64,
            "need at least 2",
        ));
    }
    let traj = Trajectory::new(config)?;
    let theta = traj.measurement_duration();
    let mut out = Vec::with_capacity(2 * samples_per_stage);
    for t in uniform_grid(0.0, theta, samples_per_stage) {
        out.push(traj.point_at(Leg::Measurement, t)?);
    }
    for t in uniform_grid(theta, traj.total_duration(), samples_per_stage) {
        out.push(traj.point_at(Leg::Feedback, t)?);
    }
    Ok(out)
}
