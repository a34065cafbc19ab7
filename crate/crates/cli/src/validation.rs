//! Engine-versus-closed-form comparison and identity checks over a
//! parameter grid.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use qfeedback_core::closed_form::{eff_coh_x, eff_mb_x, eff_z, gamma_x, gamma_z};
use qfeedback_core::trajectory::uniform_grid;
use qfeedback_core::{run_protocol, Axis, Efficiency, Mode, ProtocolConfig, ProtocolResult, Stage};
use rayon::prelude::*;

/// Engine and closed form must agree to this.
pub const ORACLE_TOL: f64 = 1e-9;
/// Thermodynamic identities must hold to this.
pub const IDENTITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationGrid {
    pub thetas: Vec<f64>,
    pub alphas: Vec<f64>,
    pub lambda_max: f64,
    pub lambda_steps: usize,
}

impl Default for ValidationGrid {
    /// θ ∈ [0.05, π/2] × 40, α ∈ [0.1, 0.9] × 5, λ ∈ [α, 0.95] × 5.
    fn default() -> Self {
        Self {
            thetas: uniform_grid(0.05, FRAC_PI_2, 40),
            alphas: uniform_grid(0.1, 0.9, 5),
            lambda_max: 0.95,
            lambda_steps: 5,
        }
    }
}

impl ValidationGrid {
    pub fn points(&self) -> Vec<GridPoint> {
        let mut out = Vec::new();
        for &alpha in &self.alphas {
            let lambdas = if self.lambda_steps == 1 {
                vec![alpha]
            } else {
                uniform_grid(alpha, self.lambda_max, self.lambda_steps)
            };
            for &lambda in &lambdas {
                for &theta in &self.thetas {
                    out.push(GridPoint {
                        theta,
                        alpha,
                        lambda,
                    });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub theta: f64,
    pub alpha: f64,
    pub lambda: f64,
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(theta={}, alpha={}, lambda={})",
            self.theta, self.alpha, self.lambda
        )
    }
}

/// Mutation hook for exercising the validator: the engine sees
/// `θ · theta_scale` (clamped to `[0, π/2]`) while the closed forms see `θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineHook {
    pub theta_scale: f64,
}

impl Default for EngineHook {
    fn default() -> Self {
        Self { theta_scale: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckKind {
    GammaX,
    GammaZ,
    EpsMbX,
    EpsCohX,
    EpsZ,
    EpsZModeIndependence,
    JointEntropyConservation,
    MutualInformationPositivity,
    MeasurementBalance,
    DecoherenceIdentity,
    DecoherenceNonNegative,
    FeedbackIdentity,
    ResetProduction,
    EngineError,
}

impl CheckKind {
    pub const ALL: [CheckKind; 14] = [
        CheckKind::GammaX,
        CheckKind::GammaZ,
        CheckKind::EpsMbX,
        CheckKind::EpsCohX,
        CheckKind::EpsZ,
        CheckKind::EpsZModeIndependence,
        CheckKind::JointEntropyConservation,
        CheckKind::MutualInformationPositivity,
        CheckKind::MeasurementBalance,
        CheckKind::DecoherenceIdentity,
        CheckKind::DecoherenceNonNegative,
        CheckKind::FeedbackIdentity,
        CheckKind::ResetProduction,
        CheckKind::EngineError,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::GammaX => "gamma_x",
            CheckKind::GammaZ => "gamma_z",
            CheckKind::EpsMbX => "eps_x_mb",
            CheckKind::EpsCohX => "eps_x_coh",
            CheckKind::EpsZ => "eps_z",
            CheckKind::EpsZModeIndependence => "eps_z coherent vs explicit",
            CheckKind::JointEntropyConservation => "joint entropy conservation",
            CheckKind::MutualInformationPositivity => "mutual information >= 0",
            CheckKind::MeasurementBalance => "measurement balance dH_A = -dH_S + I",
            CheckKind::DecoherenceIdentity => "decoherence identity",
            CheckKind::DecoherenceNonNegative => "decoherence entropy increase >= 0",
            CheckKind::FeedbackIdentity => "explicit feedback identity",
            CheckKind::ResetProduction => "reset entropy production = I(final) >= 0",
            CheckKind::EngineError => "engine errors",
        }
    }

    pub fn tolerance(self) -> f64 {
        match self {
            CheckKind::GammaX
            | CheckKind::GammaZ
            | CheckKind::EpsMbX
            | CheckKind::EpsCohX
            | CheckKind::EpsZ
            | CheckKind::EpsZModeIndependence => ORACLE_TOL,
            CheckKind::EngineError => 0.0,
            _ => IDENTITY_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub kind: CheckKind,
    /// Largest deviation or violation seen; infinite when one side of a
    /// comparison was undefined and the other was not.
    pub max: f64,
    pub worst: Option<GridPoint>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.max <= self.kind.tolerance()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Offender {
    pub kind: CheckKind,
    pub point: GridPoint,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationSummary {
    pub points: usize,
    pub checks: Vec<CheckResult>,
    pub offenders: Vec<Offender>,
}

impl ValidationSummary {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn check(&self, kind: CheckKind) -> &CheckResult {
        self.checks
            .iter()
            .find(|c| c.kind == kind)
            .expect("every kind is reported")
    }

    /// Largest engine-versus-closed-form deviation.
    pub fn max_oracle_deviation(&self) -> f64 {
        self.checks
            .iter()
            .filter(|c| c.kind.tolerance() == ORACLE_TOL)
            .map(|c| c.max)
            .fold(0.0, f64::max)
    }

    pub fn max_identity_violation(&self) -> f64 {
        self.checks
            .iter()
            .filter(|c| c.kind.tolerance() == IDENTITY_TOL)
            .map(|c| c.max)
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for ValidationSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "grid points: {}", self.points)?;
        for c in &self.checks {
            let status = if c.passed() { "ok  " } else { "FAIL" };
            write!(
                f,
                "{status} {:<42} max {:e} (tol {:e})",
                c.kind.name(),
                c.max,
                c.kind.tolerance()
            )?;
            if let (false, Some(p)) = (c.passed(), c.worst) {
                write!(f, " at {p}")?;
            }
            writeln!(f)?;
        }
        writeln!(
            f,
            "max |engine - closed form|: {:e}",
            self.max_oracle_deviation()
        )?;
        writeln!(
            f,
            "max identity violation: {:e}",
            self.max_identity_violation()
        )?;
        if !self.offenders.is_empty() {
            writeln!(f, "offending tuples ({}):", self.offenders.len())?;
            for o in self.offenders.iter().take(50) {
                writeln!(
                    f,
                    "  {} {} deviation {:e}",
                    o.kind.name(),
                    o.point,
                    o.deviation
                )?;
            }
            if self.offenders.len() > 50 {
                writeln!(f, "  ... {} more", self.offenders.len() - 50)?;
            }
        }
        Ok(())
    }
}

fn efficiency_gap(a: Efficiency, b: Efficiency) -> f64 {
    match (a, b) {
        (Efficiency::Value(x), Efficiency::Value(y)) => (x - y).abs(),
        (Efficiency::Undefined, Efficiency::Undefined) => 0.0,
        _ => f64::INFINITY,
    }
}

fn identity_violations(r: &ProtocolResult, out: &mut Vec<(CheckKind, f64)>) {
    let init = r.stage(Stage::Initial).expect("initial");
    let meas = r.stage(Stage::PostMeasurement).expect("measurement");
    let before_fb = &r.stages[r.stages.len() - 2];
    let fb = r.last();

    let conservation = (meas.h_joint - init.h_joint)
        .abs()
        .max((fb.h_joint - before_fb.h_joint).abs());
    out.push((CheckKind::JointEntropyConservation, conservation));

    let negativity = r
        .stages
        .iter()
        .map(|s| (-s.mutual_information).max(0.0))
        .fold(0.0, f64::max);
    out.push((CheckKind::MutualInformationPositivity, negativity));

    let dhs = meas.h_system - init.h_system;
    let dha = meas.h_auxiliary - init.h_auxiliary;
    out.push((
        CheckKind::MeasurementBalance,
        (dha - (-dhs + meas.mutual_information)).abs(),
    ));

    if let Some(dec) = r.stage(Stage::PostDecoherence) {
        let lhs = dec.h_joint - meas.h_joint;
        let rhs = (dec.h_auxiliary - meas.h_auxiliary)
            - (dec.mutual_information - meas.mutual_information);
        out.push((CheckKind::DecoherenceIdentity, (lhs - rhs).abs()));
        out.push((CheckKind::DecoherenceNonNegative, (-lhs).max(0.0)));
        let dhs_fb = fb.h_system - dec.h_system;
        out.push((
            CheckKind::FeedbackIdentity,
            (dhs_fb - (fb.mutual_information - dec.mutual_information)).abs(),
        ));
    }

    let reset = r.ledger.reset_entropy_production;
    out.push((
        CheckKind::ResetProduction,
        (reset - fb.mutual_information).abs().max((-reset).max(0.0)),
    ));
}

fn check_point(p: GridPoint, hook: EngineHook) -> Vec<(CheckKind, f64)> {
    let engine_theta = (p.theta * hook.theta_scale).clamp(0.0, FRAC_PI_2);
    let run = |axis, mode| {
        run_protocol(&ProtocolConfig::new(
            p.alpha,
            p.lambda,
            engine_theta,
            axis,
            mode,
        ))
    };
    let (xe, xc, ze, zc) = match (
        run(Axis::X, Mode::Explicit),
        run(Axis::X, Mode::Coherent),
        run(Axis::Z, Mode::Explicit),
        run(Axis::Z, Mode::Coherent),
    ) {
        (Ok(a), Ok(b), Ok(c), Ok(d)) => (a, b, c, d),
        _ => return vec![(CheckKind::EngineError, f64::INFINITY)],
    };

    let gx = gamma_x(p.theta, p.alpha, p.lambda);
    let gz = gamma_z(p.theta, p.lambda);
    let mut out = vec![
        (
            CheckKind::GammaX,
            (xe.gamma_final - gx).abs().max((xc.gamma_final - gx).abs()),
        ),
        (
            CheckKind::GammaZ,
            (ze.gamma_final - gz).abs().max((zc.gamma_final - gz).abs()),
        ),
        (
            CheckKind::EpsMbX,
            efficiency_gap(xe.ledger.epsilon, eff_mb_x(p.theta, p.alpha, p.lambda)),
        ),
        (
            CheckKind::EpsCohX,
            efficiency_gap(xc.ledger.epsilon, eff_coh_x(p.theta, p.alpha, p.lambda)),
        ),
        (
            CheckKind::EpsZ,
            efficiency_gap(ze.ledger.epsilon, eff_z(p.theta, p.alpha, p.lambda)).max(
                efficiency_gap(zc.ledger.epsilon, eff_z(p.theta, p.alpha, p.lambda)),
            ),
        ),
        (
            CheckKind::EpsZModeIndependence,
            efficiency_gap(ze.ledger.epsilon, zc.ledger.epsilon),
        ),
    ];
    for r in [&xe, &xc, &ze, &zc] {
        identity_violations(r, &mut out);
    }
    out
}

/// Runs all four protocol variants at every grid point and compares them
/// with the closed forms and the entropy identities.
pub fn validate_grid(grid: &ValidationGrid, hook: EngineHook) -> ValidationSummary {
    let points = grid.points();
    let per_point: Vec<Vec<(CheckKind, f64)>> =
        points.par_iter().map(|&p| check_point(p, hook)).collect();

    let mut checks: Vec<CheckResult> = CheckKind::ALL
        .iter()
        .map(|&kind| CheckResult {
            kind,
            max: 0.0,
            worst: None,
        })
        .collect();
    let mut offenders = Vec::new();
    for (p, results) in points.iter().zip(per_point) {
        for (kind, dev) in results {
            let c = checks.iter_mut().find(|c| c.kind == kind).expect("kind");
            if dev > c.max || (dev.is_nan() && !c.max.is_nan()) {
                c.max = dev;
                c.worst = Some(*p);
            }
            if dev.is_nan() || dev > kind.tolerance() {
                offenders.push(Offender {
                    kind,
                    point: *p,
                    deviation: dev,
                });
            }
        }
    }
    ValidationSummary {
        points: points.len(),
        checks,
        offenders,
    }
}
