//! End-to-end acceptance checks. Prints one line per criterion and exits
//! non-zero if any fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::process::{Command, ExitCode};
use std::time::Instant;

use qfeedback_cli::validation::{CheckKind, ValidationGrid, ValidationSummary};
use qfeedback_cli::{sweep, validate_grid, EngineHook, SweepSpec};
use qfeedback_core::closed_form::{eff_coh_x, eff_mb_x, eff_z, gamma_x, gamma_z};
use qfeedback_core::protocol::feedback_angle;
use qfeedback_core::{
    binary_entropy, mutual_information_trace, run_protocol, Axis, Efficiency, Leg, Mode,
    ProtocolConfig, Trajectory,
};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn criterion_1(summary: &ValidationSummary, elapsed: f64) -> Outcome {
    let kinds = [
        CheckKind::GammaX,
        CheckKind::GammaZ,
        CheckKind::EpsMbX,
        CheckKind::EpsCohX,
        CheckKind::EpsZ,
    ];
    let worst = kinds
        .iter()
        .map(|&k| summary.check(k).max)
        .fold(0.0, f64::max);
    let engine_ok = summary.check(CheckKind::EngineError).passed();
    outcome(
        worst <= 1e-9 && engine_ok && elapsed <= 5.0 && summary.points == 1000,
        format!(
            "{} tuples, max |engine - closed form| = {worst:.3e}, {elapsed:.2} s",
            summary.points
        ),
    )
}

fn criterion_2() -> Outcome {
    let (alpha, lambda) = (0.4, 0.8);
    let rows = sweep::sweep(alpha, lambda, 1.0, Mode::Explicit, &SweepSpec::fig3()).expect("sweep");

    let coh_beats_z = rows.iter().all(|r| r.eps_x_coh > r.eps_z);

    let diffs: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.theta, r.eps_x_mb - r.eps_z))
        .collect();
    let crossings: Vec<f64> = diffs
        .windows(2)
        .filter(|w| w[0].1.signum() != w[1].1.signum())
        .map(|w| {
            let ((t0, d0), (t1, d1)) = (w[0], w[1]);
            t0 - d0 * (t1 - t0) / (d1 - d0)
        })
        .collect();
    let crossing_ok = crossings.len() == 1 && (0.9..=1.1).contains(&crossings[0]);

    let top = rows.last().expect("rows");
    let coh_top_ok = top.theta == FRAC_PI_2 && (top.eps_x_coh - 1.0).abs() <= 1e-9;

    let at_zero = [
        (Axis::X, Mode::Explicit),
        (Axis::X, Mode::Coherent),
        (Axis::Z, Mode::Explicit),
        (Axis::Z, Mode::Coherent),
    ]
    .iter()
    .all(|&(axis, mode)| {
        let r = run_protocol(&ProtocolConfig::new(alpha, lambda, 0.0, axis, mode)).expect("run");
        r.ledger.epsilon == Efficiency::Undefined
    });
    let closed_at_zero = !eff_mb_x(0.0, alpha, lambda).is_defined()
        && !eff_coh_x(0.0, alpha, lambda).is_defined()
        && !eff_z(0.0, alpha, lambda).is_defined();
    let defined_elsewhere = rows
        .iter()
        .all(|r| r.eps_x_mb.is_finite() && r.eps_x_coh.is_finite() && r.eps_z.is_finite());
    let zero_ok = at_zero && closed_at_zero && defined_elsewhere;

    outcome(
        coh_beats_z && crossing_ok && coh_top_ok && zero_ok,
        format!(
            "coh > z everywhere: {coh_beats_z}; mb/z crossings {crossings:.4?}; \
             coh(pi/2) = {:.12}; undefined only at theta = 0: {zero_ok}",
            top.eps_x_coh
        ),
    )
}

fn criterion_3(summary: &ValidationSummary) -> Outcome {
    let c = summary.check(CheckKind::EpsZModeIndependence);
    outcome(
        c.max <= 1e-9,
        format!("max |eps_z coherent - eps_z explicit| = {:.3e}", c.max),
    )
}

fn criterion_4(summary: &ValidationSummary) -> Outcome {
    let kinds = [
        CheckKind::JointEntropyConservation,
        CheckKind::MeasurementBalance,
        CheckKind::DecoherenceIdentity,
        CheckKind::DecoherenceNonNegative,
        CheckKind::FeedbackIdentity,
        CheckKind::ResetProduction,
    ];
    let worst = kinds
        .iter()
        .map(|&k| summary.check(k).max)
        .fold(0.0, f64::max);
    outcome(
        worst <= 1e-10,
        format!("max identity violation = {worst:.3e}"),
    )
}

fn criterion_5(grid: &ValidationGrid) -> Outcome {
    let mut min_i = f64::INFINITY;
    let mut max_eps_cooling = f64::NEG_INFINITY;
    let mut order_ok = true;
    let mut min_gap_below_top = f64::INFINITY;
    let mut max_gap_at_top: f64 = 0.0;
    for p in grid.points() {
        let mut gammas = [0.0; 2];
        for (k, axis) in [Axis::X, Axis::Z].into_iter().enumerate() {
            for mode in [Mode::Explicit, Mode::Coherent] {
                let r = run_protocol(&ProtocolConfig::new(p.alpha, p.lambda, p.theta, axis, mode))
                    .expect("run");
                for s in &r.stages {
                    min_i = min_i.min(s.mutual_information);
                }
                if r.ledger.dh_system < 0.0 {
                    if let Efficiency::Value(e) = r.ledger.epsilon {
                        max_eps_cooling = max_eps_cooling.max(e);
                    }
                }
                gammas[k] = r.gamma_final;
            }
        }
        let gap = gammas[0] - gammas[1];
        if p.theta == FRAC_PI_2 {
            max_gap_at_top = max_gap_at_top.max(gap.abs());
        } else {
            min_gap_below_top = min_gap_below_top.min(gap);
            order_ok &= gap > 1e-12;
        }
        order_ok &= gap >= -1e-12;
        // closed forms agree on the ordering
        order_ok &= gamma_x(p.theta, p.alpha, p.lambda) >= gamma_z(p.theta, p.lambda) - 1e-12;
    }
    order_ok &= max_gap_at_top <= 1e-12;
    outcome(
        min_i >= -1e-10 && order_ok && max_eps_cooling <= 1.0 + 1e-9,
        format!(
            "min I = {min_i:.3e}; min gamma_x - gamma_z below pi/2 = {min_gap_below_top:.3e}, \
             at pi/2 = {max_gap_at_top:.3e}; max eps with dH_S < 0 = {max_eps_cooling:.6}"
        ),
    )
}

fn criterion_6() -> Outcome {
    let (theta, alpha, lambda) = (FRAC_PI_4, 0.4, 0.8);
    let x = ProtocolConfig::new(alpha, lambda, theta, Axis::X, Mode::Coherent);
    let z = x.with_axis(Axis::Z);
    let leg_change = |cfg: &ProtocolConfig, leg: Leg| {
        let pts: Vec<_> = mutual_information_trace(cfg, 200)
            .expect("trace")
            .into_iter()
            .filter(|p| p.stage == leg)
            .collect();
        pts.last().unwrap().mutual_information - pts[0].mutual_information
    };
    let x_meas = leg_change(&x, Leg::Measurement);
    let z_meas = leg_change(&z, Leg::Measurement);
    let x_fb = leg_change(&x, Leg::Feedback);
    let z_fb = leg_change(&z, Leg::Feedback);
    let tx = Trajectory::new(&x).expect("x").total_duration();
    let tz = Trajectory::new(&z).expect("z").total_duration();
    let (phi, _) = feedback_angle(theta, alpha, lambda);
    let durations_ok = (tx - (theta + phi)).abs() < 1e-12
        && (tz - (theta + std::f64::consts::PI)).abs() < 1e-12
        && tx < tz;
    outcome(
        x_meas > 0.0 && z_meas > 0.0 && x_fb < 0.0 && z_fb > 0.0 && durations_ok,
        format!(
            "measurement dI x {x_meas:+.4} z {z_meas:+.4}; feedback dI x {x_fb:+.4} z {z_fb:+.4}; \
             durations x {tx:.4} < z {tz:.4}"
        ),
    )
}

fn criterion_7() -> Outcome {
    let h04 = binary_entropy(0.4).expect("h");
    let h08 = binary_entropy(0.8).expect("h");
    let mb = eff_mb_x(FRAC_PI_2, 0.4, 0.8).or_nan();
    let ez = eff_z(FRAC_PI_2, 0.4, 0.8).or_nan();
    let (phi, _) = feedback_angle(FRAC_PI_4, 0.4, 0.8);
    let expected = [
        ("h(0.4)", h04, 0.610864),
        ("h(0.8)", h08, 0.325083),
        ("eps_x_mb(pi/2)", mb, 0.776444),
        ("eps_z(pi/2)", ez, 0.904507),
        ("phi(pi/4)", phi, 1.107149),
    ];
    let worst = expected
        .iter()
        .map(|(_, got, want)| (got - want).abs())
        .fold(0.0, f64::max);
    let listing: Vec<String> = expected
        .iter()
        .map(|(name, got, _)| format!("{name} = {got:.7}"))
        .collect();
    outcome(
        worst <= 1e-5,
        format!("{}; max deviation {worst:.2e}", listing.join(", ")),
    )
}

fn criterion_8() -> Outcome {
    let lib = || {
        sweep::to_csv(
            &sweep::sweep(0.4, 0.8, 1.0, Mode::Explicit, &SweepSpec::fig3()).expect("sweep"),
        )
    };
    let bin = || {
        Command::new(env!("CARGO_BIN_EXE_qfeedback"))
            .args(["sweep", "--preset", "fig3"])
            .output()
            .map(|o| (o.status.success(), o.stdout))
    };
    let a = lib();
    let b = lib();
    let binary = match (bin(), bin()) {
        (Ok((true, x)), Ok((true, y))) => Some((x, y)),
        _ => None,
    };
    let lib_same = a == b;
    let bin_same = binary
        .as_ref()
        .is_some_and(|(x, y)| x == y && x.as_slice() == a.as_bytes());
    outcome(
        lib_same && bin_same,
        format!(
            "{} bytes; library runs identical: {lib_same}; binary runs identical to library: {bin_same}",
            a.len()
        ),
    )
}

fn main() -> ExitCode {
    let grid = ValidationGrid::default();
    let start = Instant::now();
    let summary = validate_grid(&grid, EngineHook::default());
    let elapsed = start.elapsed().as_secs_f64();

    let results = [
        ("oracle equivalence", criterion_1(&summary, elapsed)),
        ("efficiency curves at alpha=0.4, lambda=0.8", criterion_2()),
        ("z efficiency independent of mode", criterion_3(&summary)),
        ("entropy identities", criterion_4(&summary)),
        ("positivity and ordering", criterion_5(&grid)),
        ("mutual information traces", criterion_6()),
        ("spot values", criterion_7()),
        ("deterministic sweep output", criterion_8()),
    ];

    let mut failed = 0;
    for (n, (name, o)) in results.iter().enumerate() {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {}: {name} ({})", n + 1, o.detail);
        if !o.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", results.len());
        println!("{summary}");
        ExitCode::FAILURE
    } else {
        println!("all {} criteria passed", results.len());
        ExitCode::SUCCESS
    }
}
