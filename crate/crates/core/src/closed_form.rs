//! Analytic Bloch lengths and efficiencies for the x- and z-protocols,
//! used as an independent check on the density-matrix engine.
//!
//! Every efficiency is undefined at `θ = 0`, where nothing is measured.

use std::f64::consts::LN_2;

use crate::thermo::{binary_entropy_unchecked as h, Efficiency};

/// Denominators smaller than this make an efficiency undefined.
pub const DENOMINATOR_TOL: f64 = 1e-14;

/// Final system Bloch length of the x-protocol.
pub fn gamma_x(theta: f64, alpha: f64, lambda: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    (alpha * alpha * c * c + lambda * lambda * s * s).sqrt()
}

/// Final system Bloch length of the z-protocol.
pub fn gamma_z(theta: f64, lambda: f64) -> f64 {
    lambda * theta.sin()
}

fn ratio(theta: f64, numerator: f64, denominator: f64) -> Efficiency {
    if theta == 0.0 {
        return Efficiency::Undefined;
    }
    Efficiency::ratio(numerator, denominator, DENOMINATOR_TOL)
}

/// Explicit x-protocol: the decohered auxiliary ends maximally mixed.
pub fn eff_mb_x(theta: f64, alpha: f64, lambda: f64) -> Efficiency {
    let g = gamma_x(theta, alpha, lambda);
    ratio(theta, h(alpha) - h(g), LN_2 - h(lambda))
}

/// Coherent x-protocol: the auxiliary ends with Bloch length `αλ/γ_x`.
pub fn eff_coh_x(theta: f64, alpha: f64, lambda: f64) -> Efficiency {
    let g = gamma_x(theta, alpha, lambda);
    if g == 0.0 {
        return Efficiency::Undefined;
    }
    ratio(theta, h(alpha) - h(g), h(alpha * lambda / g) - h(lambda))
}

/// z-protocol, identical in coherent and explicit modes.
pub fn eff_z(theta: f64, alpha: f64, lambda: f64) -> Efficiency {
    let g = gamma_z(theta, lambda);
    ratio(theta, h(alpha) - h(g), h(alpha * g) - h(lambda))
}
