//! Independent reference formulas, written out directly from their
//! definitions so that they share no code with the library.

#![allow(dead_code)]

use cqnc::models::{NmoParams, OmsParams};

pub fn mech_response(omega: f64, omega_m: f64, gamma_m: f64) -> (f64, f64) {
    // ω_m / ((ω² − ω_m²) − iγω), returned as (re, im)
    let a = omega * omega - omega_m * omega_m;
    let b = -gamma_m * omega;
    let d = a * a + b * b;
    (omega_m * a / d, -omega_m * b / d)
}

pub fn sql(omega: f64, omega_m: f64, gamma_m: f64) -> f64 {
    let (re, im) = mech_response(omega, omega_m, gamma_m);
    1.0 / (gamma_m * (re * re + im * im).sqrt())
}

pub fn cqnc_bound(omega: f64, omega_m: f64, gamma_m: f64) -> f64 {
    0.5 * ((omega * omega + gamma_m * gamma_m / 4.0) / (omega_m * omega_m) + 1.0)
}

/// Baseline sensor in units of ω_m.
pub fn baseline() -> OmsParams {
    OmsParams::new(1.0, 1e-3, 10.0, 1.0)
}

pub fn matched(oms: &OmsParams) -> NmoParams {
    NmoParams {
        kappa_c: oms.kappa_om,
        kappa_a: oms.gamma_m,
        delta_c: 0.0,
        delta_a: -oms.omega_m,
        g_bs: oms.g / 2.0,
        g_dc: oms.g / 2.0,
        eta_esc: 1.0,
    }
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 10f64.powf(lo.log10() + (hi.log10() - lo.log10()) * i as f64 / (n - 1) as f64))
        .collect()
}
