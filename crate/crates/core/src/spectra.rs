//! Closed-form added-noise spectral densities and quantum limits.
//!
//! Spectral densities are dimensionless, in units of `ħ m γ_m ω_m`. Every
//! closed form here has a stated domain of validity and is cross-checked
//! against the numeric pipeline of [`crate::linsys`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{
    chi_a, chi_c, chi_m, chi_om, meas_strength_a, meas_strength_om, MismatchParams, NmoParams,
    OmsParams,
};

pub const HBAR: f64 = 1.054_571_817e-34;
pub const K_B: f64 = 1.380_649e-23;

/// Relative tolerance used when checking equality preconditions.
const MATCH_TOL: f64 = 1e-9;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= MATCH_TOL * a.abs().max(b.abs())
}

fn require(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(what.to_owned()))
    }
}

fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            reason: "must be positive and finite",
        })
    }
}

/// High-temperature thermal occupation `k_B T/(ħ ω_m)`.
pub fn thermal_occupation(temperature: f64, omega_m: f64) -> f64 {
    K_B * temperature / (HBAR * omega_m)
}

/// Thermal contribution to the added noise, or zero when disabled.
pub fn thermal_term(oms: &OmsParams, include: bool) -> Result<f64> {
    if !include {
        return Ok(0.0);
    }
    let t = oms
        .temperature
        .ok_or(Error::MissingTemperature("thermal noise is enabled"))?;
    Ok(thermal_occupation(t, oms.omega_m))
}

pub fn s_sql(omega: f64, oms: &OmsParams) -> f64 {
    1.0 / (oms.gamma_m * chi_m(omega, oms).norm())
}

pub fn g_sql(omega: f64, oms: &OmsParams) -> f64 {
    1.0 / chi_m(omega, oms).norm()
}

fn shot_term(omega: f64, oms: &OmsParams, g_om: f64) -> f64 {
    1.0 / (2.0 * g_om * oms.gamma_m * chi_m(omega, oms).norm_sqr())
}

/// Single optomechanical sensor at measurement strength `g_om`.
pub fn s_single(omega: f64, oms: &OmsParams, g_om: f64, include_thermal: bool) -> Result<f64> {
    require_positive("g_om", g_om)?;
    let thermal = thermal_term(oms, include_thermal)?;
    Ok(thermal + shot_term(omega, oms, g_om) + g_om / (2.0 * oms.gamma_m))
}

pub fn s_cqnc(omega: f64, oms: &OmsParams) -> f64 {
    let (w, g) = (omega, oms.gamma_m);
    0.5 * ((w * w + g * g / 4.0) / oms.omega_m.powi(2) + 1.0)
}

pub fn cqnc_to_sql_ratio(omega: f64, oms: &OmsParams) -> f64 {
    let (w, g, wm) = (omega, oms.gamma_m, oms.omega_m);
    let num = w * w + g * g / 4.0 + wm * wm;
    let den = ((w * w - wm * wm).powi(2) + g * g * w * w).sqrt();
    num / (2.0 * oms.q_m() * den)
}

fn require_ideal_cascade(oms: &OmsParams, nmo: &NmoParams) -> Result<()> {
    require(oms.delta_om == 0.0, "closed form needs a resonant sensor cavity (delta_om = 0)")?;
    require(nmo.delta_c == 0.0, "closed form needs a resonant meter cavity (delta_c = 0)")?;
    require(
        close(nmo.g_bs, nmo.g_dc),
        "closed form needs balanced couplings (g_bs = g_dc)",
    )?;
    require(
        oms.eta_esc == 1.0 && nmo.eta_esc == 1.0,
        "closed form needs unit escape efficiencies",
    )?;
    require(oms.g > 0.0, "closed form needs a non-zero optomechanical coupling")
}

/// Cascaded sensor and negative-mass oscillator. `G_a` follows `g_om` in the
/// same proportion as for the given parameters, as when the common drive
/// power is varied.
pub fn s_cascaded(omega: f64, oms: &OmsParams, nmo: &NmoParams, g_om: f64) -> Result<f64> {
    require_ideal_cascade(oms, nmo)?;
    require_positive("g_om", g_om)?;
    let g_a = g_om * meas_strength_a(omega, nmo) / meas_strength_om(omega, oms);
    let (xm, xa) = (chi_m(omega, oms), chi_a(omega, nmo));
    let norm = 2.0 * g_om * oms.gamma_m * xm.norm_sqr();
    let backaction = (xa * g_a + xm * g_om).norm_sqr();
    let ka = nmo.kappa_a;
    let ancilla = if nmo.delta_a == 0.0 {
        0.0
    } else {
        g_a * ka * xa.norm_sqr() * ((omega * omega + ka * ka / 4.0) / nmo.delta_a.powi(2) + 1.0)
    };
    Ok((1.0 + backaction + ancilla) / norm)
}

fn require_matched_strength(oms: &OmsParams, nmo: &NmoParams) -> Result<()> {
    require(
        close(nmo.kappa_c, oms.kappa_om) && close(nmo.g_a(), oms.g),
        "needs matched measurement strengths (kappa_c = kappa_om, g_a = g)",
    )
}

fn ancilla_floor(omega: f64, oms: &OmsParams, nmo: &NmoParams) -> f64 {
    let ka = nmo.kappa_a;
    if nmo.delta_a == 0.0 {
        return 0.0;
    }
    let xa = chi_a(omega, nmo);
    ka * xa.norm_sqr() / (2.0 * oms.gamma_m * chi_m(omega, oms).norm_sqr())
        * ((omega * omega + ka * ka / 4.0) / nmo.delta_a.powi(2) + 1.0)
}

/// Linewidth-mismatched ancilla at measurement strength `g_om`; the
/// measurement strengths must be matched.
pub fn s_kappa_mismatch_at(omega: f64, oms: &OmsParams, nmo: &NmoParams, g_om: f64) -> Result<f64> {
    require_ideal_cascade(oms, nmo)?;
    require_matched_strength(oms, nmo)?;
    require_positive("g_om", g_om)?;
    let (xm, xa) = (chi_m(omega, oms), chi_a(omega, nmo));
    let backaction = g_om / (2.0 * oms.gamma_m) * ((xm + xa) / xm).norm_sqr();
    Ok(shot_term(omega, oms, g_om) + backaction + ancilla_floor(omega, oms, nmo))
}

/// Optimum over the measurement strength of [`s_kappa_mismatch_at`].
pub fn s_kappa_mismatch(omega: f64, oms: &OmsParams, nmo: &NmoParams) -> Result<f64> {
    require_ideal_cascade(oms, nmo)?;
    require_matched_strength(oms, nmo)?;
    let (xm, xa) = (chi_m(omega, oms), chi_a(omega, nmo));
    let first = (xm + xa).norm() / (oms.gamma_m * xm.norm_sqr());
    Ok(first + ancilla_floor(omega, oms, nmo))
}

/// Off-resonant floor `κ_a/(2ω_m)·S_SQL`, defined for `κ_a < ω_m`.
pub fn kappa_mismatch_floor(omega: f64, oms: &OmsParams, kappa_a: f64) -> Option<f64> {
    (kappa_a >= 0.0 && kappa_a < oms.omega_m).then(|| kappa_a / (2.0 * oms.omega_m) * s_sql(omega, oms))
}

/// `δε|χ_c|²/|χ_om|²`, the ratio `G_a/G_om` for a rate mismatch.
pub fn rate_ratio(omega: f64, oms: &OmsParams, mm: MismatchParams) -> f64 {
    let nmo = NmoParams::with_rate_mismatch(oms, mm);
    mm.delta * mm.epsilon * chi_c(omega, &nmo).norm_sqr() / chi_om(omega, oms).norm_sqr()
}

/// Measurement-rate mismatch with an otherwise matched ancilla.
pub fn s_rate_mismatch(omega: f64, oms: &OmsParams, mm: MismatchParams, g_om: f64) -> Result<f64> {
    require(oms.delta_om == 0.0, "closed form needs a resonant sensor cavity (delta_om = 0)")?;
    require_positive("g_om", g_om)?;
    let r = rate_ratio(omega, oms, mm);
    let backaction = g_om / (2.0 * oms.gamma_m) * (1.0 - r).powi(2);
    Ok(shot_term(omega, oms, g_om) + backaction + r * s_cqnc(omega, oms))
}

/// Optimum over the measurement strength of [`s_rate_mismatch`]:
/// `|1 − r|·S_SQL + r·S_CQNC`.
pub fn s_rate_mismatch_optimum(omega: f64, oms: &OmsParams, mm: MismatchParams) -> Result<f64> {
    require(oms.delta_om == 0.0, "closed form needs a resonant sensor cavity (delta_om = 0)")?;
    let r = rate_ratio(omega, oms, mm);
    Ok((1.0 - r).abs() * s_sql(omega, oms) + r * s_cqnc(omega, oms))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// `ω ≪ κ_c, κ_om`: the rate ratio tends to `δ/ε`.
    LowFrequency,
    /// `ω ≫ κ_c, κ_om`: the rate ratio tends to `δε`.
    HighFrequency,
}

pub fn rate_mismatch_limit(omega: f64, oms: &OmsParams, mm: MismatchParams, regime: Regime) -> f64 {
    let r = match regime {
        Regime::LowFrequency => mm.delta / mm.epsilon,
        Regime::HighFrequency => mm.delta * mm.epsilon,
    };
    (1.0 - r).abs() * s_sql(omega, oms) + r * s_cqnc(omega, oms)
}

/// Frequency at which the two measurement-strength Lorentzians cross and the
/// backaction cancels exactly. `Some(0)` when they coincide at DC.
pub fn cqnc_recovery_frequency(mm: MismatchParams, kappa_om: f64) -> Option<f64> {
    let (d, e) = (mm.delta, mm.epsilon);
    if d == 1.0 && e == 1.0 {
        return Some(0.0);
    }
    let radicand = (d * e - e * e) / (1.0 - d * e);
    (radicand.is_finite() && radicand >= 0.0).then(|| radicand.sqrt() * kappa_om / 2.0)
}

/// True when a non-zero crossing frequency exists, by case on `g_a` versus `g`.
pub fn recovery_in_validity_region(mm: MismatchParams) -> bool {
    let (d, e) = (mm.delta, mm.epsilon);
    if d == 1.0 {
        e != 1.0
    } else if d < 1.0 {
        e > 1.0 / d || e < d
    } else {
        e > d || e < 1.0 / d
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CascadeOrder {
    NmoOms,
    OmsNmo,
}

/// Efficiencies of the optical path outside the cavities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LossBudget {
    /// Between the first and second system.
    pub eta_prop: f64,
    /// After the second system.
    pub eta_det: f64,
}

impl Default for LossBudget {
    fn default() -> Self {
        Self {
            eta_prop: 1.0,
            eta_det: 1.0,
        }
    }
}

impl LossBudget {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("eta_prop", self.eta_prop), ("eta_det", self.eta_det)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Domain {
                    name,
                    value: v,
                    reason: "efficiency must lie in [0, 1]",
                });
            }
        }
        Ok(())
    }

    pub fn is_lossless(&self) -> bool {
        self.eta_prop == 1.0 && self.eta_det == 1.0
    }
}

/// Optimized off-resonant noise floor in units of `S_SQL` for either
/// propagation loss or intracavity loss. Detection loss is ignored.
pub fn loss_floor(
    order: CascadeOrder,
    losses: &LossBudget,
    oms: &OmsParams,
    nmo: &NmoParams,
    omega: f64,
) -> Result<f64> {
    losses.validate()?;
    let (eta_om, eta_c) = (oms.eta_esc, nmo.eta_esc);
    let intracavity = eta_om < 1.0 || eta_c < 1.0;
    if losses.eta_prop < 1.0 {
        require(
            !intracavity,
            "loss floors cover propagation or intracavity loss, not both",
        )?;
        let eta = losses.eta_prop;
        return match order {
            CascadeOrder::NmoOms => Ok((1.0 - eta).sqrt()),
            CascadeOrder::OmsNmo if eta == 0.0 => Err(Error::SignalLost("propagation efficiency is zero")),
            CascadeOrder::OmsNmo => Ok((1.0 - eta).sqrt() / eta),
        };
    }
    let numerator = (eta_c + eta_om - 2.0 * eta_c * eta_om).max(0.0).sqrt();
    match order {
        CascadeOrder::NmoOms => Ok(numerator / eta_om),
        CascadeOrder::OmsNmo => {
            let meter = (1.0 - chi_c(omega, nmo) * (eta_c * nmo.kappa_c)).norm_sqr();
            if meter == 0.0 {
                return Err(Error::SignalLost("meter cavity cancels the phase signal"));
            }
            Ok(numerator / (eta_om * meter))
        }
    }
}

/// Quantum cooperativity `(Γ_om/γ_m)·ħω_m/(k_B T)`.
pub fn cooperativity(oms: &OmsParams, temperature: f64) -> Result<f64> {
    require_positive("temperature", temperature)?;
    Ok(oms.gamma_om() / oms.gamma_m / thermal_occupation(temperature, oms.omega_m))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    Dimensionless,
    /// Dimensionless, divided by `Q_m`.
    PerQm,
    /// N²/Hz.
    Physical,
}

impl Normalization {
    /// Factor taking a dimensionless value to this normalization.
    pub fn factor(self, oms: &OmsParams) -> Result<f64> {
        match self {
            Normalization::Dimensionless => Ok(1.0),
            Normalization::PerQm => Ok(1.0 / oms.q_m()),
            Normalization::Physical => physical_scale(oms),
        }
    }
}

/// `ħ m γ_m ω_m`, the N²/Hz value of one dimensionless unit.
pub fn physical_scale(oms: &OmsParams) -> Result<f64> {
    let m = oms.mass.ok_or(Error::MissingMass)?;
    Ok(HBAR * m * oms.gamma_m * oms.omega_m)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpectrum {
    /// Angular frequencies, strictly increasing.
    pub omegas: Vec<f64>,
    pub values: Vec<f64>,
    pub normalization: Normalization,
    pub label: String,
}

impl NoiseSpectrum {
    pub fn new(omegas: Vec<f64>, values: Vec<f64>, normalization: Normalization, label: impl Into<String>) -> Result<Self> {
        if omegas.len() != values.len() {
            return Err(Error::Shape(format!(
                "{} frequencies but {} values",
                omegas.len(),
                values.len()
            )));
        }
        if !omegas.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Shape("frequency grid must be strictly increasing".into()));
        }
        if let Some(&v) = values.iter().find(|v| !(**v >= 0.0)) {
            return Err(Error::Domain {
                name: "spectral value",
                value: v,
                reason: "must be non-negative",
            });
        }
        Ok(Self {
            omegas,
            values,
            normalization,
            label: label.into(),
        })
    }

    fn rescaled(&self, factor: f64, normalization: Normalization) -> Self {
        Self {
            omegas: self.omegas.clone(),
            values: self.values.iter().map(|v| v * factor).collect(),
            normalization,
            label: self.label.clone(),
        }
    }
}

pub fn to_physical(spec: &NoiseSpectrum, oms: &OmsParams) -> Result<NoiseSpectrum> {
    if spec.normalization != Normalization::Dimensionless {
        return Err(Error::Normalization("only dimensionless spectra"));
    }
    Ok(spec.rescaled(physical_scale(oms)?, Normalization::Physical))
}

pub fn from_physical(spec: &NoiseSpectrum, oms: &OmsParams) -> Result<NoiseSpectrum> {
    if spec.normalization != Normalization::Physical {
        return Err(Error::Normalization("only physical spectra"));
    }
    Ok(spec.rescaled(1.0 / physical_scale(oms)?, Normalization::Dimensionless))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn baseline() -> OmsParams {
        OmsParams::new(1.0, 1e-3, 10.0, 1.0)
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn sql_values() {
        let p = baseline();
        assert!(rel(s_sql(1.0, &p), 1.0) < 1e-12);
        assert!(rel(s_sql(0.0, &p), 1000.0) < 1e-12);
        let expect = 3.0 * (1.0f64 + 1e-6 * 4.0 / 9.0).sqrt() / 1e-3;
        assert!(rel(s_sql(2.0, &p), expect) < 1e-12);
        assert!(rel(g_sql(1.0, &p), p.gamma_m) < 1e-12);
    }

    #[test]
    fn single_at_g_sql_is_sql() {
        let p = baseline();
        for w in [1e-3, 0.3, 1.0, 4.0] {
            let s = s_single(w, &p, g_sql(w, &p), false).unwrap();
            assert!(rel(s, s_sql(w, &p)) < 1e-12);
            assert!(s_single(w, &p, 2.0 * g_sql(w, &p), false).unwrap() > s);
        }
        let big = 1e12;
        assert!(rel(s_single(0.5, &p, big, false).unwrap(), big / (2.0 * p.gamma_m)) < 1e-9);
        assert!(s_single(0.5, &p, 0.0, false).is_err());
    }

    #[test]
    fn thermal_term_case_study() {
        let p = OmsParams {
            temperature: Some(4.0),
            ..OmsParams::new(TAU * 5e5, TAU * 5e-3, TAU * 1.98e6, TAU * 5e5)
        };
        let n = thermal_term(&p, true).unwrap();
        assert!(rel(n, 1.6669e5) < 1e-4);
        assert!(rel(n / p.q_m(), 1.6669e-3) < 1e-4);
        assert_eq!(thermal_term(&baseline(), false).unwrap(), 0.0);
        assert!(matches!(thermal_term(&baseline(), true), Err(Error::MissingTemperature(_))));
    }

    #[test]
    fn cqnc_ratio_values() {
        let p = baseline();
        assert!((s_cqnc(0.0, &p) - 0.5).abs() < 1e-6);
        assert!(rel(cqnc_to_sql_ratio(0.0, &p), 1.0 / 2000.0) < 1e-6);
        assert!((cqnc_to_sql_ratio(1.0, &p) - 1.0).abs() < 1e-6);
        assert!(rel(cqnc_to_sql_ratio(10.0, &p), 101.0 / 99.0 / 2000.0) < 1e-6);
        for w in [0.01, 0.9, 3.0] {
            assert!(rel(cqnc_to_sql_ratio(w, &p), s_cqnc(w, &p) / s_sql(w, &p)) < 1e-12);
        }
    }

    #[test]
    fn cascaded_preconditions() {
        let p = baseline();
        let nmo = NmoParams::matched_to(&p).with_relative_mismatch(0.2);
        assert!(matches!(s_cascaded(0.1, &p, &nmo, 1.0), Err(Error::Precondition(_))));
        let lossy = NmoParams {
            eta_esc: 0.9,
            ..NmoParams::matched_to(&p)
        };
        assert!(s_cascaded(0.1, &p, &lossy, 1.0).is_err());
    }

    #[test]
    fn cascaded_approaches_cqnc_bound() {
        let p = baseline();
        let nmo = NmoParams::matched_to(&p);
        for w in [1e-2, 0.5, 3.0] {
            let best = (0..=120)
                .map(|k| s_cascaded(w, &p, &nmo, 10f64.powf(k as f64 / 10.0)).unwrap())
                .fold(f64::INFINITY, f64::min);
            assert!(rel(best, s_cqnc(w, &p)) < 1e-3, "{w}");
            assert!(best >= s_cqnc(w, &p) * (1.0 - 1e-6));
        }
    }

    #[test]
    fn kappa_mismatch_matched_limit() {
        let p = baseline();
        let nmo = NmoParams::matched_to(&p);
        for w in [0.01, 0.5, 2.0] {
            // residual backaction is tiny, the optimum sits close to the CQNC bound
            let s = s_kappa_mismatch(w, &p, &nmo).unwrap();
            assert!(s >= s_cqnc(w, &p) * (1.0 - 1e-6));
            assert!(s < s_sql(w, &p));
        }
    }

    #[test]
    fn kappa_mismatch_optimum_is_minimum() {
        let p = baseline();
        let nmo = NmoParams {
            kappa_a: 0.1,
            ..NmoParams::matched_to(&p)
        };
        let w = 0.05;
        let best = s_kappa_mismatch(w, &p, &nmo).unwrap();
        let mut lowest = f64::INFINITY;
        for k in -60..=60 {
            let g = 10f64.powf(k as f64 / 10.0);
            let s = s_kappa_mismatch_at(w, &p, &nmo, g).unwrap();
            assert!(s >= best * (1.0 - 1e-12));
            lowest = lowest.min(s);
        }
        assert!(rel(lowest, best) < 1e-2);
    }

    #[test]
    fn kappa_floor_helper() {
        let p = baseline();
        let f = kappa_mismatch_floor(0.01, &p, 0.4).unwrap();
        assert!(rel(f, 0.2 * s_sql(0.01, &p)) < 1e-12);
        assert!(kappa_mismatch_floor(0.01, &p, 100.0).is_none());
    }

    #[test]
    fn rate_mismatch_low_frequency_forms() {
        let p = baseline();
        let mm = MismatchParams::new(0.9, 0.9).unwrap();
        let s = s_rate_mismatch_optimum(1e-4, &p, mm).unwrap();
        assert!(rel(s, s_cqnc(1e-4, &p)) < 1e-6);

        let mm = MismatchParams::new(1.0, 0.9).unwrap();
        let w = 1e-4;
        let expect = 0.1 * s_sql(w, &p) + 0.9 * s_cqnc(w, &p);
        assert!(rel(s_rate_mismatch_optimum(w, &p, mm).unwrap(), expect) < 1e-6);
        assert!(rel(rate_mismatch_limit(w, &p, mm, Regime::LowFrequency), expect) < 1e-12);
    }

    #[test]
    fn rate_mismatch_high_frequency_recovery() {
        let p = baseline();
        let mm = MismatchParams::new(2.0, 0.5).unwrap();
        // r = 1 − 75/ω², weighted by S_SQL/S_CQNC ≈ 2Q_m
        let w = 1e5;
        let s = s_rate_mismatch_optimum(w, &p, mm).unwrap();
        assert!(rel(s, s_cqnc(w, &p)) < 1e-4);
        assert!(rel(rate_mismatch_limit(w, &p, mm, Regime::HighFrequency), s_cqnc(w, &p)) < 1e-12);
    }

    #[test]
    fn rate_mismatch_optimum_bounds_fixed_g() {
        let p = baseline();
        let mm = MismatchParams::new(0.8, 1.3).unwrap();
        let w = 0.7;
        let best = s_rate_mismatch_optimum(w, &p, mm).unwrap();
        for k in -40..=40 {
            let g = 10f64.powf(k as f64 / 8.0);
            assert!(s_rate_mismatch(w, &p, mm, g).unwrap() >= best * (1.0 - 1e-12));
        }
    }

    #[test]
    fn recovery_frequency_examples() {
        let w = cqnc_recovery_frequency(MismatchParams::new(0.9, 1.0).unwrap(), 10.0).unwrap();
        assert!(rel(w, 0.9f64.sqrt() * 5.0) < 1e-12);
        assert!(rel(w, 4.743) < 1e-3);
        assert_eq!(cqnc_recovery_frequency(MismatchParams::new(1.0, 1.0).unwrap(), 10.0), Some(0.0));
        assert_eq!(cqnc_recovery_frequency(MismatchParams::new(1.0, 0.5).unwrap(), 10.0), None);
        assert!(!recovery_in_validity_region(MismatchParams::new(1.0, 0.5).unwrap()));
        assert!(recovery_in_validity_region(MismatchParams::new(0.9, 1.0).unwrap()));
    }

    #[test]
    fn recovery_frequency_nulls_backaction() {
        let p = baseline();
        let mm = MismatchParams::new(0.9, 1.0).unwrap();
        let w = cqnc_recovery_frequency(mm, p.kappa_om).unwrap();
        assert!((1.0 - rate_ratio(w, &p, mm)).powi(2) < 1e-20);
    }

    #[test]
    fn loss_floor_values() {
        let p = baseline();
        let nmo = NmoParams::matched_to(&p);
        let prop = LossBudget {
            eta_prop: 0.91,
            eta_det: 1.0,
        };
        let a = loss_floor(CascadeOrder::NmoOms, &prop, &p, &nmo, 0.01).unwrap();
        assert!((a - 0.3).abs() < 1e-12);
        let b = loss_floor(CascadeOrder::OmsNmo, &prop, &p, &nmo, 0.01).unwrap();
        assert!((b - 0.3 / 0.91).abs() < 1e-12);
        assert!((b - 0.3297).abs() < 1e-4);

        let oms_i = OmsParams { eta_esc: 0.9, ..p };
        let nmo_i = NmoParams { eta_esc: 0.9, ..nmo };
        let c = loss_floor(CascadeOrder::NmoOms, &LossBudget::default(), &oms_i, &nmo_i, 0.01).unwrap();
        assert!((c - 0.18f64.sqrt() / 0.9).abs() < 1e-12);
        assert!((c - 0.4714).abs() < 1e-4);

        assert!(matches!(
            loss_floor(CascadeOrder::NmoOms, &prop, &oms_i, &nmo_i, 0.01),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn loss_floor_signal_loss() {
        let p = baseline();
        let nmo = NmoParams::matched_to(&p);
        let dark = LossBudget {
            eta_prop: 0.0,
            eta_det: 1.0,
        };
        assert!(matches!(
            loss_floor(CascadeOrder::OmsNmo, &dark, &p, &nmo, 0.01),
            Err(Error::SignalLost(_))
        ));
        assert_eq!(loss_floor(CascadeOrder::NmoOms, &dark, &p, &nmo, 0.01).unwrap(), 1.0);
        let half = NmoParams { eta_esc: 0.5, ..nmo };
        assert!(matches!(
            loss_floor(CascadeOrder::OmsNmo, &LossBudget::default(), &p, &half, 0.0),
            Err(Error::SignalLost(_))
        ));
    }

    #[test]
    fn cooperativity_scaling() {
        let wm = TAU * 5e5;
        let p = OmsParams::new(wm, 1e-8 * wm, 0.99 * 4.0 * wm, wm);
        let c = cooperativity(&p, 4.0).unwrap();
        assert!(c > 600.0 && c < 612.0, "{c}");
        let doubled = cooperativity(&p.with_coupling_scale(2.0), 4.0).unwrap();
        assert!(rel(doubled, 4.0 * c) < 1e-12);
        assert!(cooperativity(&p, 1e30).unwrap() < 1e-20);
        assert!(cooperativity(&p, 0.0).is_err());
    }

    #[test]
    fn physical_units() {
        let wm = TAU * 5e5;
        let p = OmsParams {
            mass: Some(1e-12),
            ..OmsParams::new(wm, TAU * 5e-3, 4.0 * wm, wm)
        };
        let spec = NoiseSpectrum::new(vec![1.0], vec![1.0], Normalization::Dimensionless, "unit").unwrap();
        let phys = to_physical(&spec, &p).unwrap();
        let expect = 1.054_571_817e-34 * 1e-12 * (TAU * 5e-3) * (TAU * 5e5);
        assert!(rel(phys.values[0], expect) < 1e-12);
        assert!(rel(phys.values[0], 1.04e-41) < 1e-2);
        assert_eq!(phys.normalization, Normalization::Physical);
        let back = from_physical(&phys, &p).unwrap();
        assert!(rel(back.values[0], 1.0) < 1e-15);

        let per_qm = NoiseSpectrum {
            normalization: Normalization::PerQm,
            ..spec.clone()
        };
        assert!(matches!(to_physical(&per_qm, &p), Err(Error::Normalization(_))));
        assert!(matches!(to_physical(&spec, &baseline()), Err(Error::MissingMass)));
    }

    #[test]
    fn spectrum_invariants() {
        assert!(NoiseSpectrum::new(vec![2.0, 1.0], vec![1.0, 1.0], Normalization::Dimensionless, "").is_err());
        assert!(NoiseSpectrum::new(vec![1.0, 2.0], vec![1.0, -1.0], Normalization::Dimensionless, "").is_err());
        assert!(NoiseSpectrum::new(vec![1.0], vec![1.0, 2.0], Normalization::Dimensionless, "").is_err());
    }
}
