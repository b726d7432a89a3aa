//! The two physical subsystems: the optomechanical sensor (OMS) and the
//! all-optical effective negative-mass oscillator (NMO).
//!
//! All rates are angular frequencies in rad/s. State vectors are ordered
//! `(x_om, p_om, x_m, p_m)` for the sensor and `(x_c, p_c, x_a, p_a)` for the
//! negative-mass oscillator.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::linsys::{layout_channels, ChannelKind, LinearQuantumSystem, C64};

pub const OMS_BATH: &str = "oms optical bath";
pub const OMS_FORCE: &str = "force";
pub const NMO_BATH: &str = "nmo meter bath";
pub const NMO_ANCILLA: &str = "nmo ancilla input";

fn check(ok: bool, name: &'static str, value: f64, reason: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value, reason })
    }
}

/// Optomechanical sensor: a cavity of linewidth `kappa_om` containing a
/// mechanical oscillator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmsParams {
    pub omega_m: f64,
    pub gamma_m: f64,
    pub kappa_om: f64,
    pub delta_om: f64,
    pub g: f64,
    /// Fraction of `kappa_om` leaving through the measured port.
    pub eta_esc: f64,
    /// Kelvin.
    pub temperature: Option<f64>,
    /// Kilograms; only needed to convert to N²/Hz.
    pub mass: Option<f64>,
}

impl OmsParams {
    /// Resonant, lossless sensor without temperature or mass.
    pub fn new(omega_m: f64, gamma_m: f64, kappa_om: f64, g: f64) -> Self {
        Self {
            omega_m,
            gamma_m,
            kappa_om,
            delta_om: 0.0,
            g,
            eta_esc: 1.0,
            temperature: None,
            mass: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check(self.omega_m > 0.0 && self.omega_m.is_finite(), "omega_m", self.omega_m, "must be positive")?;
        check(self.gamma_m > 0.0 && self.gamma_m.is_finite(), "gamma_m", self.gamma_m, "must be positive")?;
        check(self.kappa_om > 0.0 && self.kappa_om.is_finite(), "kappa_om", self.kappa_om, "must be positive")?;
        check(self.delta_om.is_finite(), "delta_om", self.delta_om, "must be finite")?;
        check(self.g >= 0.0 && self.g.is_finite(), "g", self.g, "must be non-negative")?;
        check(
            self.eta_esc > 0.0 && self.eta_esc <= 1.0,
            "eta_esc_om",
            self.eta_esc,
            "escape efficiency must lie in (0, 1]",
        )?;
        if let Some(t) = self.temperature {
            check(t > 0.0 && t.is_finite(), "temperature", t, "must be positive")?;
        }
        if let Some(m) = self.mass {
            check(m > 0.0 && m.is_finite(), "mass", m, "must be positive")?;
        }
        Ok(())
    }

    pub fn q_m(&self) -> f64 {
        self.omega_m / self.gamma_m
    }

    /// Peak measurement rate `Γ_om = 4g²/κ_om`.
    pub fn gamma_om(&self) -> f64 {
        4.0 * self.g * self.g / self.kappa_om
    }

    pub fn kappa_in(&self) -> f64 {
        self.eta_esc * self.kappa_om
    }

    pub fn kappa_bath(&self) -> f64 {
        (1.0 - self.eta_esc) * self.kappa_om
    }

    pub fn with_coupling_scale(mut self, scale: f64) -> Self {
        self.g *= scale;
        self
    }
}

/// Negative-mass oscillator: meter cavity `c` coupled to a detuned ancilla
/// cavity `a` by beam-splitter and down-conversion processes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NmoParams {
    pub kappa_c: f64,
    pub kappa_a: f64,
    pub delta_c: f64,
    pub delta_a: f64,
    pub g_bs: f64,
    pub g_dc: f64,
    pub eta_esc: f64,
}

impl NmoParams {
    /// The ideally matched partner of `oms`: equal linewidths and couplings,
    /// ancilla detuned to `-ω_m` with linewidth `γ_m`.
    pub fn matched_to(oms: &OmsParams) -> Self {
        Self {
            kappa_c: oms.kappa_om,
            kappa_a: oms.gamma_m,
            delta_c: 0.0,
            delta_a: -oms.omega_m,
            g_bs: oms.g / 2.0,
            g_dc: oms.g / 2.0,
            eta_esc: 1.0,
        }
    }

    /// Matched partner except for the measurement-rate mismatch `mm`
    /// (`κ_c = ε κ_om`, `g_a² = δ g²`).
    pub fn with_rate_mismatch(oms: &OmsParams, mm: MismatchParams) -> Self {
        let g_a = mm.delta.sqrt() * oms.g;
        Self {
            kappa_c: mm.epsilon * oms.kappa_om,
            g_bs: g_a / 2.0,
            g_dc: g_a / 2.0,
            ..Self::matched_to(oms)
        }
    }

    /// Keeps `g_a = g_BS + g_DC` and sets `(g_BS − g_DC)/g_a = g_r`.
    pub fn with_relative_mismatch(mut self, g_r: f64) -> Self {
        let g_a = self.g_a();
        self.g_bs = 0.5 * (1.0 + g_r) * g_a;
        self.g_dc = 0.5 * (1.0 - g_r) * g_a;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check(self.kappa_c > 0.0 && self.kappa_c.is_finite(), "kappa_c", self.kappa_c, "must be positive")?;
        check(self.kappa_a >= 0.0 && self.kappa_a.is_finite(), "kappa_a", self.kappa_a, "must be non-negative")?;
        check(self.delta_c.is_finite(), "delta_c", self.delta_c, "must be finite")?;
        check(self.delta_a.is_finite(), "delta_a", self.delta_a, "must be finite")?;
        check(self.g_bs >= 0.0 && self.g_bs.is_finite(), "g_bs", self.g_bs, "must be non-negative")?;
        check(self.g_dc >= 0.0 && self.g_dc.is_finite(), "g_dc", self.g_dc, "must be non-negative")?;
        check(
            self.eta_esc > 0.0 && self.eta_esc <= 1.0,
            "eta_esc_c",
            self.eta_esc,
            "escape efficiency must lie in (0, 1]",
        )
    }

    pub fn g_a(&self) -> f64 {
        self.g_bs + self.g_dc
    }

    /// Relative coupling mismatch; zero when both couplings vanish.
    pub fn g_r(&self) -> f64 {
        let g_a = self.g_a();
        if g_a == 0.0 {
            0.0
        } else {
            (self.g_bs - self.g_dc) / g_a
        }
    }

    /// Peak measurement rate `Γ_a = 4g_a²/κ_c`.
    pub fn gamma_a(&self) -> f64 {
        4.0 * self.g_a().powi(2) / self.kappa_c
    }

    pub fn kappa_in(&self) -> f64 {
        self.eta_esc * self.kappa_c
    }

    pub fn kappa_bath(&self) -> f64 {
        (1.0 - self.eta_esc) * self.kappa_c
    }

    pub fn with_coupling_scale(mut self, scale: f64) -> Self {
        self.g_bs *= scale;
        self.g_dc *= scale;
        self
    }
}

/// Linewidth mismatch `ε = κ_c/κ_om` and coupling mismatch `δ = g_a²/g²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MismatchParams {
    pub epsilon: f64,
    pub delta: f64,
}

impl MismatchParams {
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
        check(epsilon > 0.0 && epsilon.is_finite(), "epsilon", epsilon, "must be positive")?;
        check(delta >= 0.0 && delta.is_finite(), "delta", delta, "must be non-negative")?;
        Ok(Self { epsilon, delta })
    }

    pub fn between(oms: &OmsParams, nmo: &NmoParams) -> Result<Self> {
        Self::new(nmo.kappa_c / oms.kappa_om, (nmo.g_a() / oms.g).powi(2))
    }
}

pub fn build_oms(p: &OmsParams) -> Result<LinearQuantumSystem> {
    p.validate()?;
    let (k, d, g) = (p.kappa_om, p.delta_om, p.g);
    #[rustfmt::skip]
    let drift = DMatrix::from_row_slice(4, 4, &[
        -k / 2.0, d,        0.0,        0.0,
        -d,       -k / 2.0, -g,         0.0,
        0.0,      0.0,      0.0,        p.omega_m,
        -g,       0.0,      -p.omega_m, -p.gamma_m,
    ]);
    let s_in = p.kappa_in().sqrt();
    let mut k_in = DMatrix::zeros(4, 2);
    k_in[(0, 0)] = s_in;
    k_in[(1, 1)] = s_in;
    let s_bath = p.kappa_bath().sqrt();
    let mut k_aux = DMatrix::zeros(4, 3);
    k_aux[(0, 0)] = s_bath;
    k_aux[(1, 1)] = s_bath;
    k_aux[(3, 2)] = p.gamma_m.sqrt();
    let channels = layout_channels(&[
        (ChannelKind::Vacuum, OMS_BATH, 2),
        (ChannelKind::Force, OMS_FORCE, 1),
    ]);
    LinearQuantumSystem::new(drift, k_in, k_aux, channels)
}

pub fn build_nmo(p: &NmoParams) -> Result<LinearQuantumSystem> {
    p.validate()?;
    let (kc, ka) = (p.kappa_c, p.kappa_a);
    let (dc, da) = (p.delta_c, p.delta_a);
    let minus = p.g_bs - p.g_dc;
    let plus = p.g_bs + p.g_dc;
    #[rustfmt::skip]
    let drift = DMatrix::from_row_slice(4, 4, &[
        -kc / 2.0, dc,        0.0,       minus,
        -dc,       -kc / 2.0, -plus,     0.0,
        0.0,       minus,     -ka / 2.0, da,
        -plus,     0.0,       -da,       -ka / 2.0,
    ]);
    let s_in = p.kappa_in().sqrt();
    let mut k_in = DMatrix::zeros(4, 2);
    k_in[(0, 0)] = s_in;
    k_in[(1, 1)] = s_in;
    let s_bath = p.kappa_bath().sqrt();
    let s_anc = ka.sqrt();
    let mut k_aux = DMatrix::zeros(4, 4);
    k_aux[(0, 0)] = s_bath;
    k_aux[(1, 1)] = s_bath;
    k_aux[(2, 2)] = s_anc;
    k_aux[(3, 3)] = s_anc;
    let channels = layout_channels(&[
        (ChannelKind::Vacuum, NMO_BATH, 2),
        (ChannelKind::Vacuum, NMO_ANCILLA, 2),
    ]);
    LinearQuantumSystem::new(drift, k_in, k_aux, channels)
}

fn cavity_chi(omega: f64, kappa: f64) -> C64 {
    C64::new(kappa / 2.0, omega).inv()
}

pub fn chi_om(omega: f64, p: &OmsParams) -> C64 {
    cavity_chi(omega, p.kappa_om)
}

pub fn chi_m(omega: f64, p: &OmsParams) -> C64 {
    let denom = C64::new(omega * omega - p.omega_m * p.omega_m, -p.gamma_m * omega);
    C64::from(p.omega_m) / denom
}

pub fn chi_c(omega: f64, p: &NmoParams) -> C64 {
    cavity_chi(omega, p.kappa_c)
}

pub fn chi_a(omega: f64, p: &NmoParams) -> C64 {
    let (da, ka) = (p.delta_a, p.kappa_a);
    let denom = C64::new(omega * omega - da * da - ka * ka / 4.0, -ka * omega);
    C64::from(da) / denom
}

fn lorentzian(omega: f64, kappa: f64) -> f64 {
    let half = kappa / 2.0;
    half * half / (omega * omega + half * half)
}

pub fn meas_strength_om(omega: f64, p: &OmsParams) -> f64 {
    p.gamma_om() * lorentzian(omega, p.kappa_om)
}

pub fn meas_strength_a(omega: f64, p: &NmoParams) -> f64 {
    p.gamma_a() * lorentzian(omega, p.kappa_c)
}

/// One backaction-cancellation condition and how far a parameter set is from it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub name: String,
    pub residual: f64,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchingReport {
    pub tolerance: f64,
    pub conditions: Vec<ConditionCheck>,
}

impl MatchingReport {
    pub fn all_satisfied(&self) -> bool {
        self.conditions.iter().all(|c| c.satisfied)
    }

    pub fn get(&self, name: &str) -> Option<&ConditionCheck> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

impl std::fmt::Display for MatchingReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "matching conditions (tolerance {:e}):", self.tolerance)?;
        for c in &self.conditions {
            let flag = if c.satisfied { "ok  " } else { "FAIL" };
            writeln!(f, "  [{flag}] {:<22} residual {:.6e}", c.name, c.residual)?;
        }
        Ok(())
    }
}

pub fn check_matching(oms: &OmsParams, nmo: &NmoParams, tol: f64) -> MatchingReport {
    check_matching_on(oms, nmo, tol, &Grid::default())
}

/// Residuals of the cancellation conditions; the measurement-strength residual
/// is the sup-norm of `|G_om − G_a|/G_om` over `grid`.
pub fn check_matching_on(oms: &OmsParams, nmo: &NmoParams, tol: f64, grid: &Grid) -> MatchingReport {
    let wm = oms.omega_m;
    let g_a = nmo.g_a();
    let balance = if g_a == 0.0 {
        0.0
    } else {
        (nmo.g_bs - nmo.g_dc).abs() / g_a
    };
    let strength = grid
        .omegas(wm)
        .into_iter()
        .map(|w| {
            let g_om = meas_strength_om(w, oms);
            let g_an = meas_strength_a(w, nmo);
            if g_om == 0.0 {
                if g_an == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                (g_om - g_an).abs() / g_om
            }
        })
        .fold(0.0, f64::max);
    let residuals = [
        ("coupling-balance", balance),
        ("measurement-strength", strength),
        ("ancilla-detuning", (nmo.delta_a + wm).abs() / wm),
        ("ancilla-linewidth", (nmo.kappa_a - oms.gamma_m).abs() / wm),
        ("resolved-sideband", nmo.kappa_a / wm),
        ("mechanical-quality", 1.0 / oms.q_m()),
    ];
    MatchingReport {
        tolerance: tol,
        conditions: residuals
            .into_iter()
            .map(|(name, residual)| ConditionCheck {
                name: name.to_owned(),
                residual,
                satisfied: residual <= tol,
            })
            .collect(),
    }
}
