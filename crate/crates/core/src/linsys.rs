//! Frequency-domain engine for linear quantum systems.
//!
//! A system is described by its drift matrix `M`, the input matrix of the
//! measured port `K_in` (two quadrature columns) and the input matrix of all
//! auxiliary noise ports `K_aux`. With the convention `ẋ = iω x` the output
//! quadratures of the measured port are
//!
//! ```text
//! x_out = (K_inᵀ (iω − M)⁻¹ K_in − 1) x_in + K_inᵀ (iω − M)⁻¹ K_aux x_aux
//! ```
//!
//! Transfer sets can be attenuated (mixing in vacuum) and cascaded, and the
//! symmetrized output spectral density follows from the channel registry.

use std::ops::Range;

use nalgebra::{Complex, DMatrix, Matrix2, Matrix2xX};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Symmetrized spectral density of one vacuum quadrature.
pub const VACUUM_PSD: f64 = 0.5;

/// Numerical guards of the engine.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EngineLimits {
    /// 1-norm condition number of `(iω − M)` above which the resolvent is
    /// treated as singular.
    pub condition_cap: f64,
    /// Smallest admissible `|t_force→phase|²` for added-noise extraction.
    pub coefficient_floor: f64,
}

impl Default for EngineLimits {
    fn default() -> Self {
        Self {
            condition_cap: 1e12,
            coefficient_floor: 1e-100,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelKind {
    /// Vacuum noise, 1/2 per quadrature.
    Vacuum,
    /// Force on a mechanical momentum: carries signal plus thermal noise.
    Force,
    /// Brownian force only, separate from the signal port.
    ThermalForce,
}

impl ChannelKind {
    fn is_force_like(self) -> bool {
        matches!(self, ChannelKind::Force | ChannelKind::ThermalForce)
    }
}

/// One physical noise port and the auxiliary columns it drives.
#[derive(Clone, Debug, PartialEq)]
pub struct AuxChannel {
    pub kind: ChannelKind,
    pub label: String,
    pub columns: Range<usize>,
}

impl AuxChannel {
    pub fn width(&self) -> usize {
        self.columns.len()
    }

    /// Diagonal input spectral density of each column of this channel.
    pub fn input_psd(&self, force_psd: f64, thermal_n: f64) -> f64 {
        match self.kind {
            ChannelKind::Vacuum => VACUUM_PSD,
            ChannelKind::Force => force_psd + thermal_n,
            ChannelKind::ThermalForce => thermal_n,
        }
    }

    fn shifted(&self, offset: usize) -> Self {
        Self {
            kind: self.kind,
            label: self.label.clone(),
            columns: self.columns.start + offset..self.columns.end + offset,
        }
    }
}

/// Lays out channels contiguously from `(kind, label, width)` triples.
pub fn layout_channels(spec: &[(ChannelKind, &str, usize)]) -> Vec<AuxChannel> {
    let mut next = 0;
    spec.iter()
        .map(|&(kind, label, width)| {
            let ch = AuxChannel {
                kind,
                label: label.to_owned(),
                columns: next..next + width,
            };
            next += width;
            ch
        })
        .collect()
}

/// State-space triple `(M, K_in, K_aux)` with its channel registry.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearQuantumSystem {
    drift: DMatrix<f64>,
    k_in: DMatrix<f64>,
    k_aux: DMatrix<f64>,
    channels: Vec<AuxChannel>,
}

impl LinearQuantumSystem {
    pub fn new(
        drift: DMatrix<f64>,
        k_in: DMatrix<f64>,
        k_aux: DMatrix<f64>,
        channels: Vec<AuxChannel>,
    ) -> Result<Self> {
        let n = drift.nrows();
        if drift.ncols() != n || n == 0 {
            return Err(Error::Shape(format!(
                "drift must be square and non-empty, got {}x{}",
                drift.nrows(),
                drift.ncols()
            )));
        }
        if k_in.nrows() != n || k_aux.nrows() != n {
            return Err(Error::Shape(format!(
                "row counts disagree: drift {n}, k_in {}, k_aux {}",
                k_in.nrows(),
                k_aux.nrows()
            )));
        }
        if k_in.ncols() != 2 {
            return Err(Error::Shape(format!(
                "k_in must have 2 columns, got {}",
                k_in.ncols()
            )));
        }
        validate_registry(&channels, k_aux.ncols())?;
        for ch in channels.iter().filter(|c| c.kind.is_force_like()) {
            if ch.width() != 1 {
                return Err(Error::Shape(format!(
                    "force channel `{}` must drive exactly one column",
                    ch.label
                )));
            }
            let col = ch.columns.start;
            let driven = (0..n).filter(|&r| k_aux[(r, col)] != 0.0).count();
            if driven > 1 {
                return Err(Error::Shape(format!(
                    "force channel `{}` drives {driven} state rows",
                    ch.label
                )));
            }
        }
        let all_finite = drift.iter().chain(k_in.iter()).chain(k_aux.iter()).all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::Shape("system matrices contain non-finite entries".into()));
        }
        Ok(Self {
            drift,
            k_in,
            k_aux,
            channels,
        })
    }

    pub fn dim(&self) -> usize {
        self.drift.nrows()
    }

    pub fn drift(&self) -> &DMatrix<f64> {
        &self.drift
    }

    pub fn k_in(&self) -> &DMatrix<f64> {
        &self.k_in
    }

    pub fn k_aux(&self) -> &DMatrix<f64> {
        &self.k_aux
    }

    pub fn channels(&self) -> &[AuxChannel] {
        &self.channels
    }

    /// `(iω − M)⁻¹`, rejected when its condition number exceeds the cap.
    pub fn resolvent(&self, omega: f64, limits: &EngineLimits) -> Result<DMatrix<C64>> {
        let n = self.dim();
        let mut a = self.drift.map(|m| C64::new(-m, 0.0));
        for i in 0..n {
            a[(i, i)] += C64::new(0.0, omega);
        }
        let norm = one_norm(&a);
        let inv = a.lu().try_inverse().ok_or(Error::SingularResolvent {
            omega,
            condition: f64::INFINITY,
        })?;
        let condition = norm * one_norm(&inv);
        if !condition.is_finite() || condition > limits.condition_cap {
            return Err(Error::SingularResolvent { omega, condition });
        }
        Ok(inv)
    }

    pub fn transfer(&self, omega: f64) -> Result<TransferSet> {
        transfer_with(self, omega, &EngineLimits::default())
    }
}

fn validate_registry(channels: &[AuxChannel], ncols: usize) -> Result<()> {
    let mut next = 0;
    for ch in channels {
        if ch.columns.start != next || ch.columns.is_empty() {
            return Err(Error::Shape(format!(
                "channel `{}` covers columns {:?}, expected to start at {next}",
                ch.label, ch.columns
            )));
        }
        next = ch.columns.end;
    }
    if next != ncols {
        return Err(Error::Shape(format!(
            "channels cover {next} auxiliary columns, k_aux has {ncols}"
        )));
    }
    Ok(())
}

fn one_norm(a: &DMatrix<C64>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Transfer matrices from every input to the measured output quadratures at
/// one angular frequency.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferSet {
    omega: f64,
    t_in: Matrix2<C64>,
    t_aux: Matrix2xX<C64>,
    channels: Vec<AuxChannel>,
}

impl TransferSet {
    pub fn new(
        omega: f64,
        t_in: Matrix2<C64>,
        t_aux: Matrix2xX<C64>,
        channels: Vec<AuxChannel>,
    ) -> Result<Self> {
        validate_registry(&channels, t_aux.ncols())?;
        Ok(Self {
            omega,
            t_in,
            t_aux,
            channels,
        })
    }

    /// A lossless passthrough with no auxiliary inputs.
    pub fn identity(omega: f64) -> Self {
        Self {
            omega,
            t_in: Matrix2::identity(),
            t_aux: Matrix2xX::zeros(0),
            channels: Vec::new(),
        }
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn t_in(&self) -> &Matrix2<C64> {
        &self.t_in
    }

    pub fn t_aux(&self) -> &Matrix2xX<C64> {
        &self.t_aux
    }

    pub fn channels(&self) -> &[AuxChannel] {
        &self.channels
    }

    /// Elementwise complex conjugate, i.e. the transfer set at `-ω`.
    pub fn conj(&self) -> Self {
        Self {
            omega: -self.omega,
            t_in: self.t_in.map(|z| z.conj()),
            t_aux: self.t_aux.map(|z| z.conj()),
            channels: self.channels.clone(),
        }
    }

    /// Full transfer `𝒯 = (T_in, T_aux)` as a 2×(2+m) matrix.
    pub fn full(&self) -> Matrix2xX<C64> {
        let m = self.t_aux.ncols();
        let mut t = Matrix2xX::zeros(2 + m);
        t.fixed_columns_mut::<2>(0).copy_from(&self.t_in);
        t.columns_mut(2, m).copy_from(&self.t_aux);
        t
    }

    /// Attenuates the measured port by `eta`, mixing in a fresh vacuum port
    /// labelled `label`.
    pub fn with_loss(&self, eta: f64, label: &str) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::Domain {
                name: "eta",
                value: eta,
                reason: "efficiency must lie in [0, 1]",
            });
        }
        if eta == 1.0 {
            return Ok(self.clone());
        }
        let keep = eta.sqrt();
        let leak = (1.0 - eta).sqrt();
        let m = self.t_aux.ncols();
        let mut t_aux = Matrix2xX::zeros(m + 2);
        t_aux.columns_mut(0, m).copy_from(&(self.t_aux.clone() * C64::from(keep)));
        t_aux[(0, m)] = C64::from(leak);
        t_aux[(1, m + 1)] = C64::from(leak);
        let mut channels = self.channels.clone();
        channels.push(AuxChannel {
            kind: ChannelKind::Vacuum,
            label: label.to_owned(),
            columns: m..m + 2,
        });
        Ok(Self {
            omega: self.omega,
            t_in: self.t_in * C64::from(keep),
            t_aux,
            channels,
        })
    }

    /// The unique force channel and its coefficient onto the phase quadrature.
    pub fn force_coefficient(&self) -> Result<(usize, C64)> {
        let forces: Vec<&AuxChannel> =
            self.channels.iter().filter(|c| c.kind == ChannelKind::Force).collect();
        if forces.len() != 1 {
            return Err(Error::ForceChannelCount(forces.len()));
        }
        let col = forces[0].columns.start;
        Ok((col, self.t_aux[(1, col)]))
    }
}

pub fn transfer(system: &LinearQuantumSystem, omega: f64) -> Result<TransferSet> {
    transfer_with(system, omega, &EngineLimits::default())
}

pub fn transfer_with(
    system: &LinearQuantumSystem,
    omega: f64,
    limits: &EngineLimits,
) -> Result<TransferSet> {
    let resolvent = system.resolvent(omega, limits)?;
    let k_in = system.k_in.map(C64::from);
    let k_aux = system.k_aux.map(C64::from);
    let readout = k_in.transpose() * resolvent;
    let t_in_full = &readout * k_in;
    let t_aux_full = &readout * k_aux;

    let mut t_in = Matrix2::from_fn(|r, c| t_in_full[(r, c)]);
    t_in -= Matrix2::identity();
    let t_aux = Matrix2xX::from_fn(t_aux_full.ncols(), |r, c| t_aux_full[(r, c)]);
    Ok(TransferSet {
        omega,
        t_in,
        t_aux,
        channels: system.channels.clone(),
    })
}

pub fn apply_loss(t: &TransferSet, eta: f64) -> Result<TransferSet> {
    t.with_loss(eta, "loss")
}

/// Feeds the output of `first` into the measured port of `second`.
pub fn cascade(first: &TransferSet, second: &TransferSet) -> Result<TransferSet> {
    if first.omega != second.omega {
        return Err(Error::FrequencyMismatch {
            first: first.omega,
            second: second.omega,
        });
    }
    let m1 = first.t_aux.ncols();
    let m2 = second.t_aux.ncols();
    let mut t_aux = Matrix2xX::zeros(m1 + m2);
    t_aux.columns_mut(0, m1).copy_from(&(second.t_in * &first.t_aux));
    t_aux.columns_mut(m1, m2).copy_from(&second.t_aux);
    let channels = first
        .channels
        .iter()
        .cloned()
        .chain(second.channels.iter().map(|c| c.shifted(m1)))
        .collect();
    Ok(TransferSet {
        omega: first.omega,
        t_in: second.t_in * first.t_in,
        t_aux,
        channels,
    })
}

/// Symmetrized output spectral density of the two measured quadratures.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralMatrix {
    pub omega: f64,
    pub s_out: Matrix2<f64>,
}

impl SpectralMatrix {
    pub fn amplitude(&self) -> f64 {
        self.s_out[(0, 0)]
    }

    pub fn phase(&self) -> f64 {
        self.s_out[(1, 1)]
    }
}

/// Diagonal of `S_in`: the measured port first, then every auxiliary column.
pub fn input_spectrum(channels: &[AuxChannel], force_psd: f64, thermal_n: f64) -> Vec<f64> {
    let mut diag = vec![VACUUM_PSD, VACUUM_PSD];
    for ch in channels {
        let s = ch.input_psd(force_psd, thermal_n);
        diag.extend(std::iter::repeat_n(s, ch.width()));
    }
    diag
}

/// `S_out = ½(𝒯 S_in 𝒯ᴴ + c.c.)`, where `𝒯ᴴ(ω) = 𝒯(−ω)ᵀ`.
pub fn output_spectrum(t: &TransferSet, force_psd: f64, thermal_n: f64) -> Result<SpectralMatrix> {
    if !(force_psd >= 0.0) || !force_psd.is_finite() {
        return Err(Error::Domain {
            name: "force_psd",
            value: force_psd,
            reason: "must be finite and non-negative",
        });
    }
    if !(thermal_n >= 0.0) || !thermal_n.is_finite() {
        return Err(Error::Domain {
            name: "thermal_n",
            value: thermal_n,
            reason: "must be finite and non-negative",
        });
    }
    let full = t.full();
    let diag = input_spectrum(&t.channels, force_psd, thermal_n);
    let mut s_out = Matrix2::zeros();
    for (k, &s) in diag.iter().enumerate() {
        if s == 0.0 {
            continue;
        }
        let col = full.column(k);
        for r in 0..2 {
            for c in 0..2 {
                s_out[(r, c)] += s * (col[r] * col[c].conj()).re;
            }
        }
    }
    Ok(SpectralMatrix {
        omega: t.omega,
        s_out,
    })
}

pub fn added_force_noise(t: &TransferSet, thermal_n: f64) -> Result<f64> {
    added_force_noise_with(t, thermal_n, &EngineLimits::default())
}

/// Added force noise: the phase-quadrature output PSD with the signal switched
/// off, referred back to the force port through `|t_force→phase|²`.
pub fn added_force_noise_with(t: &TransferSet, thermal_n: f64, limits: &EngineLimits) -> Result<f64> {
    let (_, coef) = t.force_coefficient()?;
    let gain = coef.norm_sqr();
    if !(gain >= limits.coefficient_floor) {
        return Err(Error::VanishingCoefficient {
            omega: t.omega,
            coefficient: gain,
        });
    }
    let s = output_spectrum(t, 0.0, thermal_n)?;
    Ok(s.phase() / gain)
}
