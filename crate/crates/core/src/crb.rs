//! Fisher information and Cramér-Rao bounds for the electrical angles
//! ν₁, ν₂ at a given spacing Δ = ν₁ − ν₂.
//!
//! The unknowns are ξ = [ν₁, ν₂, σ²]. With R = σ²I the information matrix is
//! block diagonal: a 2×2 angle block plus the scalar MN/σ⁴ for σ².

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::signals::Scenario;

/// Ψ at or below this fraction of its coherence-free value 4N²SNR₁SNR₂α² is
/// treated as singular.
pub const SINGULAR_RTOL: f64 = 1e-14;

/// Σ d_m² e^{−j d_m Δ}.
fn weighted_phase_sum(sc: &Scenario, delta: f64) -> Complex64 {
    sc.geometry().positions().iter().map(|&d| Complex64::from_polar(d * d, -d * delta)).sum()
}

/// η(Δ) = s₁ᴴs₂ Σ d_m² e^{−j d_m Δ}, evaluated exactly.
pub fn eta(sc: &Scenario, delta: f64) -> Complex64 {
    sc.stats().inner() * weighted_phase_sum(sc, delta)
}

/// First-order expansion of η around Δ = 0: s₁ᴴs₂ (α − jΔβ).
pub fn eta_taylor(sc: &Scenario, delta: f64) -> Complex64 {
    let g = sc.geometry();
    sc.stats().inner() * Complex64::new(g.alpha(), -delta * g.beta())
}

/// Fisher information for ξ = [ν₁, ν₂, σ²].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fim {
    /// Angle block, symmetric.
    pub angle: [[f64; 2]; 2],
    /// Information on σ², decoupled from the angles.
    pub noise: f64,
}

impl Fim {
    pub fn determinant(&self) -> f64 {
        self.angle[0][0] * self.angle[1][1] - self.angle[0][1] * self.angle[1][0]
    }
}

pub fn fim(sc: &Scenario, delta: f64) -> Fim {
    let n = sc.snapshots() as f64;
    let alpha = sc.geometry().alpha();
    let off = 2.0 / sc.sigma2() * eta(sc, delta).re;
    Fim {
        angle: [[2.0 * n * alpha * sc.snr1(), off], [off, 2.0 * n * alpha * sc.snr2()]],
        noise: noise_information(sc),
    }
}

fn noise_information(sc: &Scenario) -> f64 {
    let mn = (sc.geometry().sensor_count() * sc.snapshots()) as f64;
    mn / (sc.sigma2() * sc.sigma2())
}

/// FIM computed from the raw waveforms by summing 2Re{∂μᴴ/∂ξ_i R⁻¹ ∂μ/∂ξ_j}
/// over all sensors and snapshots. Used to cross-check [`fim`].
pub fn fim_from_waveforms(sc: &Scenario, nu1: f64, nu2: f64) -> Fim {
    let g = sc.geometry();
    let (s1, s2) = (sc.sources().s1(), sc.sources().s2());
    // ∂x_m(t)/∂ν_i = j d_m e^{j ν_i d_m} s_i(t)
    let deriv = |nu: f64, s: &[Complex64]| -> Vec<Complex64> {
        let mut out = Vec::with_capacity(g.sensor_count() * s.len());
        for &st in s {
            for &d in g.positions() {
                out.push(Complex64::new(0.0, d) * Complex64::from_polar(1.0, nu * d) * st);
            }
        }
        out
    };
    let d1 = deriv(nu1, s1);
    let d2 = deriv(nu2, s2);
    let dot = |a: &[Complex64], b: &[Complex64]| -> f64 {
        2.0 / sc.sigma2() * a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>().re
    };
    let off = dot(&d1, &d2);
    Fim { angle: [[dot(&d1, &d1), off], [off, dot(&d2, &d2)]], noise: noise_information(sc) }
}

/// Ψ, the determinant of the angle block:
/// 4α²N²SNR₁SNR₂ − (4/σ⁴) Re²{η}.
///
/// Evaluated as 4N²SNR₁SNR₂ (α − r)(α + r) with r = Re{ρ Σ d² e^{−jdΔ}},
/// and α ∓ r summed term by term so that Ψ keeps full relative precision as
/// |ρ| → 1 and Δ → 0.
pub fn psi(sc: &Scenario, delta: f64) -> f64 {
    let n = sc.snapshots() as f64;
    let rho = sc.rho();
    let (mag, arg) = (rho.norm(), rho.arg());
    let (mut minus, mut plus) = (0.0, 0.0);
    for &d in sc.geometry().positions() {
        let half = 0.5 * (arg - d * delta);
        let w = d * d;
        minus += w * ((1.0 - mag) + 2.0 * mag * half.sin().powi(2));
        plus += w * ((1.0 - mag) + 2.0 * mag * half.cos().powi(2));
    }
    4.0 * n * n * sc.snr1() * sc.snr2() * minus * plus
}

fn checked_psi(sc: &Scenario, delta: f64) -> Result<f64> {
    let psi = psi(sc, delta);
    let n = sc.snapshots() as f64;
    let alpha = sc.geometry().alpha();
    let scale = 4.0 * n * n * sc.snr1() * sc.snr2() * alpha * alpha;
    if !(psi > SINGULAR_RTOL * scale) {
        return Err(Error::SingularInformation { psi, delta });
    }
    Ok(psi)
}

/// CRB entries of the angle block and of σ² at spacing Δ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrbReport {
    pub crb_nu1: f64,
    pub crb_nu2: f64,
    pub crb_cross: f64,
    pub crb_sigma2: f64,
    pub psi: f64,
    pub delta: f64,
}

impl CrbReport {
    /// CRB(Δ) = CRB(ν₁) + CRB(ν₂) − 2 CRB(ν₁, ν₂).
    pub fn spacing(&self) -> f64 {
        self.crb_nu1 + self.crb_nu2 - 2.0 * self.crb_cross
    }
}

pub fn crb_entries(sc: &Scenario, delta: f64) -> Result<CrbReport> {
    let psi = checked_psi(sc, delta)?;
    let n = sc.snapshots() as f64;
    let alpha = sc.geometry().alpha();
    let m = sc.geometry().sensor_count() as f64;
    Ok(CrbReport {
        crb_nu1: 2.0 * n * alpha * sc.snr2() / psi,
        crb_nu2: 2.0 * n * alpha * sc.snr1() / psi,
        crb_cross: -2.0 / sc.sigma2() * eta(sc, delta).re / psi,
        crb_sigma2: sc.sigma2() * sc.sigma2() / (m * n),
        psi,
        delta,
    })
}

/// CRB(Δ) = (2/Ψ)(N·SNR₂·α + N·SNR₁·α + (2/σ²) Re{η}).
pub fn crb_of_spacing(sc: &Scenario, delta: f64) -> Result<f64> {
    let psi = checked_psi(sc, delta)?;
    let n = sc.snapshots() as f64;
    let alpha = sc.geometry().alpha();
    let sum = n * alpha * (sc.snr1() + sc.snr2()) + 2.0 / sc.sigma2() * eta(sc, delta).re;
    Ok(2.0 / psi * sum)
}
