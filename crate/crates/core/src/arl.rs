//! Closed-form angular resolution limit.
//!
//! Linearizing η around Δ = 0 turns the Smith equation δ² = CRB(δ) into the
//! quartic
//!
//! ```text
//! D²δ⁴ + 2CDδ³ + (C² − AB)δ² + Dδ + (A + B)/2 + C = 0
//! ```
//!
//! with A = N·SNR₁·α, B = N·SNR₂·α, C = N√(SNR₁SNR₂)·ρ̄·α and
//! D = N√(SNR₁SNR₂)·ρ̃·β. The closed form drops the odd-degree terms and
//! splits on the correlation factor ρ = ρ̄ + jρ̃:
//!
//! * ρ̃ ≠ 0: δ² = (γ/κ)(1 − √(1 − αкφ/γ²))
//! * ρ̃ = 0, |ρ̄| < 1: δ² = φα/(2γ)
//! * ρ̃ = 0, |ρ̄| = 1: no closed form
//!
//! where γ = (1 − ρ̄²)α², κ = 2ρ̃²β² and
//! φ = (1/N)(1/SNR₁ + 1/SNR₂ + 2ρ̄/√(SNR₁SNR₂)).

use std::fmt;

use crate::error::{Error, Result};
use crate::signals::Scenario;

/// |ρ̃| below this is treated as zero.
pub const ZERO_IMAG_TOL: f64 = 1e-12;
/// |ρ̄| within this of 1 (with ρ̃ = 0) counts as fully correlated.
pub const FULL_CORRELATION_TOL: f64 = 1e-12;

/// Coefficients of the linearized Smith quartic and the derived γ, κ, φ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArlInputs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub gamma: f64,
    pub kappa: f64,
    pub phi: f64,
    pub alpha: f64,
    pub beta: f64,
    pub rho_re: f64,
    pub rho_im: f64,
}

impl ArlInputs {
    /// αкφ/γ². The closed-form root is real only when this is ≤ 1.
    pub fn domain_ratio(&self) -> f64 {
        if self.kappa == 0.0 {
            return 0.0;
        }
        self.alpha * self.kappa * self.phi / (self.gamma * self.gamma)
    }

    /// Full quartic, odd terms included.
    pub fn quartic(&self, delta: f64) -> f64 {
        let (c, d) = (self.c, self.d);
        let d2 = delta * delta;
        d * d * d2 * d2
            + 2.0 * c * d * d2 * delta
            + (c * c - self.a * self.b) * d2
            + d * delta
            + 0.5 * (self.a + self.b)
            + c
    }

    /// Quartic with the odd-degree terms removed.
    pub fn even_quartic(&self, delta: f64) -> f64 {
        let d2 = delta * delta;
        self.d * self.d * d2 * d2
            + (self.c * self.c - self.a * self.b) * d2
            + 0.5 * (self.a + self.b)
            + self.c
    }

    /// Sum of magnitudes of the even quartic's terms, a scale for residuals.
    pub fn even_quartic_scale(&self, delta: f64) -> f64 {
        let d2 = delta * delta;
        (self.d * self.d * d2 * d2).abs()
            + ((self.c * self.c - self.a * self.b) * d2).abs()
            + (0.5 * (self.a + self.b) + self.c).abs()
    }
}

pub fn quartic_coeffs(sc: &Scenario) -> ArlInputs {
    let n = sc.snapshots() as f64;
    let (snr1, snr2) = (sc.snr1(), sc.snr2());
    let root = (snr1 * snr2).sqrt();
    let alpha = sc.geometry().alpha();
    let beta = sc.geometry().beta();
    let rho = sc.rho();
    ArlInputs {
        a: n * snr1 * alpha,
        b: n * snr2 * alpha,
        c: n * root * rho.re * alpha,
        d: n * root * rho.im * beta,
        gamma: (1.0 - rho.re * rho.re) * alpha * alpha,
        kappa: 2.0 * rho.im * rho.im * beta * beta,
        phi: (1.0 / snr1 + 1.0 / snr2 + 2.0 * rho.re / root) / n,
        alpha,
        beta,
        rho_re: rho.re,
        rho_im: rho.im,
    }
}

/// Which branch of the closed form produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArlCase {
    /// ρ̃ ≠ 0.
    Quartic,
    /// ρ̃ = 0, 0 < |ρ̄| < 1.
    Quadratic,
    /// ρ = 0.
    Uncorrelated,
}

impl ArlCase {
    pub fn tag(&self) -> &'static str {
        match self {
            ArlCase::Quartic => "quartic",
            ArlCase::Quadratic => "quadratic",
            ArlCase::Uncorrelated => "uncorrelated",
        }
    }
}

impl fmt::Display for ArlCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArlResult {
    /// Resolution limit in the electrical-angle domain.
    pub delta: f64,
    pub case: ArlCase,
    /// αкφ/γ² for the quartic branch.
    pub approx_error_hint: Option<f64>,
}

/// Branch selection; fully correlated real ρ maps to `NoClosedForm`.
pub fn classify_case(inputs: &ArlInputs) -> Result<ArlCase> {
    if inputs.rho_im.abs() >= ZERO_IMAG_TOL {
        return Ok(ArlCase::Quartic);
    }
    if inputs.rho_re.abs() >= 1.0 - FULL_CORRELATION_TOL {
        return Err(Error::NoClosedForm { rho_re: inputs.rho_re });
    }
    if inputs.rho_re.abs() < ZERO_IMAG_TOL {
        Ok(ArlCase::Uncorrelated)
    } else {
        Ok(ArlCase::Quadratic)
    }
}

pub fn closed_form_arl(sc: &Scenario) -> Result<ArlResult> {
    let inputs = quartic_coeffs(sc);
    match classify_case(&inputs)? {
        ArlCase::Quartic => {
            let ratio = inputs.domain_ratio();
            if !(ratio <= 1.0) || inputs.gamma <= 0.0 {
                return Err(Error::DomainError { ratio });
            }
            // (γ/κ)(1 − √(1 − x)) rewritten as αφ / (γ(1 + √(1 − x))) to
            // avoid cancellation for small x.
            let delta2 = inputs.alpha * inputs.phi / (inputs.gamma * (1.0 + (1.0 - ratio).sqrt()));
            Ok(ArlResult { delta: delta2.sqrt(), case: ArlCase::Quartic, approx_error_hint: Some(ratio) })
        }
        case => Ok(ArlResult {
            delta: (inputs.phi * inputs.alpha / (2.0 * inputs.gamma)).sqrt(),
            case,
            approx_error_hint: None,
        }),
    }
}

/// The larger root of the even quartic, (γ/κ)(1 + √(1 − αкφ/γ²)), which the
/// closed form discards. Only defined on the quartic branch.
pub fn rejected_root(sc: &Scenario) -> Result<f64> {
    let inputs = quartic_coeffs(sc);
    match classify_case(&inputs)? {
        ArlCase::Quartic => {
            let ratio = inputs.domain_ratio();
            if !(ratio <= 1.0) || inputs.gamma <= 0.0 {
                return Err(Error::DomainError { ratio });
            }
            Ok((inputs.gamma / inputs.kappa * (1.0 + (1.0 - ratio).sqrt())).sqrt())
        }
        _ => Err(Error::DomainError { ratio: 0.0 }),
    }
}

/// Limit of the ARL as SNR₁ → ∞ at fixed SNR₂: √(α / (2γ N SNR₂)).
pub fn weak_signal_limit(sc: &Scenario) -> Result<f64> {
    let inputs = quartic_coeffs(sc);
    if inputs.rho_re.abs() >= 1.0 - FULL_CORRELATION_TOL {
        return Err(Error::NoClosedForm { rho_re: inputs.rho_re });
    }
    let n = sc.snapshots() as f64;
    Ok((inputs.alpha / (2.0 * inputs.gamma * n * sc.snr2())).sqrt())
}

/// Converts an electrical-angle separation into a DOA separation around the
/// centre direction `theta0`: δθ ≈ δν / (k cos θ₀).
pub fn doa_separation(delta_nu: f64, wavenumber: f64, theta0: f64) -> f64 {
    delta_nu / (wavenumber * theta0.cos())
}
