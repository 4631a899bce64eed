//! Numerical solution of the Smith equation δ² = CRB(δ) with the exact η.
//!
//! g(δ) = δ² − CRB(δ) is negative just above 0 (the spacing CRB is positive
//! there, or infinite for coherent coincident sources) and positive once δ
//! exceeds the standard deviation of its own estimate. The solver brackets the
//! first sign change, locates it on a uniform scan, then bisects.

use std::f64::consts::PI;

use crate::arl::closed_form_arl;
use crate::crb::crb_of_spacing;
use crate::error::{Error, Result};
use crate::signals::Scenario;

/// Lower end of every bracket.
pub const DELTA_FLOOR: f64 = 1e-15;
/// Points in the scan that isolates the first sign change.
pub const SCAN_POINTS: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialGuess {
    /// Twice the closed-form ARL when it exists, α^{-1/2} otherwise.
    ClosedFormSeed,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub abs_tol: f64,
    pub max_bracket_expansions: usize,
    pub initial_guess: InitialGuess,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-12, max_bracket_expansions: 60, initial_guess: InitialGuess::ClosedFormSeed }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!("abs_tol must be positive, got {}", self.abs_tol)));
        }
        if let InitialGuess::Fixed(v) = self.initial_guess {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidConfig(format!("initial guess must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Diagnostics of one solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveReport {
    pub delta: f64,
    /// Final bisection interval.
    pub lower: f64,
    pub upper: f64,
    /// Upper end of the expanded search bracket.
    pub bracket_upper: f64,
    /// Sign changes of g seen by the scan over [DELTA_FLOOR, bracket_upper].
    pub sign_changes: usize,
    pub iterations: usize,
}

/// Largest spacing searched: π / max(d_m).
pub fn ambiguity_cap(sc: &Scenario) -> f64 {
    PI / sc.geometry().aperture()
}

/// g(δ) = δ² − CRB(δ), or None where the information is singular
/// (CRB unbounded, so g is effectively −∞).
fn residual(sc: &Scenario, delta: f64) -> Result<Option<f64>> {
    match crb_of_spacing(sc, delta) {
        Ok(crb) => Ok(Some(delta * delta - crb)),
        Err(Error::SingularInformation { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// δ² − CRB(δ) at the given spacing.
pub fn smith_residual(sc: &Scenario, delta: f64) -> Result<f64> {
    Ok(delta * delta - crb_of_spacing(sc, delta)?)
}

fn positive(g: Option<f64>) -> bool {
    matches!(g, Some(v) if v > 0.0)
}

pub fn numeric_arl(sc: &Scenario, cfg: &SolverConfig) -> Result<f64> {
    numeric_arl_report(sc, cfg).map(|r| r.delta)
}

pub fn numeric_arl_report(sc: &Scenario, cfg: &SolverConfig) -> Result<SolveReport> {
    cfg.validate()?;
    let cap = ambiguity_cap(sc);
    let seed = match cfg.initial_guess {
        InitialGuess::Fixed(v) => v,
        InitialGuess::ClosedFormSeed => match closed_form_arl(sc) {
            Ok(r) => 2.0 * r.delta,
            Err(_) => sc.geometry().alpha().powf(-0.5),
        },
    };

    let mut hi = seed.min(cap).max(2.0 * DELTA_FLOOR);
    let mut saw_finite = false;
    let mut last_psi = None;
    let mut found = false;
    for _ in 0..=cfg.max_bracket_expansions {
        let g = residual(sc, hi)?;
        match g {
            Some(_) => saw_finite = true,
            None => {
                if let Err(Error::SingularInformation { psi, .. }) = crb_of_spacing(sc, hi) {
                    last_psi = Some(psi);
                }
            }
        }
        if positive(g) {
            found = true;
            break;
        }
        if hi >= cap {
            break;
        }
        hi = (2.0 * hi).min(cap);
    }
    if !found {
        if !saw_finite {
            return Err(Error::SingularInformation { psi: last_psi.unwrap_or(0.0), delta: hi });
        }
        return Err(Error::NoBracket { cap });
    }

    // First sign change on a uniform scan of [floor, hi].
    let step = (hi - DELTA_FLOOR) / SCAN_POINTS as f64;
    let point = |i: usize| if i == SCAN_POINTS { hi } else { DELTA_FLOOR + step * i as f64 };
    let mut prev = residual(sc, DELTA_FLOOR)?;
    if positive(prev) {
        // CRB(δ) < δ² already at the floor: nothing to resolve.
        return Ok(SolveReport {
            delta: DELTA_FLOOR,
            lower: DELTA_FLOOR,
            upper: DELTA_FLOOR,
            bracket_upper: hi,
            sign_changes: 0,
            iterations: 0,
        });
    }
    let mut first = None;
    let mut sign_changes = 0;
    for i in 1..=SCAN_POINTS {
        let g = residual(sc, point(i))?;
        if positive(g) != positive(prev) {
            sign_changes += 1;
            if first.is_none() {
                first = Some(i);
            }
        }
        prev = g;
    }
    let i = first.expect("g(hi) > 0 and g(floor) <= 0");
    let (mut lo, mut up) = (point(i - 1), point(i));

    let mut iterations = 0;
    while up - lo > cfg.abs_tol {
        let mid = 0.5 * (lo + up);
        if mid <= lo || mid >= up {
            break;
        }
        if positive(residual(sc, mid)?) {
            up = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }

    // One interpolation step inside the final interval.
    let delta = match (residual(sc, lo)?, residual(sc, up)?) {
        (Some(gl), Some(gu)) if gu > gl => (lo - gl * (up - lo) / (gu - gl)).clamp(lo, up),
        _ => 0.5 * (lo + up),
    };

    Ok(SolveReport { delta, lower: lo, upper: up, bracket_upper: hi, sign_changes, iterations })
}
