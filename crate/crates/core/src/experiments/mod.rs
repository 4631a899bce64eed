//! Scenario construction from flat parameters, single-point evaluation,
//! sweeps, closed-form-vs-numeric validation and the figure presets.

mod presets;
mod sweep;

pub use presets::{figure_preset, type1_geometry, type2_geometry, type3_geometry};
pub use sweep::{
    run_sweep, validate, write_csv, Grid, GridScale, SweepOutput, SweepRow, SweepSpec, SweepVar,
    ValidationPoint, ValidationReport, CSV_HEADER,
};

use num_complex::Complex64;

use crate::arl::{classify_case, closed_form_arl, quartic_coeffs};
use crate::crb::{crb_entries, CrbReport};
use crate::error::{Error, Result};
use crate::geometry::GeometrySpec;
use crate::signals::{make_pair, Scenario};
use crate::smith_solver::{numeric_arl, SolverConfig};

/// Which ARL evaluations to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Outputs {
    Closed,
    Numeric,
    #[default]
    Both,
}

impl Outputs {
    pub fn closed(&self) -> bool {
        matches!(self, Outputs::Closed | Outputs::Both)
    }

    pub fn numeric(&self) -> bool {
        matches!(self, Outputs::Numeric | Outputs::Both)
    }
}

/// Flat scenario description, as taken from CLI flags.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioParams {
    pub geometry: GeometrySpec,
    pub snapshots: usize,
    pub eps1: f64,
    pub eps2: f64,
    pub sigma2: f64,
    pub rho_re: f64,
    pub rho_im: f64,
}

impl Default for ScenarioParams {
    /// Six-sensor half-wavelength ULA (λ = 1), 100 snapshots, unit strengths
    /// and noise, uncorrelated sources.
    fn default() -> Self {
        Self {
            geometry: GeometrySpec::Ula { m: 6, d: 0.5 },
            snapshots: 100,
            eps1: 1.0,
            eps2: 1.0,
            sigma2: 1.0,
            rho_re: 0.0,
            rho_im: 0.0,
        }
    }
}

impl ScenarioParams {
    pub fn rho(&self) -> Complex64 {
        Complex64::new(self.rho_re, self.rho_im)
    }

    pub fn build(&self) -> Result<Scenario> {
        let geometry = self.geometry.build()?;
        let pair = make_pair(self.snapshots, self.eps1, self.eps2, self.rho())?;
        Scenario::new(geometry, pair, self.sigma2)
    }
}

/// Result of evaluating one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct PointRecord {
    pub delta_closed: Option<f64>,
    pub delta_numeric: Option<f64>,
    /// |closed − numeric| / numeric, when both exist.
    pub rel_gap: Option<f64>,
    /// `quartic`, `quadratic`, `uncorrelated` or `no-closed-form`.
    pub case_tag: Option<String>,
    /// `ok`, or the failing evaluations' tags joined by `;`.
    pub status: String,
    pub closed_error: Option<Error>,
    pub numeric_error: Option<Error>,
    pub approx_error_hint: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    /// Ψ at the reported δ (numeric when available, else closed form).
    pub psi: Option<f64>,
    pub crb: Option<CrbReport>,
}

impl PointRecord {
    /// Record for a scenario that could not be built.
    pub fn failed(err: Error) -> Self {
        Self {
            delta_closed: None,
            delta_numeric: None,
            rel_gap: None,
            case_tag: None,
            status: err.status_tag().to_string(),
            closed_error: None,
            numeric_error: None,
            approx_error_hint: None,
            alpha: None,
            beta: None,
            psi: None,
            crb: None,
        }
    }
}

/// Evaluates a built scenario. Evaluation failures land in `status`.
pub fn evaluate(sc: &Scenario, outputs: Outputs, cfg: &SolverConfig) -> PointRecord {
    let inputs = quartic_coeffs(sc);
    let case_tag = match classify_case(&inputs) {
        Ok(case) => Some(case.tag().to_string()),
        Err(e) => Some(e.status_tag().to_string()),
    };

    let mut status = Vec::new();
    let (mut delta_closed, mut closed_error, mut approx_error_hint) = (None, None, None);
    if outputs.closed() {
        match closed_form_arl(sc) {
            Ok(r) => {
                delta_closed = Some(r.delta);
                approx_error_hint = r.approx_error_hint;
            }
            Err(e) => {
                status.push(e.status_tag().to_string());
                closed_error = Some(e);
            }
        }
    }
    let (mut delta_numeric, mut numeric_error) = (None, None);
    if outputs.numeric() {
        match numeric_arl(sc, cfg) {
            Ok(d) => delta_numeric = Some(d),
            Err(e) => {
                status.push(format!("numeric-{}", e.status_tag()));
                numeric_error = Some(e);
            }
        }
    }
    let rel_gap = match (delta_closed, delta_numeric) {
        (Some(c), Some(n)) => Some((c - n).abs() / n),
        _ => None,
    };
    let crb = delta_numeric.or(delta_closed).and_then(|d| crb_entries(sc, d).ok());
    PointRecord {
        delta_closed,
        delta_numeric,
        rel_gap,
        case_tag,
        status: if status.is_empty() { "ok".to_string() } else { status.join(";") },
        closed_error,
        numeric_error,
        approx_error_hint,
        alpha: Some(inputs.alpha),
        beta: Some(inputs.beta),
        psi: crb.map(|c| c.psi),
        crb,
    }
}

/// Builds the scenario and evaluates it. Invalid parameters are an error.
pub fn run_point(params: &ScenarioParams, outputs: Outputs, cfg: &SolverConfig) -> Result<PointRecord> {
    let sc = params.build()?;
    Ok(evaluate(&sc, outputs, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_point_is_uncorrelated() {
        let r = run_point(&ScenarioParams::default(), Outputs::Both, &SolverConfig::default()).unwrap();
        assert_eq!(r.case_tag.as_deref(), Some("uncorrelated"));
        assert_eq!(r.status, "ok");
        assert!(r.rel_gap.unwrap() < 1e-10);
        assert_eq!(r.alpha, Some(13.75));
    }

    #[test]
    fn coherent_point_reports_status_and_keeps_numeric() {
        let params = ScenarioParams { rho_re: 1.0, ..Default::default() };
        let r = run_point(&params, Outputs::Both, &SolverConfig::default()).unwrap();
        assert_eq!(r.status, "no-closed-form");
        assert_eq!(r.case_tag.as_deref(), Some("no-closed-form"));
        assert!(r.delta_closed.is_none());
        assert!(r.delta_numeric.unwrap() > 0.0);
        assert!(r.psi.unwrap() > 0.0);
    }

    #[test]
    fn table_geometry_flag() {
        let params =
            ScenarioParams { geometry: "pattern:.xx.xx..,d=0.5".parse().unwrap(), ..Default::default() };
        let sc = params.build().unwrap();
        assert_eq!(sc.geometry().positions(), &[0.0, 0.5, 1.5, 2.0]);
        let r = run_point(&params, Outputs::Closed, &SolverConfig::default()).unwrap();
        assert!(r.delta_numeric.is_none());
        assert!(r.delta_closed.is_some());
    }

    #[test]
    fn invalid_correlation_is_an_error() {
        let params = ScenarioParams { rho_re: 0.9, rho_im: 0.9, ..Default::default() };
        assert!(matches!(
            run_point(&params, Outputs::Both, &SolverConfig::default()),
            Err(Error::CorrelationOutOfRange(_))
        ));
    }
}
