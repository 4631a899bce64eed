//! Sweeps behind the published figures. All use the six-sensor
//! half-wavelength ULA with 100 snapshots unless the figure varies geometry.

use super::sweep::{Grid, GridScale, SweepSpec, SweepVar};
use super::{Outputs, ScenarioParams};
use crate::error::{Error, Result};
use crate::geometry::GeometrySpec;

const HALF_WAVELENGTH: f64 = 0.5;
const FIGURE_GRID_POINTS: usize = 50;

/// Eight-slot array missing the outer sensors (reduced aperture).
pub fn type1_geometry() -> GeometrySpec {
    GeometrySpec::Pattern { marks: ".xx.xx..".into(), d: HALF_WAVELENGTH }
}

/// Eight-slot array missing four inner sensors (full aperture).
pub fn type2_geometry() -> GeometrySpec {
    GeometrySpec::Pattern { marks: "x....xxx".into(), d: HALF_WAVELENGTH }
}

/// Fully populated eight-slot array.
pub fn type3_geometry() -> GeometrySpec {
    GeometrySpec::Pattern { marks: "xxxxxxxx".into(), d: HALF_WAVELENGTH }
}

fn linear(start: f64, stop: f64) -> Grid {
    Grid::Range { start, stop, count: FIGURE_GRID_POINTS, scale: GridScale::Linear }
}

fn rho_label(re: f64, im: f64) -> String {
    if im == 0.0 {
        format!("rho={re}")
    } else if im < 0.0 {
        format!("rho={re}{im}j")
    } else {
        format!("rho={re}+{im}j")
    }
}

/// Sweep specs for figure 1 through 5.
pub fn figure_preset(figure: u8) -> Result<Vec<SweepSpec>> {
    let base = ScenarioParams::default();
    let specs = match figure {
        // δ vs σ², closed form against the numeric solver.
        1 => [(0.5, 0.5), (-0.5, 0.0)]
            .into_iter()
            .map(|(re, im)| {
                SweepSpec::new(
                    SweepVar::Sigma2,
                    Grid::Range { start: 1e-2, stop: 1.0, count: 25, scale: GridScale::Log },
                    ScenarioParams { rho_re: re, rho_im: im, ..base.clone() },
                    Outputs::Both,
                )
                .labelled(rho_label(re, im))
            })
            .collect(),
        // δ vs |ρ̃| at ρ̄ = 0.5.
        2 => vec![SweepSpec::new(
            SweepVar::RhoIm,
            linear(0.0, 0.86),
            ScenarioParams { rho_re: 0.5, ..base },
            Outputs::Both,
        )
        .labelled("rho_re=0.5")],
        // δ vs |ρ̃| for several ρ̄.
        3 => [0.0, 0.3, 0.5, 0.7, 0.9]
            .into_iter()
            .map(|re| {
                SweepSpec::new(
                    SweepVar::RhoIm,
                    linear(0.0, 1.0),
                    ScenarioParams { rho_re: re, ..base.clone() },
                    Outputs::Both,
                )
                .labelled(format!("rho_re={re}"))
            })
            .collect(),
        // δ vs ρ̄ for several ρ̃.
        4 => [0.0, 0.2, 0.4]
            .into_iter()
            .map(|im| {
                SweepSpec::new(
                    SweepVar::RhoRe,
                    linear(-0.9, 0.9),
                    ScenarioParams { rho_im: im, ..base.clone() },
                    Outputs::Both,
                )
                .labelled(format!("rho_im={im}"))
            })
            .collect(),
        // δ vs ε₁ (ε₂ = 1) for the three array types.
        5 => [("type1", type1_geometry()), ("type2", type2_geometry()), ("type3", type3_geometry())]
            .into_iter()
            .map(|(name, geometry)| {
                SweepSpec::new(
                    SweepVar::Eps1,
                    Grid::Range {
                        start: 1.0,
                        stop: 1000.0,
                        count: FIGURE_GRID_POINTS,
                        scale: GridScale::Log,
                    },
                    ScenarioParams { geometry, rho_re: 0.5, rho_im: 0.5, ..base.clone() },
                    Outputs::Both,
                )
                .labelled(format!("geometry={name}"))
            })
            .collect(),
        other => return Err(Error::InvalidSweep(format!("no figure preset {other}; expected 1..5"))),
    };
    Ok(specs)
}
