//! Linear sensor arrays.
//!
//! Positions are stored relative to the first (leftmost) sensor, which sits
//! at exactly 0. The moments α = Σ d_m² and β = Σ d_m³ depend on that origin,
//! so every constructor re-references the positions before storing them.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Wavenumber for λ = 1, the default unit convention.
pub const UNIT_WAVENUMBER: f64 = 2.0 * PI;

#[derive(Debug, Clone, PartialEq)]
pub struct ArrayGeometry {
    positions: Vec<f64>,
    wavenumber: f64,
}

impl ArrayGeometry {
    /// Builds a geometry from arbitrary sensor coordinates.
    ///
    /// The coordinates must be finite and strictly increasing; they are
    /// translated so the first one is at 0.
    pub fn from_positions(positions: &[f64]) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::InvalidGeometry("no sensors".into()));
        }
        if positions.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidGeometry("non-finite sensor position".into()));
        }
        if positions.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGeometry("positions must be strictly increasing".into()));
        }
        let origin = positions[0];
        let positions = positions.iter().map(|p| p - origin).collect();
        Ok(Self { positions, wavenumber: UNIT_WAVENUMBER })
    }

    /// Uniform linear array with `m` sensors spaced `d` apart.
    pub fn ula(m: usize, d: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidGeometry("sensor count must be positive".into()));
        }
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::InvalidGeometry(format!("spacing must be positive, got {d}")));
        }
        Ok(Self { positions: (0..m).map(|i| i as f64 * d).collect(), wavenumber: UNIT_WAVENUMBER })
    }

    /// Array on a grid of pitch `d` with occupied slots marked by `x`/`•`
    /// and empty slots by `.`/`◦`. Whitespace is ignored.
    pub fn from_pattern(pattern: &str, d: f64) -> Result<Self> {
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::InvalidPattern(format!("spacing must be positive, got {d}")));
        }
        let mut slots = Vec::new();
        for c in pattern.chars().filter(|c| !c.is_whitespace()) {
            match c {
                'x' | 'X' | '•' | '●' => slots.push(true),
                '.' | '◦' | '○' | 'o' => slots.push(false),
                other => {
                    return Err(Error::InvalidPattern(format!("unknown mark {other:?}")));
                }
            }
        }
        if slots.is_empty() {
            return Err(Error::InvalidPattern("empty pattern".into()));
        }
        let occupied: Vec<f64> =
            slots.iter().enumerate().filter(|(_, &on)| on).map(|(i, _)| i as f64 * d).collect();
        if occupied.is_empty() {
            return Err(Error::InvalidPattern("no occupied slots".into()));
        }
        Self::from_positions(&occupied)
    }

    /// Replaces the wavenumber k = 2π/λ.
    pub fn with_wavenumber(mut self, k: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::InvalidGeometry(format!("wavenumber must be positive, got {k}")));
        }
        self.wavenumber = k;
        Ok(self)
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn wavenumber(&self) -> f64 {
        self.wavenumber
    }

    pub fn wavelength(&self) -> f64 {
        2.0 * PI / self.wavenumber
    }

    pub fn sensor_count(&self) -> usize {
        self.positions.len()
    }

    /// Distance from the first to the last sensor.
    pub fn aperture(&self) -> f64 {
        *self.positions.last().unwrap_or(&0.0)
    }

    /// α = Σ d_m².
    pub fn alpha(&self) -> f64 {
        self.positions.iter().map(|d| d * d).sum()
    }

    /// β = Σ d_m³.
    pub fn beta(&self) -> f64 {
        self.positions.iter().map(|d| d * d * d).sum()
    }

    /// Σ d_m^p for an arbitrary integer power.
    pub fn moment(&self, p: i32) -> f64 {
        self.positions.iter().map(|d| d.powi(p)).sum()
    }

    /// Array response a(ν) with entries exp(j ν d_m).
    pub fn steering_vector(&self, nu: f64) -> Vec<Complex64> {
        self.positions.iter().map(|&d| Complex64::from_polar(1.0, nu * d)).collect()
    }

    /// Electrical angle ν = k sin θ for a physical direction θ (radians).
    pub fn electrical_angle(&self, theta: f64) -> f64 {
        self.wavenumber * theta.sin()
    }
}

/// Textual geometry description accepted by the CLI:
/// `ula:M=<int>,d=<real>` or `pattern:<marks>,d=<real>`.
#[derive(Debug, Clone, PartialEq)]
pub enum GeometrySpec {
    Ula { m: usize, d: f64 },
    Pattern { marks: String, d: f64 },
}

impl GeometrySpec {
    pub fn build(&self) -> Result<ArrayGeometry> {
        match self {
            GeometrySpec::Ula { m, d } => ArrayGeometry::ula(*m, *d),
            GeometrySpec::Pattern { marks, d } => ArrayGeometry::from_pattern(marks, *d),
        }
    }
}

impl fmt::Display for GeometrySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometrySpec::Ula { m, d } => write!(f, "ula:M={m},d={d}"),
            GeometrySpec::Pattern { marks, d } => write!(f, "pattern:{marks},d={d}"),
        }
    }
}

fn parse_spacing(field: &str) -> Result<f64> {
    let value = field
        .trim()
        .strip_prefix("d=")
        .ok_or_else(|| Error::Parse(format!("expected d=<real>, got {field:?}")))?;
    value.trim().parse::<f64>().map_err(|e| Error::Parse(format!("bad spacing {value:?}: {e}")))
}

impl FromStr for GeometrySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("geometry must be ula:... or pattern:..., got {s:?}")))?;
        match kind.trim() {
            "ula" => {
                let mut m = None;
                let mut d = None;
                for field in rest.split(',') {
                    let field = field.trim();
                    if let Some(v) = field.strip_prefix("M=") {
                        m = Some(
                            v.trim()
                                .parse::<usize>()
                                .map_err(|e| Error::Parse(format!("bad sensor count {v:?}: {e}")))?,
                        );
                    } else {
                        d = Some(parse_spacing(field)?);
                    }
                }
                match (m, d) {
                    (Some(m), Some(d)) => Ok(GeometrySpec::Ula { m, d }),
                    _ => Err(Error::Parse(format!("ula needs M=<int>,d=<real>, got {s:?}"))),
                }
            }
            "pattern" => {
                let (marks, spacing) = rest
                    .rsplit_once(',')
                    .ok_or_else(|| Error::Parse(format!("pattern needs <marks>,d=<real>, got {s:?}")))?;
                Ok(GeometrySpec::Pattern { marks: marks.trim().to_string(), d: parse_spacing(spacing)? })
            }
            other => Err(Error::Parse(format!("unknown geometry kind {other:?}"))),
        }
    }
}
