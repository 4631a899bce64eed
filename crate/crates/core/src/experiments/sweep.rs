use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use super::{evaluate, Outputs, PointRecord, ScenarioParams};
use crate::error::{Error, Result};
use crate::smith_solver::SolverConfig;

pub const CSV_HEADER: [&str; 10] = [
    "swept_var",
    "value",
    "delta_closed",
    "delta_numeric",
    "rel_gap",
    "case_tag",
    "status",
    "alpha",
    "beta",
    "psi",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    Sigma2,
    RhoRe,
    RhoIm,
    Eps1,
    Eps2,
}

impl SweepVar {
    pub fn name(&self) -> &'static str {
        match self {
            SweepVar::Sigma2 => "sigma2",
            SweepVar::RhoRe => "rho_re",
            SweepVar::RhoIm => "rho_im",
            SweepVar::Eps1 => "eps1",
            SweepVar::Eps2 => "eps2",
        }
    }

    fn apply(&self, base: &ScenarioParams, value: f64) -> ScenarioParams {
        let mut p = base.clone();
        match self {
            SweepVar::Sigma2 => p.sigma2 = value,
            SweepVar::RhoRe => p.rho_re = value,
            SweepVar::RhoIm => p.rho_im = value,
            SweepVar::Eps1 => p.eps1 = value,
            SweepVar::Eps2 => p.eps2 = value,
        }
        p
    }
}

impl fmt::Display for SweepVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepVar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().replace('-', "_").as_str() {
            "sigma2" => Ok(SweepVar::Sigma2),
            "rho_re" => Ok(SweepVar::RhoRe),
            "rho_im" => Ok(SweepVar::RhoIm),
            "eps1" => Ok(SweepVar::Eps1),
            "eps2" => Ok(SweepVar::Eps2),
            other => Err(Error::Parse(format!("unknown sweep variable {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridScale {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    Values(Vec<f64>),
    Range { start: f64, stop: f64, count: usize, scale: GridScale },
}

impl Grid {
    pub fn points(&self) -> Result<Vec<f64>> {
        let points = match self {
            Grid::Values(v) => v.clone(),
            Grid::Range { start, stop, count, scale } => {
                let (start, stop, count) = (*start, *stop, *count);
                if count == 0 {
                    return Err(Error::InvalidSweep("grid count must be positive".into()));
                }
                if count == 1 {
                    vec![start]
                } else {
                    let t = |i: usize| i as f64 / (count - 1) as f64;
                    match scale {
                        GridScale::Linear => (0..count)
                            .map(|i| if i == count - 1 { stop } else { start + (stop - start) * t(i) })
                            .collect(),
                        GridScale::Log => {
                            if !(start > 0.0 && stop > 0.0) {
                                return Err(Error::InvalidSweep("log grid needs positive bounds".into()));
                            }
                            let (l0, l1) = (start.ln(), stop.ln());
                            (0..count)
                                .map(|i| {
                                    if i == 0 {
                                        start
                                    } else if i == count - 1 {
                                        stop
                                    } else {
                                        (l0 + (l1 - l0) * t(i)).exp()
                                    }
                                })
                                .collect()
                        }
                    }
                }
            }
        };
        if points.is_empty() {
            return Err(Error::InvalidSweep("empty grid".into()));
        }
        if points.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSweep("non-finite grid value".into()));
        }
        let increasing = points.windows(2).all(|w| w[1] > w[0]);
        let decreasing = points.windows(2).all(|w| w[1] < w[0]);
        if !(increasing || decreasing) {
            return Err(Error::InvalidSweep("grid must be strictly monotone".into()));
        }
        Ok(points)
    }
}

impl FromStr for Grid {
    type Err = Error;

    /// `start:stop:count[:lin|log]` or a comma-separated value list.
    fn from_str(s: &str) -> Result<Self> {
        let parse =
            |v: &str| v.trim().parse::<f64>().map_err(|e| Error::Parse(format!("bad grid value {v:?}: {e}")));
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            if !(3..=4).contains(&parts.len()) {
                return Err(Error::Parse(format!("range must be start:stop:count[:lin|log], got {s:?}")));
            }
            let count = parts[2]
                .trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad grid count {:?}: {e}", parts[2])))?;
            let scale = match parts.get(3).map(|p| p.trim()) {
                None | Some("lin") | Some("linear") => GridScale::Linear,
                Some("log") => GridScale::Log,
                Some(other) => return Err(Error::Parse(format!("unknown grid scale {other:?}"))),
            };
            Ok(Grid::Range { start: parse(parts[0])?, stop: parse(parts[1])?, count, scale })
        } else {
            s.split(',').map(parse).collect::<Result<Vec<_>>>().map(Grid::Values)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Series label appended to the `swept_var` column as `var|label`.
    pub label: Option<String>,
    pub variable: SweepVar,
    pub grid: Grid,
    pub base: ScenarioParams,
    pub outputs: Outputs,
}

impl SweepSpec {
    pub fn new(variable: SweepVar, grid: Grid, base: ScenarioParams, outputs: Outputs) -> Self {
        Self { label: None, variable, grid, base, outputs }
    }

    pub fn labelled(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    fn column_name(&self) -> String {
        match &self.label {
            Some(l) => format!("{}|{}", self.variable.name(), l),
            None => self.variable.name().to_string(),
        }
    }

    /// Grid points, with values that would break |ρ| ≤ 1 trimmed.
    pub fn resolved_points(&self) -> Result<(Vec<f64>, Vec<String>)> {
        let points = self.grid.points()?;
        let mut warnings = Vec::new();
        if !matches!(self.variable, SweepVar::RhoRe | SweepVar::RhoIm) {
            return Ok((points, warnings));
        }
        let kept: Vec<f64> = points
            .iter()
            .copied()
            .filter(|&v| self.variable.apply(&self.base, v).rho().norm() <= 1.0)
            .collect();
        if kept.len() < points.len() {
            warnings.push(format!(
                "{}: trimmed {} grid point(s) violating |rho| <= 1",
                self.column_name(),
                points.len() - kept.len()
            ));
        }
        if kept.is_empty() {
            return Err(Error::InvalidSweep(format!(
                "{}: no grid point satisfies |rho| <= 1",
                self.column_name()
            )));
        }
        Ok((kept, warnings))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub swept_var: String,
    pub value: f64,
    pub record: PointRecord,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub warnings: Vec<String>,
}

/// Runs one or more sweeps in order. Points are evaluated in parallel; rows
/// come back in grid order.
pub fn run_sweep(specs: &[SweepSpec], cfg: &SolverConfig) -> Result<SweepOutput> {
    let mut out = SweepOutput::default();
    for spec in specs {
        let (points, warnings) = spec.resolved_points()?;
        out.warnings.extend(warnings);
        let name = spec.column_name();
        let rows: Vec<SweepRow> = points
            .par_iter()
            .map(|&value| {
                let params = spec.variable.apply(&spec.base, value);
                let record = match params.build() {
                    Ok(sc) => evaluate(&sc, spec.outputs, cfg),
                    Err(e) => PointRecord::failed(e),
                };
                SweepRow { swept_var: name.clone(), value, record }
            })
            .collect();
        out.rows.extend(rows);
    }
    Ok(out)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

pub fn write_csv<W: Write>(rows: &[SweepRow], writer: W) -> Result<()> {
    let io = |e: csv::Error| Error::Parse(format!("csv output: {e}"));
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CSV_HEADER).map_err(io)?;
    for row in rows {
        let r = &row.record;
        w.write_record([
            row.swept_var.clone(),
            format!("{:e}", row.value),
            fmt_opt(r.delta_closed),
            fmt_opt(r.delta_numeric),
            fmt_opt(r.rel_gap),
            r.case_tag.clone().unwrap_or_default(),
            r.status.clone(),
            fmt_opt(r.alpha),
            fmt_opt(r.beta),
            fmt_opt(r.psi),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Parse(format!("csv output: {e}")))?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationPoint {
    pub swept_var: String,
    pub value: f64,
    pub rel_gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub points: Vec<ValidationPoint>,
    pub max_gap: f64,
    pub threshold: f64,
    /// Points left out of the gap statistic, with the reason.
    pub excluded: Vec<String>,
    pub output: SweepOutput,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        !self.points.is_empty() && self.max_gap <= self.threshold
    }
}

/// Runs the sweeps with both outputs and compares closed form against the
/// numeric solver point by point.
pub fn validate(specs: &[SweepSpec], threshold: f64, cfg: &SolverConfig) -> Result<ValidationReport> {
    if !(threshold >= 0.0) {
        return Err(Error::InvalidSweep(format!("threshold must be non-negative, got {threshold}")));
    }
    let specs: Vec<SweepSpec> =
        specs.iter().cloned().map(|s| SweepSpec { outputs: Outputs::Both, ..s }).collect();
    let output = run_sweep(&specs, cfg)?;
    let mut points = Vec::new();
    let mut excluded = Vec::new();
    for row in &output.rows {
        match row.record.rel_gap {
            Some(gap) => points.push(ValidationPoint {
                swept_var: row.swept_var.clone(),
                value: row.value,
                rel_gap: gap,
            }),
            None => excluded.push(format!("{}={:e}: {}", row.swept_var, row.value, row.record.status)),
        }
    }
    let max_gap = points.iter().map(|p| p.rel_gap).fold(0.0, f64::max);
    Ok(ValidationReport { points, max_gap, threshold, excluded, output })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::run_point;

    #[test]
    fn grid_parsing() {
        assert_eq!("0.1,0.2,0.5".parse::<Grid>().unwrap(), Grid::Values(vec![0.1, 0.2, 0.5]));
        assert_eq!(
            "0.01:1:5:log".parse::<Grid>().unwrap(),
            Grid::Range { start: 0.01, stop: 1.0, count: 5, scale: GridScale::Log }
        );
        assert!("1:2".parse::<Grid>().is_err());
        assert!("1:2:3:cubic".parse::<Grid>().is_err());
        assert!("a,b".parse::<Grid>().is_err());
    }

    #[test]
    fn grid_points() {
        let g = Grid::Range { start: 0.01, stop: 1.0, count: 3, scale: GridScale::Log };
        let p = g.points().unwrap();
        assert_eq!(p[0], 0.01);
        assert!((p[1] - 0.1).abs() < 1e-15);
        assert_eq!(p[2], 1.0);
        let g = Grid::Range { start: 0.0, stop: 0.86, count: 50, scale: GridScale::Linear };
        let p = g.points().unwrap();
        assert_eq!(p.len(), 50);
        assert_eq!(p[49], 0.86);
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::Values(vec![]).points().is_err());
        assert!(Grid::Values(vec![1.0, 1.0]).points().is_err());
        assert!(Grid::Values(vec![1.0, 3.0, 2.0]).points().is_err());
        assert!(Grid::Values(vec![3.0, 2.0, 1.0]).points().is_ok());
        assert!(Grid::Range { start: 0.0, stop: 1.0, count: 3, scale: GridScale::Log }.points().is_err());
        assert!(Grid::Range { start: 0.0, stop: 1.0, count: 0, scale: GridScale::Linear }.points().is_err());
    }

    #[test]
    fn correlation_sweeps_are_trimmed() {
        let base = ScenarioParams { rho_re: 0.8, ..Default::default() };
        let spec =
            SweepSpec::new(SweepVar::RhoIm, Grid::Values(vec![0.0, 0.3, 0.6, 0.9]), base, Outputs::Closed);
        let (points, warnings) = spec.resolved_points().unwrap();
        assert_eq!(points, vec![0.0, 0.3, 0.6]);
        assert_eq!(warnings.len(), 1);
    }

    #[test]
    fn single_point_sweep_matches_run_point() {
        let base = ScenarioParams { rho_re: 0.5, rho_im: 0.5, ..Default::default() };
        let cfg = SolverConfig::default();
        let spec = SweepSpec::new(SweepVar::Sigma2, Grid::Values(vec![0.3]), base.clone(), Outputs::Both);
        let out = run_sweep(&[spec], &cfg).unwrap();
        assert_eq!(out.rows.len(), 1);
        let direct = run_point(&ScenarioParams { sigma2: 0.3, ..base }, Outputs::Both, &cfg).unwrap();
        assert_eq!(out.rows[0].record, direct);
    }

    #[test]
    fn bad_points_become_status_rows() {
        let spec = SweepSpec::new(
            SweepVar::Eps1,
            Grid::Values(vec![-1.0, 1.0]),
            ScenarioParams::default(),
            Outputs::Both,
        );
        let out = run_sweep(&[spec], &SolverConfig::default()).unwrap();
        assert_eq!(out.rows[0].record.status, "invalid-signal");
        assert_eq!(out.rows[1].record.status, "ok");
    }

    #[test]
    fn csv_has_fixed_columns() {
        let spec = SweepSpec::new(
            SweepVar::Sigma2,
            Grid::Values(vec![0.1, 1.0]),
            ScenarioParams::default(),
            Outputs::Both,
        )
        .labelled("rho=0");
        let out = run_sweep(&[spec], &SolverConfig::default()).unwrap();
        let mut buf = Vec::new();
        write_csv(&out.rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "swept_var,value,delta_closed,delta_numeric,rel_gap,case_tag,status,alpha,beta,psi"
        );
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row.len(), 10);
        assert_eq!(row[0], "sigma2|rho=0");
        assert_eq!(row[5], "uncorrelated");
        assert_eq!(row[6], "ok");
    }

    #[test]
    fn validation_excludes_domain_errors() {
        // At σ² = 1e4 the quartic branch is outside its domain.
        let base = ScenarioParams { rho_re: 0.5, rho_im: 0.8, ..Default::default() };
        let spec = SweepSpec::new(SweepVar::Sigma2, Grid::Values(vec![0.01, 1e4]), base, Outputs::Closed);
        let report = validate(&[spec], 1e-2, &SolverConfig::default()).unwrap();
        assert_eq!(report.points.len(), 1);
        assert_eq!(report.excluded.len(), 1);
        assert!(report.excluded[0].contains("domain-error"));
    }

    #[test]
    fn uncorrelated_validation_is_exact() {
        let spec = SweepSpec::new(
            SweepVar::Sigma2,
            Grid::Range { start: 0.01, stop: 1.0, count: 7, scale: GridScale::Log },
            ScenarioParams::default(),
            Outputs::Both,
        );
        let report = validate(&[spec], 1e-10, &SolverConfig::default()).unwrap();
        assert!(report.passed(), "max gap {}", report.max_gap);
    }
}
