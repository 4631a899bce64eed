//! Acceptance criteria. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits non-zero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;

use arl_core::arl::{closed_form_arl, weak_signal_limit};
use arl_core::crb::{crb_entries, crb_of_spacing, eta, eta_taylor, fim};
use arl_core::experiments::{figure_preset, type1_geometry, type2_geometry, type3_geometry};
use arl_core::geometry::{ArrayGeometry, GeometrySpec};
use arl_core::signals::{make_pair, make_pair_rotated, Scenario, SourcePair};
use arl_core::smith_solver::{numeric_arl, SolverConfig};
use arl_core::Error;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const AGREEMENT_GAP: f64 = 1e-2;
const EXACT_CASE_GAP: f64 = 1e-10;
const CRB_ORACLE_RTOL: f64 = 1e-10;
const CRB_ORACLE_SCENARIOS: usize = 1000;
const TAYLOR_RATIO_BAND: (f64, f64) = (3.5, 4.5);
const WAVEFORM_PAIRS: u64 = 100;
const REAL_PART_MIN_RATIO: f64 = 2.0;
const IMAG_PART_MAX_INCREASE: f64 = 0.05;
const SATURATION_RTOL: f64 = 1e-2;
const APERTURE_FACTOR: f64 = 3.0;
const SPOT_TOL_REAL: f64 = 1e-5;
const SPOT_TOL_COMPLEX: f64 = 1e-4;

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn scenario(geometry: ArrayGeometry, eps1: f64, eps2: f64, rho: Complex64, sigma2: f64) -> Scenario {
    Scenario::new(geometry, make_pair(100, eps1, eps2, rho).unwrap(), sigma2).unwrap()
}

fn ula(m: usize, d: f64) -> ArrayGeometry {
    ArrayGeometry::ula(m, d).unwrap()
}

fn closed(sc: &Scenario) -> f64 {
    closed_form_arl(sc).unwrap().delta
}

fn numeric(sc: &Scenario) -> f64 {
    numeric_arl(sc, &SolverConfig::default()).unwrap()
}

/// A1: closed form vs numeric Smith solution on the figure-1 setup.
fn closed_vs_numeric() -> Outcome {
    let mut lines = Vec::new();
    let mut failures = Vec::new();
    for (rho, limit) in
        [(c(0.5, 0.5), AGREEMENT_GAP), (c(-0.5, 0.0), AGREEMENT_GAP), (c(0.0, 0.0), EXACT_CASE_GAP)]
    {
        for sigma2 in [0.01, 0.1, 1.0] {
            let sc = scenario(ula(6, 0.5), 1.0, 1.0, rho, sigma2);
            let (cf, nm) = (closed(&sc), numeric(&sc));
            let gap = (cf - nm).abs() / nm;
            let line = format!(
                "rho={rho} sigma2={sigma2}: closed {cf:.6e} numeric {nm:.6e} gap {gap:.3e} (limit {limit:e})"
            );
            if gap > limit {
                failures.push(line.clone());
            }
            lines.push(line);
        }
    }
    for l in &lines {
        println!("      {l}");
    }
    if failures.is_empty() {
        Ok(format!("{} points within limits", lines.len()))
    } else {
        Err(format!("{} of {} points over limit: {}", failures.len(), lines.len(), failures.join("; ")))
    }
}

/// Inverse of a 2×2 matrix by Gauss-Jordan elimination with partial pivoting.
fn gauss_jordan_inverse(m: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut a = [[m[0][0], m[0][1], 1.0, 0.0], [m[1][0], m[1][1], 0.0, 1.0]];
    for col in 0..2 {
        let pivot = if a[1][col].abs() > a[col][col].abs() && col == 0 { 1 } else { col };
        a.swap(col, pivot);
        let p = a[col][col];
        for v in a[col].iter_mut() {
            *v /= p;
        }
        let other = 1 - col;
        let f = a[other][col];
        let pivot_row = a[col];
        for (v, p) in a[other].iter_mut().zip(pivot_row) {
            *v -= f * p;
        }
    }
    [[a[0][2], a[0][3]], [a[1][2], a[1][3]]]
}

/// A2: closed-form CRB entries against generic inversion of the FIM.
fn crb_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let mut worst = 0.0f64;
    let mut checked = 0;
    while checked < CRB_ORACLE_SCENARIOS {
        let sensors = rng.random_range(2..=10);
        let mut pos = vec![0.0];
        for _ in 1..sensors {
            let last = *pos.last().unwrap();
            pos.push(last + rng.random_range(0.1..1.5));
        }
        let geometry = ArrayGeometry::from_positions(&pos).unwrap();
        let rho = Complex64::from_polar(rng.random_range(0.0..0.98), rng.random_range(-PI..PI));
        let n = rng.random_range(2..=200);
        let pair = make_pair(n, rng.random_range(0.1..10.0), rng.random_range(0.1..10.0), rho).unwrap();
        let sc = Scenario::new(geometry, pair, rng.random_range(0.01..10.0)).unwrap();
        let delta = rng.random_range(-1.0..1.0);
        let Ok(report) = crb_entries(&sc, delta) else { continue };
        if report.psi <= 0.0 {
            continue;
        }
        let inv = gauss_jordan_inverse(fim(&sc, delta).angle);
        let scale = (inv[0][0] * inv[1][1]).sqrt();
        let errs = [
            (report.crb_nu1 - inv[0][0]).abs() / inv[0][0],
            (report.crb_nu2 - inv[1][1]).abs() / inv[1][1],
            (report.crb_cross - inv[0][1]).abs() / inv[0][1].abs().max(scale),
            (report.spacing() - crb_of_spacing(&sc, delta).unwrap()).abs() / report.spacing(),
        ];
        worst = errs.iter().copied().fold(worst, f64::max);
        checked += 1;
    }
    let line = format!("{checked} scenarios, worst relative error {worst:.3e} (limit {CRB_ORACLE_RTOL:e})");
    if worst <= CRB_ORACLE_RTOL {
        Ok(line)
    } else {
        Err(line)
    }
}

/// A3: η − η_taylor = O(δ²).
fn taylor_order() -> Outcome {
    let sc = scenario(ula(6, 0.5), 1.0, 1.0, c(0.5, 0.5), 1.0);
    let err = |d: f64| (eta(&sc, d) - eta_taylor(&sc, d)).norm();
    let mut d = 1e-2;
    let mut ratios = Vec::new();
    let mut normalized = Vec::new();
    while d >= 1e-5 {
        normalized.push(err(d) / (d * d));
        ratios.push(err(d) / err(d / 2.0));
        d /= 2.0;
    }
    let (lo, hi) = TAYLOR_RATIO_BAND;
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let max = ratios.iter().copied().fold(0.0, f64::max);
    let spread = normalized.iter().copied().fold(0.0, f64::max)
        / normalized.iter().copied().fold(f64::INFINITY, f64::min);
    let line = format!(
        "{} halvings, error ratio in [{min:.4}, {max:.4}], err/delta^2 spread x{spread:.4}",
        ratios.len()
    );
    if min >= lo && max <= hi {
        Ok(line)
    } else {
        Err(line)
    }
}

/// A4: waveforms sharing (ε₁, ε₂, ρ) give bit-identical δ.
fn waveform_invariance() -> Outcome {
    let rho = c(0.5, 0.5);
    let geometry = ula(6, 0.5);
    let mut closed_bits = None;
    let mut numeric_bits = None;
    let mut first_s1: Option<Vec<Complex64>> = None;
    for seed in 0..WAVEFORM_PAIRS {
        let pair = make_pair_rotated(100, 1.0, 0.7, rho, seed).unwrap();
        if (pair.correlation() - rho).norm() > 1e-12 {
            return Err(format!("seed {seed}: realized correlation {}", pair.correlation()));
        }
        match &first_s1 {
            Some(s) if s.as_slice() == pair.s1() => return Err(format!("seed {seed}: waveform not varied")),
            None => first_s1 = Some(pair.s1().to_vec()),
            _ => {}
        }
        let sc = Scenario::new(geometry.clone(), pair, 1.0).unwrap();
        let cb = closed(&sc).to_bits();
        let nb = numeric(&sc).to_bits();
        if *closed_bits.get_or_insert(cb) != cb || *numeric_bits.get_or_insert(nb) != nb {
            return Err(format!("seed {seed}: delta differs"));
        }
    }
    Ok(format!(
        "{WAVEFORM_PAIRS} pairs, closed {:e}, numeric {:e}",
        f64::from_bits(closed_bits.unwrap()),
        f64::from_bits(numeric_bits.unwrap())
    ))
}

/// A5: ρ̄ dominates, ρ̃ barely matters.
fn real_vs_imaginary_part() -> Outcome {
    let d = |re: f64, im: f64| closed(&scenario(ula(6, 0.5), 1.0, 1.0, c(re, im), 1.0));
    let ratio = d(0.9, 0.0) / d(0.0, 0.0);
    let base = d(0.5, 0.0);
    let mut max_increase = 0.0f64;
    for i in 0..=86 {
        let im = 0.01 * i as f64;
        max_increase = max_increase.max(d(0.5, im) / base - 1.0);
    }
    let line = format!(
        "delta(0.9)/delta(0) = {ratio:.4} (min {REAL_PART_MIN_RATIO}), max increase over rho_im in [0,0.86] = {:.4}% (max {}%)",
        100.0 * max_increase,
        100.0 * IMAG_PART_MAX_INCREASE
    );
    if ratio >= REAL_PART_MIN_RATIO && max_increase <= IMAG_PART_MAX_INCREASE {
        Ok(line)
    } else {
        Err(line)
    }
}

fn fig5_scenario(geometry: &GeometrySpec, eps1: f64) -> Scenario {
    scenario(geometry.build().unwrap(), eps1, 1.0, c(0.5, 0.5), 1.0)
}

/// A6: saturation as the strong source grows.
fn weak_signal_saturation() -> Outcome {
    let mut notes = Vec::new();
    for (name, geometry) in [
        ("ula6", GeometrySpec::Ula { m: 6, d: 0.5 }),
        ("type1", type1_geometry()),
        ("type2", type2_geometry()),
        ("type3", type3_geometry()),
    ] {
        let limit = weak_signal_limit(&fig5_scenario(&geometry, 1.0)).unwrap();
        let strong = closed(&fig5_scenario(&geometry, 1000.0));
        let gap = (strong - limit).abs() / limit;
        if gap > SATURATION_RTOL {
            return Err(format!("{name}: delta(eps1=1000) {strong:e} vs limit {limit:e}, gap {gap:.3e}"));
        }
        let mut prev = f64::INFINITY;
        for i in 0..=60 {
            let eps1 = 10f64.powf(3.0 * i as f64 / 60.0);
            let d = closed(&fig5_scenario(&geometry, eps1));
            if d >= prev {
                return Err(format!("{name}: not decreasing at eps1 = {eps1}"));
            }
            prev = d;
        }
        notes.push(format!("{name} gap {gap:.2e}"));
    }
    Ok(notes.join(", "))
}

/// A7: losing aperture hurts much more than losing inner sensors.
fn aperture_effect() -> Outcome {
    let preset = figure_preset(5).unwrap();
    let base = &preset[0].base;
    let at = |geometry: GeometrySpec| {
        let sc = scenario(geometry.build().unwrap(), 1.0, base.eps2, base.rho(), base.sigma2);
        closed(&sc)
    };
    let (t1, t2, t3) = (at(type1_geometry()), at(type2_geometry()), at(type3_geometry()));
    let line = format!(
        "type1 {t1:.5e} type2 {t2:.5e} type3 {t3:.5e}; (t1-t3)/(t2-t3) = {:.3}",
        (t1 - t3) / (t2 - t3)
    );
    if t1 > t2 && t2 > t3 && t1 - t3 > APERTURE_FACTOR * (t2 - t3) {
        Ok(line)
    } else {
        Err(line)
    }
}

/// A8: spot values on ULA(6, 1), N = 100, unit SNRs.
fn spot_values() -> Outcome {
    let cases = [
        (c(0.0, 0.0), 1.3484e-2, SPOT_TOL_REAL),
        (c(-0.5, 0.0), 1.1010e-2, SPOT_TOL_REAL),
        (c(0.5, 0.5), 1.9088e-2, SPOT_TOL_COMPLEX),
    ];
    let mut notes = Vec::new();
    for (rho, expected, tol) in cases {
        let got = closed(&scenario(ula(6, 1.0), 1.0, 1.0, rho, 1.0));
        if (got - expected).abs() > tol {
            return Err(format!("rho={rho}: {got:.6e}, expected {expected:e} ± {tol:e}"));
        }
        notes.push(format!("rho={rho}: {got:.6e}"));
    }
    Ok(notes.join(", "))
}

/// A9: error paths.
fn error_paths() -> Outcome {
    let mut notes = Vec::new();
    for re in [1.0, -1.0] {
        let sc = scenario(ula(6, 0.5), 1.0, 1.0, c(re, 0.0), 1.0);
        match closed_form_arl(&sc) {
            Err(Error::NoClosedForm { .. }) => {}
            other => return Err(format!("rho={re}: closed form gave {other:?}")),
        }
        match numeric_arl(&sc, &SolverConfig::default()) {
            Ok(d) if d.is_finite() && d > 0.0 => notes.push(format!("rho={re}: numeric {d:.6e}")),
            Err(Error::NoBracket { .. }) => notes.push(format!("rho={re}: NoBracket")),
            other => return Err(format!("rho={re}: numeric gave {other:?}")),
        }
    }
    let s = vec![c(1.0, 0.5), c(-0.2, 0.8), c(0.4, -1.1), c(0.9, 0.0)];
    let coherent = Scenario::new(ula(6, 0.5), SourcePair::new(s.clone(), s).unwrap(), 1.0).unwrap();
    let anti = scenario(ula(6, 0.5), 1.0, 1.0, c(-1.0, 0.0), 1.0);
    let prescribed = scenario(ula(6, 0.5), 1.0, 1.0, c(1.0, 0.0), 1.0);
    for (name, sc) in [("s1=s2", &coherent), ("rho=-1", &anti), ("rho=1", &prescribed)] {
        match crb_entries(sc, 0.0) {
            Err(Error::SingularInformation { psi, .. }) if !psi.is_nan() => {}
            other => return Err(format!("{name}: crb_entries gave {other:?}")),
        }
        match crb_of_spacing(sc, 0.0) {
            Err(Error::SingularInformation { .. }) => {}
            Ok(v) if v.is_nan() => return Err(format!("{name}: NaN CRB")),
            other => return Err(format!("{name}: crb_of_spacing gave {other:?}")),
        }
    }
    notes.push("psi<=0 -> SingularInformation".into());
    Ok(notes.join(", "))
}

type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("A1", "closed form vs numeric agreement", closed_vs_numeric),
        ("A2", "CRB oracle equivalence", crb_oracle),
        ("A3", "Taylor order of eta", taylor_order),
        ("A4", "waveform invariance", waveform_invariance),
        ("A5", "real part decisive, imaginary part negligible", real_vs_imaginary_part),
        ("A6", "weak-signal saturation", weak_signal_saturation),
        ("A7", "aperture effect", aperture_effect),
        ("A8", "derived spot values", spot_values),
        ("A9", "error-path contracts", error_paths),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        match check() {
            Ok(detail) => println!("[{id}] PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[{id}] FAIL {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
