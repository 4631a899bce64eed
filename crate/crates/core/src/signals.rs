//! Deterministic two-source signal models.
//!
//! Everything downstream of this module (FIM, CRB, ARL) consumes only the
//! summary statistics in [`SourceStats`]: snapshot count N, RMS strengths
//! ε₁, ε₂ and the correlation factor ρ. The raw vectors are kept for snapshot
//! synthesis and for cross-checks against the raw-waveform FIM.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::geometry::ArrayGeometry;

/// Slack allowed on |ρ| ≤ 1 for correlations measured from rounded vectors.
pub const CORRELATION_SLACK: f64 = 1e-12;

/// Summary statistics of a source pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceStats {
    pub snapshots: usize,
    pub eps1: f64,
    pub eps2: f64,
    pub rho: Complex64,
}

impl SourceStats {
    pub fn new(snapshots: usize, eps1: f64, eps2: f64, rho: Complex64) -> Result<Self> {
        if snapshots == 0 {
            return Err(Error::InvalidSignal("snapshot count must be positive".into()));
        }
        for (name, eps) in [("eps1", eps1), ("eps2", eps2)] {
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(Error::InvalidSignal(format!("{name} must be positive, got {eps}")));
            }
        }
        if !(rho.re.is_finite() && rho.im.is_finite()) {
            return Err(Error::InvalidSignal("non-finite correlation".into()));
        }
        if rho.norm() > 1.0 + CORRELATION_SLACK {
            return Err(Error::CorrelationOutOfRange(rho.norm()));
        }
        Ok(Self { snapshots, eps1, eps2, rho })
    }

    /// s₁ᴴs₂ = N ε₁ ε₂ ρ.
    pub fn inner(&self) -> Complex64 {
        self.rho * (self.snapshots as f64 * self.eps1 * self.eps2)
    }
}

/// Two deterministic complex signal vectors of equal length N.
#[derive(Debug, Clone, PartialEq)]
pub struct SourcePair {
    s1: Vec<Complex64>,
    s2: Vec<Complex64>,
    stats: SourceStats,
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// s₁ᴴs₂.
pub fn inner_product(s1: &[Complex64], s2: &[Complex64]) -> Complex64 {
    s1.iter().zip(s2).map(|(a, b)| a.conj() * b).sum()
}

/// ρ = s₁ᴴs₂ / (‖s₁‖‖s₂‖).
pub fn correlation(s1: &[Complex64], s2: &[Complex64]) -> Result<Complex64> {
    if s1.len() != s2.len() {
        return Err(Error::InvalidSignal(format!("length mismatch: {} vs {}", s1.len(), s2.len())));
    }
    let (n1, n2) = (norm(s1), norm(s2));
    if n1 == 0.0 || n2 == 0.0 {
        return Err(Error::InvalidSignal("zero-norm signal vector".into()));
    }
    Ok(inner_product(s1, s2) / (n1 * n2))
}

impl SourcePair {
    /// Wraps two raw vectors, measuring ε₁, ε₂ and ρ from them.
    pub fn new(s1: Vec<Complex64>, s2: Vec<Complex64>) -> Result<Self> {
        if s1.is_empty() {
            return Err(Error::InvalidSignal("signal vectors are empty".into()));
        }
        let rho = correlation(&s1, &s2)?;
        let n = s1.len();
        let root_n = (n as f64).sqrt();
        let stats = SourceStats::new(n, norm(&s1) / root_n, norm(&s2) / root_n, rho)?;
        Ok(Self { s1, s2, stats })
    }

    pub fn s1(&self) -> &[Complex64] {
        &self.s1
    }

    pub fn s2(&self) -> &[Complex64] {
        &self.s2
    }

    /// Summary statistics used by every CRB/ARL computation.
    pub fn stats(&self) -> SourceStats {
        self.stats
    }

    pub fn snapshots(&self) -> usize {
        self.stats.snapshots
    }

    /// Correlation measured from the stored vectors.
    pub fn correlation(&self) -> Complex64 {
        correlation(&self.s1, &self.s2).expect("validated at construction")
    }

    /// Strengths measured from the stored vectors.
    pub fn measured_strengths(&self) -> (f64, f64) {
        let root_n = (self.s1.len() as f64).sqrt();
        (norm(&self.s1) / root_n, norm(&self.s2) / root_n)
    }
}

/// Pair with prescribed strengths and correlation along the first two
/// standard basis directions.
///
/// s₁ = √N ε₁ e₁ and s₂ = √N ε₂ (ρ e₁ + √(1−|ρ|²) e₂). The returned pair
/// carries the prescribed statistics; the vectors realize them to rounding.
pub fn make_pair(n: usize, eps1: f64, eps2: f64, rho: Complex64) -> Result<SourcePair> {
    let (e1, e2) = standard_directions(n, rho)?;
    build_pair(n, eps1, eps2, rho, &e1, &e2)
}

/// Same as [`make_pair`] but along two orthonormal directions drawn from a
/// seeded random unitary change of basis, so the waveforms differ per seed
/// while (ε₁, ε₂, ρ) stay fixed.
pub fn make_pair_rotated(n: usize, eps1: f64, eps2: f64, rho: Complex64, seed: u64) -> Result<SourcePair> {
    check_pair_request(n, rho)?;
    if n < 2 {
        return make_pair(n, eps1, eps2, rho);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || -> Vec<Complex64> {
        (0..n)
            .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
            .collect()
    };
    let u = draw();
    let v = draw();
    let nu = norm(&u);
    let e1: Vec<Complex64> = u.iter().map(|z| z / nu).collect();
    let proj = inner_product(&e1, &v);
    let w: Vec<Complex64> = v.iter().zip(&e1).map(|(vi, ei)| vi - proj * ei).collect();
    let nw = norm(&w);
    let e2: Vec<Complex64> = w.iter().map(|z| z / nw).collect();
    build_pair(n, eps1, eps2, rho, &e1, &e2)
}

fn check_pair_request(n: usize, rho: Complex64) -> Result<()> {
    if rho.norm() > 1.0 {
        return Err(Error::CorrelationOutOfRange(rho.norm()));
    }
    if n == 0 {
        return Err(Error::InvalidSignal("snapshot count must be positive".into()));
    }
    if n < 2 && rho.norm() < 1.0 {
        return Err(Error::InvalidSignal("|rho| < 1 needs at least two snapshots".into()));
    }
    Ok(())
}

fn standard_directions(n: usize, rho: Complex64) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    check_pair_request(n, rho)?;
    let mut e1 = vec![Complex64::new(0.0, 0.0); n];
    let mut e2 = vec![Complex64::new(0.0, 0.0); n];
    e1[0] = Complex64::new(1.0, 0.0);
    if n > 1 {
        e2[1] = Complex64::new(1.0, 0.0);
    }
    Ok((e1, e2))
}

fn build_pair(
    n: usize,
    eps1: f64,
    eps2: f64,
    rho: Complex64,
    e1: &[Complex64],
    e2: &[Complex64],
) -> Result<SourcePair> {
    let stats = SourceStats::new(n, eps1, eps2, rho)?;
    let root_n = (n as f64).sqrt();
    let ortho = (1.0 - rho.norm_sqr()).max(0.0).sqrt();
    let s1 = e1.iter().map(|z| z * (root_n * eps1)).collect();
    let s2 = e1.iter().zip(e2).map(|(a, b)| (rho * a + b * ortho) * (root_n * eps2)).collect();
    Ok(SourcePair { s1, s2, stats })
}

/// How the carrier term enters the source phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CarrierPhase {
    /// exp(j(2π f₀ + π_i(t))): a constant phase common to both sources.
    #[default]
    Constant,
    /// exp(j(2π f₀ t + π_i(t))) with t = 1..N.
    TimeScaled,
}

/// s_i(t) = a_i(t) exp(j(2π f₀ + π_i(t))).
pub fn synthesize_waveforms(
    a1: &[f64],
    a2: &[f64],
    phase1: &[f64],
    phase2: &[f64],
    f0: f64,
    carrier: CarrierPhase,
) -> Result<SourcePair> {
    let n = a1.len();
    if n == 0 || a2.len() != n || phase1.len() != n || phase2.len() != n {
        return Err(Error::InvalidSignal(format!(
            "amplitude/phase lengths must match and be non-zero: {}, {}, {}, {}",
            a1.len(),
            a2.len(),
            phase1.len(),
            phase2.len()
        )));
    }
    if a1.iter().chain(a2).any(|a| !(*a > 0.0 && a.is_finite())) {
        return Err(Error::InvalidSignal("amplitudes must be positive".into()));
    }
    let carrier_phase = |t: usize| match carrier {
        CarrierPhase::Constant => 2.0 * PI * f0,
        CarrierPhase::TimeScaled => 2.0 * PI * f0 * (t + 1) as f64,
    };
    let wave = |a: &[f64], p: &[f64]| -> Vec<Complex64> {
        a.iter()
            .zip(p)
            .enumerate()
            .map(|(t, (&amp, &ph))| Complex64::from_polar(amp, carrier_phase(t) + ph))
            .collect()
    };
    SourcePair::new(wave(a1, phase1), wave(a2, phase2))
}

/// RMS amplitude √(Σ a²(t) / N).
pub fn rms(a: &[f64]) -> f64 {
    (a.iter().map(|x| x * x).sum::<f64>() / a.len() as f64).sqrt()
}

/// Array geometry, source pair and noise variance: the full input to every
/// CRB/ARL computation.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    geometry: ArrayGeometry,
    sources: SourcePair,
    sigma2: f64,
}

impl Scenario {
    pub fn new(geometry: ArrayGeometry, sources: SourcePair, sigma2: f64) -> Result<Self> {
        if geometry.sensor_count() < 2 {
            return Err(Error::InvalidScenario("at least two sensors are required".into()));
        }
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::InvalidScenario(format!("noise variance must be positive, got {sigma2}")));
        }
        Ok(Self { geometry, sources, sigma2 })
    }

    pub fn geometry(&self) -> &ArrayGeometry {
        &self.geometry
    }

    pub fn sources(&self) -> &SourcePair {
        &self.sources
    }

    pub fn stats(&self) -> SourceStats {
        self.sources.stats()
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn snapshots(&self) -> usize {
        self.sources.snapshots()
    }

    pub fn snr1(&self) -> f64 {
        let e = self.sources.stats().eps1;
        e * e / self.sigma2
    }

    pub fn snr2(&self) -> f64 {
        let e = self.sources.stats().eps2;
        e * e / self.sigma2
    }

    pub fn rho(&self) -> Complex64 {
        self.sources.stats().rho
    }
}

/// Noise settings for snapshot synthesis. `scale` multiplies the noise
/// standard deviation; 0 gives noiseless snapshots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseConfig {
    pub seed: u64,
    pub scale: f64,
}

impl NoiseConfig {
    pub fn seeded(seed: u64) -> Self {
        Self { seed, scale: 1.0 }
    }
}

/// Received snapshots X (M×N) for the scenario's sources at electrical
/// angles ν₁, ν₂.
pub fn synthesize_snapshots(sc: &Scenario, nu1: f64, nu2: f64, seed: u64) -> Array2<Complex64> {
    snapshots_from_waveforms(
        sc.geometry(),
        sc.sources().s1(),
        sc.sources().s2(),
        sc.sigma2(),
        nu1,
        nu2,
        NoiseConfig::seeded(seed),
    )
    .expect("scenario vectors have equal length")
}

/// x_m(t) = Σ_i s_i(t) e^{j ν_i d_m} + n_m(t) with circular complex Gaussian
/// noise of variance σ². Zero source vectors are allowed here.
pub fn snapshots_from_waveforms(
    geometry: &ArrayGeometry,
    s1: &[Complex64],
    s2: &[Complex64],
    sigma2: f64,
    nu1: f64,
    nu2: f64,
    noise: NoiseConfig,
) -> Result<Array2<Complex64>> {
    if s1.len() != s2.len() {
        return Err(Error::InvalidSignal(format!("length mismatch: {} vs {}", s1.len(), s2.len())));
    }
    if !(sigma2 >= 0.0 && sigma2.is_finite()) || !(noise.scale >= 0.0 && noise.scale.is_finite()) {
        return Err(Error::InvalidSignal("noise variance and scale must be non-negative".into()));
    }
    let a1 = geometry.steering_vector(nu1);
    let a2 = geometry.steering_vector(nu2);
    let m = geometry.sensor_count();
    let n = s1.len();
    let std = noise.scale * (sigma2 / 2.0).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
    let mut x = Array2::zeros((m, n));
    for ((row, col), value) in x.indexed_iter_mut() {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        *value = a1[row] * s1[col] + a2[row] * s2[col] + Complex64::new(re, im) * std;
    }
    Ok(x)
}
