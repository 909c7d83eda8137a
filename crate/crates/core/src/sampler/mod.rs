//! Monte Carlo sampling of the product ensemble at `m = 0` and comparison of
//! empirical radial histograms against the exact density.
//!
//! Each factor is an `N × N` quaternion matrix stored as pairs `(u, v)` and
//! expanded to the `2N × 2N` complex matrix with blocks `[[u, −v̄], [v, ū]]`.
//! Entries are standard complex Gaussians, `E|u|² = E|v|² = 1`, which is the
//! normalization for which the one-factor eigenvalue weight is `e^{−|z|²}`.
//!
//! Draw `i` of a run seeded with `s` uses its own ChaCha8 stream
//! ([`draw_rng`]), so results do not depend on how draws are scheduled.

mod eigen;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensemble::EnsembleParams;
use crate::error::{Error, Result};
use crate::linalg::{lu_log_det, ComplexMatrix};
use crate::quadrature::{integrate, integrate_to_infinity};
use crate::radial::{RadialEvaluator, ScaledParams};
use crate::specfun::MellinBarnesConfig;

pub use eigen::eigenvalues_dense;

/// Largest accepted conjugate-pairing mismatch, relative to the spectral radius.
pub const PAIRING_TOLERANCE: f64 = 1e-6;

/// `N × N` quaternion matrix in `(u, v)` form.
#[derive(Debug, Clone, PartialEq)]
pub struct QuaternionMatrix {
    size: usize,
    u: Vec<Complex64>,
    v: Vec<Complex64>,
}

impl QuaternionMatrix {
    /// Builds from row-major `u` and `v` blocks.
    pub fn new(size: usize, u: Vec<Complex64>, v: Vec<Complex64>) -> Result<Self> {
        if size == 0 || u.len() != size * size || v.len() != size * size {
            return Err(Error::usage(format!(
                "quaternion matrix of size {size} needs {} u and v entries",
                size * size
            )));
        }
        Ok(Self { size, u, v })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn u(&self, a: usize, b: usize) -> Complex64 {
        self.u[a * self.size + b]
    }

    pub fn v(&self, a: usize, b: usize) -> Complex64 {
        self.v[a * self.size + b]
    }

    /// The `2N × 2N` complex representation.
    pub fn expand(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(2 * self.size, |i, j| {
            let (u, v) = (self.u(i / 2, j / 2), self.v(i / 2, j / 2));
            match (i % 2, j % 2) {
                (0, 0) => u,
                (0, _) => -v.conj(),
                (_, 0) => v,
                _ => u.conj(),
            }
        })
    }
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// One factor with i.i.d. standard complex Gaussian `u`, `v`.
pub fn sample_factor<R: Rng + ?Sized>(size: usize, rng: &mut R) -> QuaternionMatrix {
    let len = size * size;
    let u = (0..len).map(|_| complex_gaussian(rng)).collect();
    let v = (0..len).map(|_| complex_gaussian(rng)).collect();
    QuaternionMatrix { size, u, v }
}

/// The generator used for draw `draw` of a run seeded with `seed`.
pub fn draw_rng(seed: u64, draw: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(draw);
    rng
}

/// Spectrum of one product `X₁⋯X_n`, reduced to one eigenvalue per conjugate pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueSample {
    pub params: EnsembleParams,
    /// `N` representatives with `Im z ≥ 0`, sorted by `(Re, Im)`.
    pub eigenvalues: Vec<Complex64>,
    /// Largest `|λ − conj(partner)|` over the pairs, relative to the spectral radius.
    pub pairing_residual: f64,
    /// `|Π|z_k|² / |det P| − 1|`.
    pub det_residual: f64,
    pub seed: u64,
    pub draw: u64,
    /// Set when some pair was numerically real and a representative had to be chosen.
    pub real_pair: bool,
}

fn check_sampler_params(params: &EnsembleParams) -> Result<()> {
    params.validate()?;
    if params.m != 0.0 {
        return Err(Error::usage(format!(
            "the sampler only covers m = 0 (got m = {}); induced factors are not sampled",
            params.m
        )));
    }
    Ok(())
}

/// Samples the product and extracts its eigenvalues. `seed` and `draw` of the
/// result are zero; [`sample_draw`] fills them in.
pub fn product_eigenvalues<R: Rng + ?Sized>(params: &EnsembleParams, rng: &mut R) -> Result<EigenvalueSample> {
    check_sampler_params(params)?;
    let mut product = sample_factor(params.size, rng).expand();
    for _ in 1..params.n {
        product = product.matmul(&sample_factor(params.size, rng).expand());
    }
    let all = eigenvalues_dense(&product)?;
    let (mut eigenvalues, pairing_residual, real_pair) = pair_conjugates(&all)?;
    eigenvalues.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));

    let ln_det = lu_log_det(&product).0;
    let ln_prod: f64 = eigenvalues.iter().map(|z| 2.0 * z.norm().ln()).sum();
    let det_residual = if ln_det == f64::NEG_INFINITY && ln_prod == f64::NEG_INFINITY {
        0.0
    } else {
        (ln_prod - ln_det).exp_m1().abs()
    };
    Ok(EigenvalueSample {
        params: *params,
        eigenvalues,
        pairing_residual,
        det_residual,
        seed: 0,
        draw: 0,
        real_pair,
    })
}

/// Draw number `draw` of the run seeded with `seed`.
pub fn sample_draw(params: &EnsembleParams, seed: u64, draw: u64) -> Result<EigenvalueSample> {
    let mut rng = draw_rng(seed, draw);
    let mut s = product_eigenvalues(params, &mut rng)?;
    s.seed = seed;
    s.draw = draw;
    Ok(s)
}

/// `draws` independent samples, computed in parallel, returned in draw order.
pub fn sample_many(params: &EnsembleParams, seed: u64, draws: usize) -> Result<Vec<EigenvalueSample>> {
    check_sampler_params(params)?;
    (0..draws as u64)
        .into_par_iter()
        .map(|d| sample_draw(params, seed, d))
        .collect()
}

/// Matches every eigenvalue with its conjugate partner and keeps the member
/// with the larger imaginary part.
fn pair_conjugates(all: &[Complex64]) -> Result<(Vec<Complex64>, f64, bool)> {
    if !all.len().is_multiple_of(2) {
        return Err(Error::Internal(format!("odd spectrum length {}", all.len())));
    }
    let radius = all.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut order: Vec<usize> = (0..all.len()).collect();
    order.sort_by(|&a, &b| all[b].im.total_cmp(&all[a].im));
    let mut used = vec![false; all.len()];
    let mut reps = Vec::with_capacity(all.len() / 2);
    let mut worst: f64 = 0.0;
    let mut real_pair = false;
    for &i in &order {
        if used[i] {
            continue;
        }
        used[i] = true;
        let target = all[i].conj();
        let (j, dist) = (0..all.len())
            .filter(|&j| !used[j])
            .map(|j| (j, (all[j] - target).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or_else(|| Error::Internal("unpaired eigenvalue".into()))?;
        used[j] = true;
        worst = worst.max(dist);
        let z = all[i];
        if z.im.abs() <= PAIRING_TOLERANCE * radius {
            real_pair = true;
        }
        reps.push(Complex64::new(z.re, z.im.abs()));
    }
    let rel = if radius > 0.0 { worst / radius } else { 0.0 };
    if rel > PAIRING_TOLERANCE {
        return Err(Error::Integrity(format!(
            "eigenvalues are not closed under conjugation: mismatch {rel:e} of the spectral radius"
        )));
    }
    Ok((reps, rel, real_pair))
}

/// Radial coordinate used for histogramming.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RadialScaling {
    /// `|z|`.
    Raw,
    /// `|z| / (2N)^{n/2}`.
    Scaled,
}

impl RadialScaling {
    fn factor(self, params: &EnsembleParams) -> f64 {
        match self {
            RadialScaling::Raw => 1.0,
            RadialScaling::Scaled => ScaledParams::from_ensemble(params).radius_scale(),
        }
    }
}

impl FromStr for RadialScaling {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(RadialScaling::Raw),
            "scaled" => Ok(RadialScaling::Scaled),
            _ => Err(Error::usage(format!("unknown scaling '{s}', expected raw or scaled"))),
        }
    }
}

impl fmt::Display for RadialScaling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RadialScaling::Raw => "raw",
            RadialScaling::Scaled => "scaled",
        })
    }
}

/// How to lay out histogram bins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinSpec {
    /// `count` equal-width bins on `[0, max]`; larger radii go to the overflow count.
    Uniform { max: f64, count: usize },
    /// `count` bins of equal analytic probability, the last one open-ended.
    EqualMass { count: usize },
    /// Explicit increasing edges; the last may be `+∞`.
    Edges(Vec<f64>),
}

/// Counts of `|z|` (or `|ẑ|`) over all representatives of a set of draws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialHistogram {
    pub params: EnsembleParams,
    pub scaling: RadialScaling,
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// Samples outside the binned range.
    pub overflow: u64,
    pub draws: usize,
    pub total: u64,
}

/// One histogram bin as density estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinDensity {
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
    pub density: f64,
    pub std_error: f64,
}

impl RadialHistogram {
    /// Density implied by each bin, in units of `ρ_N` (raw) or `ρ̂_N` (scaled),
    /// with the Poisson standard error. Both members of a conjugate pair count.
    pub fn densities(&self) -> Vec<BinDensity> {
        let per_draw = match self.scaling {
            RadialScaling::Raw => 1.0,
            RadialScaling::Scaled => 1.0 / (2.0 * self.params.size as f64),
        };
        let norm = 2.0 * per_draw / self.draws as f64;
        self.edges
            .windows(2)
            .zip(&self.counts)
            .map(|(w, &count)| {
                let area = std::f64::consts::PI * (w[1] * w[1] - w[0] * w[0]);
                BinDensity {
                    lo: w[0],
                    hi: w[1],
                    count,
                    density: norm * count as f64 / area,
                    std_error: norm * (count as f64).sqrt() / area,
                }
            })
            .collect()
    }
}

fn validate_edges(edges: &[f64]) -> Result<()> {
    if edges.len() < 2 {
        return Err(Error::usage("a histogram needs at least two edges"));
    }
    if edges[0] < 0.0 || !edges[0].is_finite() {
        return Err(Error::usage("the first histogram edge must be finite and >= 0"));
    }
    if edges.windows(2).any(|w| !(w[1] > w[0])) || edges[..edges.len() - 1].iter().any(|e| !e.is_finite()) {
        return Err(Error::usage("histogram edges must increase, and only the last may be infinite"));
    }
    Ok(())
}

/// Histograms the representatives of `samples`.
pub fn radial_histogram(samples: &[EigenvalueSample], scaling: RadialScaling, bins: &BinSpec) -> Result<RadialHistogram> {
    let first = samples.first().ok_or_else(|| Error::usage("no samples to histogram"))?;
    let params = first.params;
    if samples.iter().any(|s| s.params != params) {
        return Err(Error::usage("samples come from different ensembles"));
    }
    let edges = match bins {
        BinSpec::Uniform { max, count } => {
            if *count == 0 || !(*max > 0.0 && max.is_finite()) {
                return Err(Error::usage("uniform bins need count >= 1 and a finite max > 0"));
            }
            (0..=*count).map(|i| max * i as f64 / *count as f64).collect()
        }
        BinSpec::EqualMass { count } => equal_mass_edges(&params, *count, scaling)?,
        BinSpec::Edges(e) => e.clone(),
    };
    validate_edges(&edges)?;
    let scale = scaling.factor(&params);
    let mut counts = vec![0u64; edges.len() - 1];
    let mut overflow = 0u64;
    let mut total = 0u64;
    for z in samples.iter().flat_map(|s| &s.eigenvalues) {
        let r = z.norm() / scale;
        total += 1;
        // first edge with r < edge, minus one
        let idx = edges.partition_point(|&e| e <= r);
        if idx == 0 {
            // below the first edge; only possible when it is > 0
            overflow += 1;
        } else if idx >= edges.len() {
            overflow += 1;
        } else {
            counts[idx - 1] += 1;
        }
    }
    Ok(RadialHistogram {
        params,
        scaling,
        edges,
        counts,
        overflow,
        draws: samples.len(),
        total,
    })
}

/// Probability that one representative has `|z|` in `[a, b]`: `½ ∫ 2πr ρ_N dr / N`.
fn representative_mass(ev: &RadialEvaluator, a: f64, b: f64) -> Result<f64> {
    let f = |r: f64| Ok(2.0 * std::f64::consts::PI * r * ev.density(r)?);
    let size = ev.params().size as f64;
    let raw = if b.is_infinite() {
        let sp = ScaledParams::from_ensemble(ev.params());
        let piece = 0.25 * sp.support().1 * sp.radius_scale();
        integrate_to_infinity(f, a, piece, 1e-10)?
    } else {
        integrate(f, a, b, 1e-10, 1e-300)?
    };
    Ok(0.5 * raw / size)
}

/// Edges of `count` bins with equal analytic probability, in the units of `scaling`.
/// The last edge is `+∞`.
pub fn equal_mass_edges(params: &EnsembleParams, count: usize, scaling: RadialScaling) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::usage("need at least one bin"));
    }
    let ev = RadialEvaluator::new(params, MellinBarnesConfig::default())?;
    let sp = ScaledParams::from_ensemble(params);
    let top = 4.0 * sp.support().1 * sp.radius_scale();
    const CELLS: usize = 400;
    let cell_mass: Vec<f64> = (0..CELLS)
        .into_par_iter()
        .map(|i| {
            let a = top * i as f64 / CELLS as f64;
            let b = top * (i + 1) as f64 / CELLS as f64;
            representative_mass(&ev, a, b)
        })
        .collect::<Result<_>>()?;
    let mut cdf = Vec::with_capacity(CELLS + 1);
    cdf.push(0.0);
    for m in &cell_mass {
        cdf.push(cdf.last().unwrap() + m);
    }
    let total = *cdf.last().unwrap();
    let scale = scaling.factor(params);
    let mut edges = vec![0.0];
    for j in 1..count {
        let target = total * j as f64 / count as f64;
        let i = cdf.partition_point(|&c| c < target).clamp(1, CELLS);
        let (c0, c1) = (cdf[i - 1], cdf[i]);
        let frac = if c1 > c0 { (target - c0) / (c1 - c0) } else { 0.0 };
        let r = top * ((i - 1) as f64 + frac) / CELLS as f64;
        edges.push(r / scale);
    }
    edges.push(f64::INFINITY);
    Ok(edges)
}

/// Per-bin agreement between a histogram and the analytic density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityComparison {
    /// Analytic parameters the histogram was compared against.
    pub params: EnsembleParams,
    pub observed: Vec<u64>,
    pub expected: Vec<f64>,
    pub z_scores: Vec<f64>,
    pub max_abs_z: f64,
    pub chi_square: f64,
    pub dof: usize,
}

impl DensityComparison {
    /// `max|z| ≤ z_max` and `|χ² − dof| ≤ sigmas·√(2·dof)`.
    pub fn passes(&self, z_max: f64, sigmas: f64) -> bool {
        let dof = self.dof as f64;
        self.max_abs_z <= z_max && (self.chi_square - dof).abs() <= sigmas * (2.0 * dof).sqrt()
    }
}

/// Compares the bin counts (plus the overflow cell, when the last edge is
/// finite) with `draws × ½ ∫_bin 2πr ρ_N dr` for the ensemble `params`.
pub fn compare_to_density(hist: &RadialHistogram, params: &EnsembleParams) -> Result<DensityComparison> {
    check_sampler_params(params)?;
    if hist.draws == 0 {
        return Err(Error::usage("empty histogram"));
    }
    if hist.edges[0] != 0.0 {
        return Err(Error::usage("comparison needs bins starting at radius 0"));
    }
    let ev = RadialEvaluator::new(params, MellinBarnesConfig::default())?;
    let scale = hist.scaling.factor(&hist.params);
    let mut cells: Vec<(f64, f64, u64)> = hist
        .edges
        .windows(2)
        .zip(&hist.counts)
        .map(|(w, &c)| (w[0] * scale, w[1] * scale, c))
        .collect();
    let last = *hist.edges.last().unwrap();
    if last.is_finite() {
        cells.push((last * scale, f64::INFINITY, hist.overflow));
    }
    let per_draw = params.size as f64 * hist.draws as f64;
    let expected: Vec<f64> = cells
        .par_iter()
        .map(|&(a, b, _)| representative_mass(&ev, a, b).map(|p| p * per_draw))
        .collect::<Result<_>>()?;
    let observed: Vec<u64> = cells.iter().map(|c| c.2).collect();
    let z_scores: Vec<f64> = observed
        .iter()
        .zip(&expected)
        .map(|(&o, &e)| {
            let diff = o as f64 - e;
            if e > 0.0 {
                diff / e.sqrt()
            } else if o == 0 {
                0.0
            } else {
                f64::INFINITY
            }
        })
        .collect();
    let chi_square = z_scores.iter().map(|z| z * z).sum();
    let max_abs_z = z_scores.iter().fold(0.0f64, |m, z| m.max(z.abs()));
    Ok(DensityComparison {
        params: *params,
        observed,
        expected,
        z_scores,
        max_abs_z,
        chi_square,
        dof: cells.len() - 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn block_pattern_of_expansion() {
        let mut rng = draw_rng(3, 0);
        let q = sample_factor(4, &mut rng);
        let x = q.expand();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(x[(2 * a, 2 * b + 1)], -x[(2 * a + 1, 2 * b)].conj());
                assert_eq!(x[(2 * a + 1, 2 * b + 1)], x[(2 * a, 2 * b)].conj());
            }
        }
    }

    #[test]
    fn factor_second_moment() {
        let size = 3;
        let draws = 10_000;
        let mut rng = draw_rng(5, 0);
        let traces: Vec<f64> = (0..draws)
            .map(|_| sample_factor(size, &mut rng).expand().norm().powi(2))
            .collect();
        let mean = traces.iter().sum::<f64>() / draws as f64;
        let want = 4.0 * (size * size) as f64;
        let se = (8.0 * (size * size) as f64 / draws as f64).sqrt();
        assert!((mean - want).abs() < 3.0 * se, "E tr X†X = {mean}, want {want} ± {se}");
    }

    #[test]
    fn single_quaternion_closed_form() {
        let p = EnsembleParams::new(1, 0.0, 1).unwrap();
        for draw in 0..200 {
            // replay the draw's factor to get u and v
            let q = sample_factor(1, &mut draw_rng(9, draw));
            let (u, v) = (q.u(0, 0), q.v(0, 0));
            let s = sample_draw(&p, 9, draw).unwrap();
            let want = c(u.re, (u.im * u.im + v.norm_sqr()).sqrt());
            assert!((s.eigenvalues[0] - want).norm() < 1e-13 * want.norm(), "{} vs {want}", s.eigenvalues[0]);
        }
    }

    #[test]
    fn single_quaternion_mean_square_modulus() {
        let p = EnsembleParams::new(1, 0.0, 1).unwrap();
        let draws = 100_000;
        let s = sample_many(&p, 21, draws).unwrap();
        let mean = s.iter().map(|s| s.eigenvalues[0].norm_sqr()).sum::<f64>() / draws as f64;
        let se = (2.0 / draws as f64).sqrt();
        assert!((mean - 2.0).abs() < 3.0 * se, "E|z|² = {mean}");
    }

    #[test]
    fn determinant_and_pairing_checks() {
        for n in 1..=3 {
            for size in [5, 10] {
                let p = EnsembleParams::new(n, 0.0, size).unwrap();
                for s in sample_many(&p, 77, 20).unwrap() {
                    assert_eq!(s.eigenvalues.len(), size);
                    assert!(s.eigenvalues.iter().all(|z| z.im >= 0.0));
                    assert!(s.det_residual <= 1e-8, "n={n} N={size} det residual {}", s.det_residual);
                    assert!(s.pairing_residual <= 1e-6);
                }
            }
        }
    }

    #[test]
    fn full_spectrum_is_conjugation_closed() {
        let p = EnsembleParams::new(2, 0.0, 6).unwrap();
        let mut rng = draw_rng(1, 4);
        let x = sample_factor(6, &mut rng).expand().matmul(&sample_factor(6, &mut rng).expand());
        let eig = eigenvalues_dense(&x).unwrap();
        let radius = eig.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for z in &eig {
            let d = eig.iter().map(|w| (w - z.conj()).norm()).fold(f64::INFINITY, f64::min);
            assert!(d <= 1e-6 * radius);
        }
        let _ = p;
    }

    #[test]
    fn reproducible_and_schedule_independent() {
        let p = EnsembleParams::new(3, 0.0, 4).unwrap();
        let a = sample_many(&p, 42, 16).unwrap();
        let b = sample_many(&p, 42, 16).unwrap();
        assert_eq!(a, b);
        let single = sample_draw(&p, 42, 11).unwrap();
        assert_eq!(single, a[11]);
        assert_ne!(a[0].eigenvalues, sample_many(&p, 43, 1).unwrap()[0].eigenvalues);
    }

    #[test]
    fn induced_ensemble_is_rejected() {
        let p = EnsembleParams::new(1, 1.0, 3).unwrap();
        assert!(matches!(sample_many(&p, 1, 1), Err(Error::Usage(_))));
    }

    #[test]
    fn pairing_failure_is_an_integrity_error() {
        let r = pair_conjugates(&[c(1.0, 1.0), c(2.0, -1.0)]);
        assert!(matches!(r, Err(Error::Integrity(_))));
        let (reps, res, real) = pair_conjugates(&[c(1.0, -1e-12), c(1.0, 1e-12), c(0.0, -2.0), c(0.0, 2.0)]).unwrap();
        assert!(real);
        assert!(res < 1e-11);
        assert!(reps.iter().all(|z| z.im >= 0.0));
    }

    #[test]
    fn histogram_bookkeeping() {
        let p = EnsembleParams::new(1, 0.0, 5).unwrap();
        let s = sample_many(&p, 2, 30).unwrap();
        let h = radial_histogram(&s, RadialScaling::Scaled, &BinSpec::Uniform { max: 3.0, count: 30 }).unwrap();
        assert_eq!(h.total, 150);
        assert_eq!(h.counts.iter().sum::<u64>() + h.overflow, 150);
        // nothing lies far outside the unit disc
        assert_eq!(h.overflow, 0);
        assert!(h.counts[20..].iter().all(|&c| c == 0));
        let dens = h.densities();
        let mass: f64 = dens.iter().map(|d| d.density * std::f64::consts::PI * (d.hi * d.hi - d.lo * d.lo)).sum();
        assert!((mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equal_mass_edges_split_the_probability() {
        let p = EnsembleParams::new(2, 0.0, 3).unwrap();
        let edges = equal_mass_edges(&p, 8, RadialScaling::Raw).unwrap();
        assert_eq!(edges.len(), 9);
        assert!(edges[8].is_infinite());
        let ev = RadialEvaluator::new(&p, MellinBarnesConfig::default()).unwrap();
        for w in edges.windows(2) {
            let m = representative_mass(&ev, w[0], w[1]).unwrap();
            assert!((m - 0.125).abs() < 1e-3, "bin [{}, {}] holds {m}", w[0], w[1]);
        }
    }

    #[test]
    fn bad_histogram_inputs() {
        assert!(radial_histogram(&[], RadialScaling::Raw, &BinSpec::EqualMass { count: 4 }).is_err());
        let p = EnsembleParams::new(1, 0.0, 2).unwrap();
        let s = sample_many(&p, 2, 3).unwrap();
        assert!(radial_histogram(&s, RadialScaling::Raw, &BinSpec::Edges(vec![0.0, 2.0, 1.0])).is_err());
        assert!(radial_histogram(&s, RadialScaling::Raw, &BinSpec::Uniform { max: 0.0, count: 3 }).is_err());
        assert_eq!("scaled".parse::<RadialScaling>().unwrap(), RadialScaling::Scaled);
        assert!("log".parse::<RadialScaling>().is_err());
    }
}
