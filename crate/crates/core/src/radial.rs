//! Phase-averaged (radial) density of states: the exact finite-N expression,
//! its scaled form, large-N asymptotics, the macroscopic annulus law and the
//! microscopic bulk, edge and origin limits.
//!
//! The exact density is
//!
//! ```text
//! ρ_N(r) = (2/π) G^{n,0}_{0,n}(−; m,…,m; r²) Σ_{k<N} r^{4k+2} / Γ(m+2k+2)ⁿ,
//! ```
//!
//! normalised to `∫ 2πr ρ_N dr = 2N`. Both factors are carried as logarithms:
//! at `N = 100, m = 125, n = 3` they are of order `e^{±2000}`.

use std::f64::consts::{FRAC_1_PI, PI};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensemble::EnsembleParams;
use crate::error::{Error, Result};
use crate::quadrature::integrate_to_infinity;
use crate::scaled::LogSumExp;
use crate::specfun::{erfc, hyp_1_f_2n, ln_gamma, ln_meijer_g, MellinBarnesConfig};

/// Strong-induced parametrisation `m = 2N m̂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledParams {
    pub n: u32,
    pub m_hat: f64,
    #[serde(rename = "N")]
    pub size: usize,
}

impl ScaledParams {
    pub fn new(n: u32, m_hat: f64, size: usize) -> Result<Self> {
        let sp = Self { n, m_hat, size };
        sp.ensemble()?;
        Ok(sp)
    }

    pub fn from_ensemble(p: &EnsembleParams) -> Self {
        Self {
            n: p.n,
            m_hat: p.m / (2.0 * p.size as f64),
            size: p.size,
        }
    }

    pub fn ensemble(&self) -> Result<EnsembleParams> {
        EnsembleParams::new(self.n, 2.0 * self.size as f64 * self.m_hat, self.size)
    }

    /// `(2N)^{n/2}`, the radius scale between `r` and `r̂`.
    pub fn radius_scale(&self) -> f64 {
        (2.0 * self.size as f64).powf(0.5 * f64::from(self.n))
    }

    /// Inner and outer radius of the limiting annulus, `m̂^{n/2}` and `(m̂+1)^{n/2}`.
    pub fn support(&self) -> (f64, f64) {
        support(self.n, self.m_hat)
    }
}

fn support(n: u32, m_hat: f64) -> (f64, f64) {
    let h = 0.5 * f64::from(n);
    (m_hat.powf(h), (m_hat + 1.0).powf(h))
}

/// Exact finite-N radial density with a precomputed `ln Γ(m+2k+2)` table.
#[derive(Debug, Clone)]
pub struct RadialEvaluator {
    params: EnsembleParams,
    config: MellinBarnesConfig,
    ln_gamma_terms: Vec<f64>,
}

impl RadialEvaluator {
    pub fn new(params: &EnsembleParams, config: MellinBarnesConfig) -> Result<Self> {
        params.validate()?;
        config.validate(params.m)?;
        let nf = params.nf();
        let ln_gamma_terms = (0..params.size)
            .map(|k| nf * ln_gamma(params.m + 2.0 * k as f64 + 2.0))
            .collect();
        Ok(Self {
            params: *params,
            config,
            ln_gamma_terms,
        })
    }

    pub fn params(&self) -> &EnsembleParams {
        &self.params
    }

    /// `ln ρ_N(r)`; `−∞` at `r = 0`, where the density vanishes.
    pub fn ln_density(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        if r == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        let ln_r = r.ln();
        let sum: LogSumExp = self
            .ln_gamma_terms
            .iter()
            .enumerate()
            .map(|(k, lg)| (4.0 * k as f64 + 2.0) * ln_r - lg)
            .collect();
        let ln_g = ln_meijer_g(self.params.n, self.params.m, r * r, &self.config)?;
        Ok((2.0 * FRAC_1_PI).ln() + ln_g + sum.value())
    }

    /// `ρ_N(r)`.
    pub fn density(&self, r: f64) -> Result<f64> {
        self.ln_density(r).map(f64::exp)
    }

    /// `ρ̂_N(r̂) = (2N)^{n−1} ρ_N(r̂ (2N)^{n/2})`.
    pub fn density_scaled(&self, r_hat: f64) -> Result<f64> {
        check_radius(r_hat)?;
        let two_n = 2.0 * self.params.size as f64;
        let nf = self.params.nf();
        let ln = self.ln_density(r_hat * two_n.powf(0.5 * nf))?;
        Ok(((nf - 1.0) * two_n.ln() + ln).exp())
    }

    /// `∫₀^∞ 2πr ρ_N dr`, which should equal `2N`.
    pub fn total_mass(&self, rel_tol: f64) -> Result<f64> {
        let sp = ScaledParams::from_ensemble(&self.params);
        let piece = 0.25 * sp.support().1 * sp.radius_scale();
        integrate_to_infinity(|r| Ok(2.0 * PI * r * self.density(r)?), 0.0, piece, rel_tol)
    }

    /// `∫₀^∞ 2πr̂ ρ̂_N dr̂`, which should equal 1.
    pub fn scaled_mass(&self, rel_tol: f64) -> Result<f64> {
        let sp = ScaledParams::from_ensemble(&self.params);
        let piece = 0.25 * sp.support().1;
        integrate_to_infinity(
            |r| Ok(2.0 * PI * r * self.density_scaled(r)?),
            0.0,
            piece,
            rel_tol,
        )
    }
}

fn check_radius(r: f64) -> Result<()> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::domain(format!("radius must be finite and >= 0, got {r}")));
    }
    Ok(())
}

fn check_positive(x: f64, what: &str) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(format!("{what} must be finite and > 0, got {x}")));
    }
    Ok(())
}

/// `ρ_N(r)` with default quadrature settings.
pub fn radial_density(params: &EnsembleParams, r: f64) -> Result<f64> {
    RadialEvaluator::new(params, MellinBarnesConfig::default())?.density(r)
}

/// `ρ̂_N(r̂)` with default quadrature settings.
pub fn radial_density_scaled(sp: &ScaledParams, r_hat: f64) -> Result<f64> {
    RadialEvaluator::new(&sp.ensemble()?, MellinBarnesConfig::default())?.density_scaled(r_hat)
}

/// `½ (erfc x − erfc y)` without cancellation when both arguments are negative.
fn half_erfc_difference(x: f64, y: f64) -> f64 {
    if x < 0.0 && y < 0.0 {
        0.5 * (erfc(-y) - erfc(-x))
    } else {
        0.5 * (erfc(x) - erfc(y))
    }
}

/// Two-edge erfc approximation to `ρ_N(r)`:
/// `(r^{2/n−2}/nπ) · ½ (erfc[√(n/2)(r^{2/n}−(m+2N))/r^{1/n}] − erfc[√(n/2)(r^{2/n}−m)/r^{1/n}])`.
pub fn radial_density_asymptotic(params: &EnsembleParams, r: f64) -> Result<f64> {
    params.validate()?;
    check_positive(r, "radius")?;
    let nf = params.nf();
    let s = r.powf(1.0 / nf);
    let c = (0.5 * nf).sqrt();
    let outer = c * (s * s - (params.m + 2.0 * params.size as f64)) / s;
    let inner = c * (s * s - params.m) / s;
    Ok(r.powf(2.0 / nf - 2.0) / (nf * PI) * half_erfc_difference(outer, inner))
}

/// Outer-edge-only form for `m = O(1)`:
/// `(r^{2/n−2}/nπ) · ½ erfc[√(n/2)(r^{2/n}−2N)/r^{1/n}]`, valid for `1 ≪ r ⪅ (2N)^{n/2}`.
pub fn radial_density_asymptotic_outer(params: &EnsembleParams, r: f64) -> Result<f64> {
    params.validate()?;
    check_positive(r, "radius")?;
    let nf = params.nf();
    let s = r.powf(1.0 / nf);
    let arg = (0.5 * nf).sqrt() * (s * s - 2.0 * params.size as f64) / s;
    Ok(r.powf(2.0 / nf - 2.0) / (nf * PI) * 0.5 * erfc(arg))
}

/// [`radial_density_asymptotic`] in scaled variables, `(2N)^{n−1} ρ_asym(r̂ (2N)^{n/2})`.
pub fn radial_density_asymptotic_scaled(sp: &ScaledParams, r_hat: f64) -> Result<f64> {
    check_positive(r_hat, "scaled radius")?;
    let p = sp.ensemble()?;
    let two_n = 2.0 * sp.size as f64;
    Ok(two_n.powf(p.nf() - 1.0) * radial_density_asymptotic(&p, r_hat * sp.radius_scale())?)
}

/// Edge-linearised erfc approximation to `ρ̂_N(r̂)`:
/// `(r̂^{2/n−2}/nπ) · ½ (erfc[√(4N/n)(r̂−(m̂+1)^{n/2})/(m̂+1)^{(n−1)/2}] − erfc[√(4N/n)(r̂−m̂^{n/2})/m̂^{(n−1)/2}])`.
/// The inner term is dropped when `m̂ = 0`.
pub fn radial_density_asymptotic_edge(sp: &ScaledParams, r_hat: f64) -> Result<f64> {
    sp.ensemble()?;
    check_positive(r_hat, "scaled radius")?;
    let nf = f64::from(sp.n);
    let c = (4.0 * sp.size as f64 / nf).sqrt();
    let (r_in, r_out) = sp.support();
    let outer = c * (r_hat - r_out) / (sp.m_hat + 1.0).powf(0.5 * (nf - 1.0));
    let bracket = if sp.m_hat > 0.0 {
        let inner = c * (r_hat - r_in) / sp.m_hat.powf(0.5 * (nf - 1.0));
        half_erfc_difference(outer, inner)
    } else {
        0.5 * erfc(outer)
    };
    Ok(r_hat.powf(2.0 / nf - 2.0) / (nf * PI) * bracket)
}

/// Macroscopic density `(r̂^{2/n−2}/nπ)` on the closed annulus
/// `m̂^{n/2} ≤ r̂ ≤ (m̂+1)^{n/2}`, zero outside.
pub fn macroscopic_density(n: u32, m_hat: f64, r_hat: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::usage("number of factors n must be at least 1"));
    }
    if !(m_hat >= 0.0 && m_hat.is_finite()) {
        return Err(Error::usage(format!("m_hat must be finite and >= 0, got {m_hat}")));
    }
    check_radius(r_hat)?;
    let (lo, hi) = support(n, m_hat);
    if r_hat < lo || r_hat > hi {
        return Ok(0.0);
    }
    if r_hat == 0.0 && n > 1 {
        return Err(Error::domain("macroscopic density diverges at the origin for n >= 2"));
    }
    let nf = f64::from(n);
    Ok(r_hat.powf(2.0 / nf - 2.0) / (nf * PI))
}

/// Closed-form mass of the macroscopic density, `(m̂+1) − m̂`.
pub fn macroscopic_mass(n: u32, m_hat: f64) -> f64 {
    // ∫ 2πr̂ · r̂^{2/n−2}/(nπ) dr̂ = r̂^{2/n} between the edges
    let (lo, hi) = support(n, m_hat);
    let e = 2.0 / f64::from(n);
    hi.powf(e) - lo.powf(e)
}

/// Which spectral edge an edge variable refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Edge {
    Inner,
    Outer,
}

impl Edge {
    fn geometry(self, sp: &ScaledParams) -> Result<(f64, f64, f64)> {
        sp.ensemble()?;
        let nf = f64::from(sp.n);
        let c = (2.0 * sp.size as f64 / nf).sqrt();
        match self {
            Edge::Outer => {
                let base = sp.m_hat + 1.0;
                Ok((base.powf(0.5 * nf), base.powf(0.5 * (nf - 1.0)) / c, 1.0))
            }
            Edge::Inner => {
                if sp.m_hat <= 0.0 {
                    return Err(Error::domain("no inner edge when m_hat = 0"));
                }
                Ok((sp.m_hat.powf(0.5 * nf), sp.m_hat.powf(0.5 * (nf - 1.0)) / c, -1.0))
            }
        }
    }

    /// Edge radius `r̂_e` in scaled units.
    pub fn radius(self, sp: &ScaledParams) -> Result<f64> {
        self.geometry(sp).map(|g| g.0)
    }
}

/// `ε_out = √(2N/n)(r̂ − (m̂+1)^{n/2})/(m̂+1)^{(n−1)/2}`,
/// `ε_in = −√(2N/n)(r̂ − m̂^{n/2})/m̂^{(n−1)/2}`. Both are negative toward the bulk.
pub fn edge_variable(sp: &ScaledParams, r_hat: f64, edge: Edge) -> Result<f64> {
    if !r_hat.is_finite() {
        return Err(Error::domain(format!("scaled radius must be finite, got {r_hat}")));
    }
    let (re, width, sign) = edge.geometry(sp)?;
    Ok(sign * (r_hat - re) / width)
}

/// Inverse of [`edge_variable`].
pub fn edge_radius(sp: &ScaledParams, epsilon: f64, edge: Edge) -> Result<f64> {
    if !epsilon.is_finite() {
        return Err(Error::domain(format!("edge variable must be finite, got {epsilon}")));
    }
    let (re, width, sign) = edge.geometry(sp)?;
    Ok(re + sign * epsilon * width)
}

/// Universal edge profile `erfc(√2 ε)/(2π)`.
pub fn edge_density(epsilon: f64) -> f64 {
    erfc(std::f64::consts::SQRT_2 * epsilon) / (2.0 * PI)
}

/// `ρ̂_N` at edge coordinate `ε`, divided by the local plateau `r̂_e^{2/n−2}/n`
/// so that it tends to [`edge_density`] for every `n` and `m̂`.
pub fn edge_density_finite(ev: &RadialEvaluator, epsilon: f64, edge: Edge) -> Result<f64> {
    let sp = ScaledParams::from_ensemble(ev.params());
    let nf = f64::from(sp.n);
    let r_hat = edge_radius(&sp, epsilon, edge)?;
    let re = edge.radius(&sp)?;
    Ok(ev.density_scaled(r_hat)? * nf * re.powf(2.0 - 2.0 / nf))
}

/// Microscopic bulk density `1/(2π r̃)`.
pub fn bulk_density(r_tilde: f64) -> Result<f64> {
    check_positive(r_tilde, "unfolded radius")?;
    Ok(1.0 / (2.0 * PI * r_tilde))
}

/// Unfolding map `r̃ = r^{2/n}`.
pub fn unfold(n: u32, r: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::usage("number of factors n must be at least 1"));
    }
    check_radius(r)?;
    Ok(r.powf(2.0 / f64::from(n)))
}

/// Microscopic origin limit
/// `(2r²/(πΓ(m+2)ⁿ)) G^{n,0}_{0,n}(−; m,…,m; r²) ₁F₂ₙ(1; (m+2)/2 ×n, (m+3)/2 ×n; r⁴/2^{2n})`.
pub fn origin_density(n: u32, m: f64, r: f64) -> Result<f64> {
    origin_density_with(n, m, r, &MellinBarnesConfig::default())
}

pub fn origin_density_with(n: u32, m: f64, r: f64, cfg: &MellinBarnesConfig) -> Result<f64> {
    EnsembleParams::new(n, m, 1)?;
    check_radius(r)?;
    if r == 0.0 {
        return Ok(0.0);
    }
    let nf = f64::from(n);
    let y = (4.0 * r.ln() - 2.0 * nf * std::f64::consts::LN_2).exp();
    let ln = (2.0 * FRAC_1_PI).ln() + 2.0 * r.ln() - nf * ln_gamma(m + 2.0)
        + ln_meijer_g(n, m, r * r, cfg)?
        + hyp_1_f_2n(n, m, y)?.ln();
    Ok(ln.exp())
}

/// Radius grid `min:max:count[:log]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub log: bool,
}

impl GridSpec {
    pub fn new(min: f64, max: f64, count: usize, log: bool) -> Result<Self> {
        let g = Self { min, max, count, log };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(Error::usage(format!(
                "grid needs finite min < max, got {}:{}",
                self.min, self.max
            )));
        }
        if self.count < 2 {
            return Err(Error::usage(format!("grid needs at least 2 points, got {}", self.count)));
        }
        if self.log && self.min <= 0.0 {
            return Err(Error::usage("logarithmic grid needs min > 0"));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        let mut pts: Vec<f64> = (0..self.count)
            .map(|i| {
                let t = i as f64 / last;
                if self.log {
                    (self.min.ln() + t * (self.max.ln() - self.min.ln())).exp()
                } else {
                    self.min + t * (self.max - self.min)
                }
            })
            .collect();
        // pin the endpoints exactly
        pts[0] = self.min;
        pts[self.count - 1] = self.max;
        pts
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if !(parts.len() == 3 || parts.len() == 4) {
            return Err(Error::usage(format!("grid must look like min:max:count[:log], got {s:?}")));
        }
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::usage(format!("bad number {p:?} in grid {s:?}")))
        };
        let count = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::usage(format!("bad point count {:?} in grid {s:?}", parts[2])))?;
        let log = match parts.get(3).map(|p| p.trim()) {
            None | Some("lin") => false,
            Some("log") => true,
            Some(other) => {
                return Err(Error::usage(format!("grid spacing must be 'log' or 'lin', got {other:?}")))
            }
        };
        Self::new(num(parts[0])?, num(parts[1])?, count, log)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.count)?;
        if self.log {
            write!(f, ":log")?;
        }
        Ok(())
    }
}

/// Which density a table holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityMode {
    Exact,
    Scaled,
    Asymptotic,
    AsymptoticEdge,
    Macroscopic,
    Bulk,
    Edge,
    Origin,
}

impl DensityMode {
    pub const ALL: [DensityMode; 8] = [
        DensityMode::Exact,
        DensityMode::Scaled,
        DensityMode::Asymptotic,
        DensityMode::AsymptoticEdge,
        DensityMode::Macroscopic,
        DensityMode::Bulk,
        DensityMode::Edge,
        DensityMode::Origin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DensityMode::Exact => "exact",
            DensityMode::Scaled => "scaled",
            DensityMode::Asymptotic => "asymptotic",
            DensityMode::AsymptoticEdge => "asymptotic_edge",
            DensityMode::Macroscopic => "macroscopic",
            DensityMode::Bulk => "bulk",
            DensityMode::Edge => "edge",
            DensityMode::Origin => "origin",
        }
    }

    /// Name of the abscissa column.
    pub fn variable(self) -> &'static str {
        match self {
            DensityMode::Exact | DensityMode::Asymptotic | DensityMode::Origin => "r",
            DensityMode::Scaled | DensityMode::AsymptoticEdge | DensityMode::Macroscopic => "r_hat",
            DensityMode::Bulk => "r_tilde",
            DensityMode::Edge => "epsilon",
        }
    }

    /// Exact and origin densities span decades, so they default to a log grid.
    pub fn default_log_grid(self) -> bool {
        matches!(self, DensityMode::Exact | DensityMode::Origin)
    }
}

impl fmt::Display for DensityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DensityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "macro" => return Ok(DensityMode::Macroscopic),
            "asym" => return Ok(DensityMode::Asymptotic),
            _ => {}
        }
        DensityMode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::usage(format!("unknown density mode {s:?}")))
    }
}

/// Everything needed to fill a [`DensityTable`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityRequest {
    pub mode: DensityMode,
    pub n: u32,
    pub m: f64,
    #[serde(rename = "N")]
    pub size: usize,
    pub grid: GridSpec,
    pub mellin_barnes: MellinBarnesConfig,
}

impl DensityRequest {
    pub fn ensemble(&self) -> Result<EnsembleParams> {
        EnsembleParams::new(self.n, self.m, self.size)
    }

    pub fn scaled(&self) -> Result<ScaledParams> {
        Ok(ScaledParams::from_ensemble(&self.ensemble()?))
    }
}

/// Generation settings recorded alongside a table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableMetadata {
    pub library_version: String,
    pub m_hat: f64,
    pub variable: String,
}

/// A grid of `(radius, density)` pairs produced by one density mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityTable {
    pub request: DensityRequest,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub metadata: TableMetadata,
}

impl DensityTable {
    pub fn mode(&self) -> DensityMode {
        self.request.mode
    }

    /// Trapezoid estimate of `∫ 2πx ρ(x) dx` over the table.
    pub fn trapezoid_mass(&self) -> f64 {
        self.grid
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(x, y)| 0.5 * (x[1] - x[0]) * 2.0 * PI * (x[0] * y[0] + x[1] * y[1]))
            .sum()
    }
}

/// Evaluates the requested density on the grid, in parallel, in grid order.
pub fn density_table(request: &DensityRequest) -> Result<DensityTable> {
    request.grid.validate()?;
    let params = request.ensemble()?;
    let sp = ScaledParams::from_ensemble(&params);
    let grid = request.grid.points();
    let exact = match request.mode {
        DensityMode::Exact | DensityMode::Scaled => {
            Some(RadialEvaluator::new(&params, request.mellin_barnes)?)
        }
        _ => None,
    };
    let eval = |x: f64| -> Result<f64> {
        match request.mode {
            DensityMode::Exact => exact.as_ref().expect("built above").density(x),
            DensityMode::Scaled => exact.as_ref().expect("built above").density_scaled(x),
            DensityMode::Asymptotic => radial_density_asymptotic(&params, x),
            DensityMode::AsymptoticEdge => radial_density_asymptotic_edge(&sp, x),
            DensityMode::Macroscopic => macroscopic_density(sp.n, sp.m_hat, x),
            DensityMode::Bulk => bulk_density(x),
            DensityMode::Edge => Ok(edge_density(x)),
            DensityMode::Origin => origin_density_with(params.n, params.m, x, &request.mellin_barnes),
        }
    };
    let values = grid.par_iter().map(|&x| eval(x)).collect::<Result<Vec<f64>>>()?;
    if let Some((x, v)) = grid.iter().zip(&values).find(|(_, v)| !(**v >= 0.0 && v.is_finite())) {
        return Err(Error::numerical(format!("density at {x} is not a finite nonnegative number"), *v));
    }
    Ok(DensityTable {
        request: *request,
        grid,
        values,
        metadata: TableMetadata {
            library_version: crate::VERSION.to_string(),
            m_hat: sp.m_hat,
            variable: request.mode.variable().to_string(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(n: u32, m: f64, size: usize) -> RadialEvaluator {
        RadialEvaluator::new(&EnsembleParams::new(n, m, size).unwrap(), MellinBarnesConfig::default())
            .unwrap()
    }

    #[test]
    fn single_pair_closed_form() {
        let e = ev(1, 0.0, 1);
        for r in [0.1, 0.7, 1.0, 2.5] {
            let want = 2.0 / PI * r * r * (-r * r).exp();
            assert!((e.density(r).unwrap() - want).abs() < 1e-14 * want);
        }
        assert_eq!(e.density(0.0).unwrap(), 0.0);
        assert!(e.density(-1.0).is_err());
        let sp = ScaledParams::new(1, 0.0, 1).unwrap();
        let v = radial_density_scaled(&sp, 0.5f64.sqrt()).unwrap();
        assert!((v - 2.0 / PI * (-1f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn normalisation() {
        for n in 1..=3 {
            for m in [0.0, 1.0] {
                for size in [1, 5] {
                    let mass = ev(n, m, size).total_mass(1e-9).unwrap();
                    let want = 2.0 * size as f64;
                    assert!((mass - want).abs() < 1e-6 * want, "n={n} m={m} N={size} mass={mass}");
                }
            }
        }
    }

    #[test]
    fn large_parameters_stay_finite() {
        let e = ev(3, 125.0, 100);
        let sp = ScaledParams::from_ensemble(e.params());
        let (lo, hi) = sp.support();
        for i in 0..=20 {
            let r = lo + (hi - lo) * i as f64 / 20.0;
            let v = e.density_scaled(r).unwrap();
            assert!(v.is_finite() && v > 0.0, "r̂={r} v={v}");
        }
    }

    #[test]
    fn asymptotic_bulk_value() {
        let p = EnsembleParams::new(2, 0.0, 100).unwrap();
        let v = radial_density_asymptotic(&p, 10.0).unwrap();
        let want = 1.0 / (20.0 * PI);
        assert!((v - want).abs() < 0.01 * want);
    }

    #[test]
    fn outer_only_form_agrees_for_small_m() {
        let p = EnsembleParams::new(2, 0.0, 50).unwrap();
        // the dropped inner term is erfc(√(n/2) r^{1/n}), tiny once r ≫ 1
        for (r, tol) in [(10.0, 1e-5), (40.0, 1e-12), (90.0, 1e-12), (100.0, 1e-12), (110.0, 1e-12)] {
            let a = radial_density_asymptotic(&p, r).unwrap();
            let b = radial_density_asymptotic_outer(&p, r).unwrap();
            assert!((a - b).abs() <= tol * a.max(b), "r={r}");
        }
    }

    #[test]
    fn edge_form_properties() {
        for (n, m_hat) in [(1, 0.0), (2, 0.0), (3, 0.625)] {
            let sp = ScaledParams::new(n, m_hat, 100).unwrap();
            let (lo, hi) = sp.support();
            let nf = f64::from(n);
            let plateau = |r: f64| r.powf(2.0 / nf - 2.0) / (nf * PI);
            let at_edge = radial_density_asymptotic_edge(&sp, hi).unwrap();
            assert!((at_edge - 0.5 * plateau(hi)).abs() < 1e-12 * plateau(hi));
            let mid = 0.5 * (lo + hi);
            let deep = radial_density_asymptotic_edge(&sp, mid).unwrap();
            assert!((deep - plateau(mid)).abs() < 1e-3 * plateau(mid));
        }
    }

    #[test]
    fn macroscopic_law() {
        assert!((macroscopic_density(1, 0.0, 0.0).unwrap() - FRAC_1_PI).abs() < 1e-16);
        assert!((macroscopic_density(1, 0.0, 1.0).unwrap() - FRAC_1_PI).abs() < 1e-16);
        assert_eq!(macroscopic_density(1, 0.0, 1.0 + 1e-12).unwrap(), 0.0);
        assert!((macroscopic_density(2, 0.0, 0.5).unwrap() - FRAC_1_PI).abs() < 1e-15);
        assert!(macroscopic_density(2, 0.0, 0.0).is_err());
        assert_eq!(macroscopic_density(3, 0.625, 0.3).unwrap(), 0.0);
        for n in 1..=3 {
            for m_hat in [0.0, 0.625] {
                assert!((macroscopic_mass(n, m_hat) - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn edge_variables() {
        let sp = ScaledParams::new(3, 0.625, 40).unwrap();
        let (lo, hi) = sp.support();
        assert_eq!(edge_variable(&sp, hi, Edge::Outer).unwrap(), 0.0);
        assert_eq!(edge_variable(&sp, lo, Edge::Inner).unwrap(), 0.0);
        let mid = 0.5 * (lo + hi);
        assert!(edge_variable(&sp, mid, Edge::Outer).unwrap() < 0.0);
        assert!(edge_variable(&sp, mid, Edge::Inner).unwrap() < 0.0);
        for e in [-2.0, 0.3, 1.7] {
            for edge in [Edge::Inner, Edge::Outer] {
                let r = edge_radius(&sp, e, edge).unwrap();
                assert!((edge_variable(&sp, r, edge).unwrap() - e).abs() < 1e-12);
            }
        }
        let no_inner = ScaledParams::new(2, 0.0, 40).unwrap();
        assert!(matches!(edge_variable(&no_inner, 0.1, Edge::Inner), Err(Error::Domain(_))));
    }

    #[test]
    fn limit_profiles() {
        assert!((edge_density(0.0) - 0.5 / PI).abs() < 1e-16);
        assert!((edge_density(-30.0) - FRAC_1_PI).abs() < 1e-16);
        assert!(edge_density(30.0) < 1e-300);
        assert!((bulk_density(1.0).unwrap() - 0.5 / PI).abs() < 1e-16);
        assert!((bulk_density(2.0).unwrap() - 0.25 / PI).abs() < 1e-16);
        assert!((bulk_density(6.0).unwrap() - bulk_density(2.0).unwrap() / 3.0).abs() < 1e-16);
        assert_eq!(unfold(1, 4.0).unwrap(), 16.0);
        assert_eq!(unfold(2, 4.0).unwrap(), 4.0);
        assert!((unfold(4, 16.0).unwrap() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn origin_limit_matches_large_n() {
        for (n, m) in [(1, 0.0), (2, 1.0)] {
            let e = ev(n, m, 200);
            for r in [0.1, 0.5, 1.0, 2.0] {
                let a = e.density(r).unwrap();
                let b = origin_density(n, m, r).unwrap();
                assert!((a - b).abs() < 1e-8 * a, "n={n} m={m} r={r}");
            }
        }
        assert_eq!(origin_density(2, 0.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn grid_parsing() {
        let g: GridSpec = "0:1.2:121".parse().unwrap();
        let pts = g.points();
        assert_eq!(pts.len(), 121);
        assert_eq!(pts[0], 0.0);
        assert_eq!(pts[120], 1.2);
        assert!(pts.windows(2).all(|w| w[1] > w[0]));
        let g: GridSpec = "0.01:100:5:log".parse().unwrap();
        assert!((g.points()[2] - 1.0).abs() < 1e-12);
        assert_eq!(g.to_string(), "0.01:100:5:log");
        for bad in ["1:0:5", "0:1:1", "0:1", "a:1:3", "0:1:3:log", "0:1:3:cubic"] {
            assert!(bad.parse::<GridSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn macro_table() {
        let req = DensityRequest {
            mode: "macro".parse().unwrap(),
            n: 1,
            m: 0.0,
            size: 1,
            grid: "0:1.2:121".parse().unwrap(),
            mellin_barnes: MellinBarnesConfig::default(),
        };
        let t = density_table(&req).unwrap();
        for (x, v) in t.grid.iter().zip(&t.values) {
            if *x <= 1.0 {
                assert!((v - FRAC_1_PI).abs() < 1e-15);
            } else {
                assert_eq!(*v, 0.0);
            }
        }
    }

    #[test]
    fn exact_table_integrates_to_one() {
        let req = DensityRequest {
            mode: DensityMode::Scaled,
            n: 3,
            m: 0.0,
            size: 25,
            grid: "1e-4:1.6:801".parse().unwrap(),
            mellin_barnes: MellinBarnesConfig::default(),
        };
        let t = density_table(&req).unwrap();
        assert!((t.trapezoid_mass() - 1.0).abs() < 1e-3, "{}", t.trapezoid_mass());
    }

    #[test]
    fn edge_table_is_monotone() {
        let req = DensityRequest {
            mode: DensityMode::Edge,
            n: 1,
            m: 0.0,
            size: 1,
            grid: "-3:3:61".parse().unwrap(),
            mellin_barnes: MellinBarnesConfig::default(),
        };
        let t = density_table(&req).unwrap();
        assert!(t.values.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn mode_names_round_trip() {
        for m in DensityMode::ALL {
            assert_eq!(m.name().parse::<DensityMode>().unwrap(), m);
        }
        assert!("nope".parse::<DensityMode>().is_err());
    }
}
