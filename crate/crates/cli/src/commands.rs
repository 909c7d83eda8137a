use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use quatginibre::correlations::{CorrelationEvaluator, CorrelationPointSet, PrekernelEvaluator, WeightEvaluator};
use quatginibre::ensemble::{build_basis, EnsembleParams, SkewPolyBasis};
use quatginibre::radial::{density_table, DensityMode, DensityRequest, DensityTable, GridSpec, ScaledParams, TableMetadata};
use quatginibre::sampler::{
    compare_to_density, radial_histogram, sample_many, BinSpec, DensityComparison, EigenvalueSample, RadialScaling,
};
use quatginibre::specfun::MellinBarnesConfig;
use quatginibre::verify::{self, VerifyOptions, VerifyReport};

use crate::output::{Cell, Sink, Table};
use crate::{CliError, CorrArgs, EnsembleArgs, KernelArgs, PolysArgs, QuadratureArgs, RadialArgs, SampleArgs, VerifyArgs, WeightArgs};

impl EnsembleArgs {
    pub fn params(&self) -> Result<EnsembleParams, CliError> {
        let m = match (self.m, self.m_hat) {
            (Some(m), _) => m,
            (None, Some(mh)) => mh * self.size as f64,
            (None, None) => 0.0,
        };
        Ok(EnsembleParams::new(self.n, m, self.size)?)
    }
}

impl QuadratureArgs {
    pub fn config(&self) -> MellinBarnesConfig {
        MellinBarnesConfig {
            contour_abscissa: self.mb_contour,
            rel_tol: self.mb_rel_tol,
            ..MellinBarnesConfig::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSettings {
    pub n: u32,
    pub m: f64,
    pub grid: GridSpec,
    pub mellin_barnes: MellinBarnesConfig,
    pub asymptotic: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightTable {
    pub settings: WeightSettings,
    pub r: Vec<f64>,
    pub weight: Vec<f64>,
    pub weight_asymptotic: Option<Vec<f64>>,
}

pub fn weight(a: &WeightArgs, sink: &Sink) -> Result<(), CliError> {
    let params = a.ensemble.params()?;
    let grid: GridSpec = a.grid.parse()?;
    let cfg = a.quadrature.config();
    let ev = WeightEvaluator::new(&params, cfg)?;
    let r = grid.points();
    let weight = r
        .iter()
        .map(|&x| ev.ln_weight_radial(x).map(f64::exp))
        .collect::<Result<Vec<_>, _>>()?;
    let weight_asymptotic = if a.asymptotic {
        Some(
            r.iter()
                .map(|&x| ev.weight_asymptotic(Complex64::new(x, 0.0)))
                .collect::<Result<Vec<_>, _>>()?,
        )
    } else {
        None
    };
    let mut header = vec!["r", "weight"];
    if a.asymptotic {
        header.push("weight_asymptotic");
    }
    let mut t = Table::new(&header);
    for (i, (&x, &w)) in r.iter().zip(&weight).enumerate() {
        let mut row = vec![Cell::from(x), Cell::from(w)];
        if let Some(asym) = &weight_asymptotic {
            row.push(Cell::from(asym[i]));
        }
        t.push(row);
    }
    let settings = WeightSettings {
        n: params.n,
        m: params.m,
        grid,
        mellin_barnes: cfg,
        asymptotic: a.asymptotic,
    };
    let full = WeightTable {
        settings: settings.clone(),
        r,
        weight,
        weight_asymptotic,
    };
    sink.emit("weight", &[("", &t)], &settings, &full)
}

fn default_grid(mode: DensityMode, sp: &ScaledParams) -> GridSpec {
    let hi = sp.support().1;
    let raw_hi = hi * sp.radius_scale();
    let (min, max, count, log) = match mode {
        DensityMode::Exact => (1e-3, 1.5 * raw_hi, 201, true),
        DensityMode::Origin => (1e-3, 5.0, 201, true),
        DensityMode::Asymptotic => (0.01 * raw_hi, 1.5 * raw_hi, 201, false),
        DensityMode::Scaled | DensityMode::AsymptoticEdge | DensityMode::Macroscopic => (1e-3 * hi, 1.5 * hi, 301, false),
        DensityMode::Bulk => (0.1, 10.0, 100, false),
        DensityMode::Edge => (-3.0, 3.0, 121, false),
    };
    GridSpec { min, max, count, log }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialSidecar {
    pub request: DensityRequest,
    pub metadata: TableMetadata,
}

pub fn radial(a: &RadialArgs, mode: DensityMode, sink: &Sink) -> Result<(), CliError> {
    let params = a.ensemble.params()?;
    let grid = match &a.grid {
        Some(g) => g.parse()?,
        None => default_grid(mode, &ScaledParams::from_ensemble(&params)),
    };
    let request = DensityRequest {
        mode,
        n: params.n,
        m: params.m,
        size: params.size,
        grid,
        mellin_barnes: a.quadrature.config(),
    };
    let table: DensityTable = density_table(&request)?;
    let mut t = Table::new(&[mode.variable(), "density"]);
    for (&x, &v) in table.grid.iter().zip(&table.values) {
        t.push(vec![Cell::from(x), Cell::from(v)]);
    }
    let sidecar = RadialSidecar {
        request,
        metadata: table.metadata.clone(),
    };
    sink.emit("radial", &[("", &t)], &sidecar, &table)
}

pub fn polys(a: &PolysArgs, sink: &Sink) -> Result<(), CliError> {
    let params = a.ensemble.params()?;
    let kmax = a.kmax.unwrap_or(params.size - 1);
    let basis: SkewPolyBasis = build_basis(&params, kmax)?;
    let mut coeffs = Table::new(&["degree", "power", "coefficient"]);
    for d in 0..=basis.max_degree() {
        for (p, c) in basis.coefficients(d)?.into_iter().enumerate() {
            coeffs.push(vec![Cell::from(d), Cell::from(p), Cell::from(c)]);
        }
    }
    let mut norms = Table::new(&["k", "h", "log_h"]);
    for (k, lh) in basis.log_h.iter().enumerate() {
        norms.push(vec![Cell::from(k), Cell::from(lh.exp()), Cell::from(*lh)]);
    }
    #[derive(Serialize)]
    struct Sidecar {
        params: EnsembleParams,
        max_index: usize,
    }
    let sidecar = Sidecar { params, max_index: kmax };
    sink.emit("polys", &[("", &coeffs), ("_norms", &norms)], &sidecar, &basis)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelRow {
    pub u: Complex64,
    pub v: Complex64,
    /// `None` when the value is outside double range; `ln_abs` still holds it.
    pub kappa: Option<Complex64>,
    /// `None` when κ vanishes.
    pub ln_abs: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelTable {
    pub params: EnsembleParams,
    pub rows: Vec<KernelRow>,
}

pub fn kernel(a: &KernelArgs, sink: &Sink) -> Result<(), CliError> {
    let params = a.ensemble.params()?;
    let ev = PrekernelEvaluator::new(&params)?;
    let mut rows = Vec::new();
    let mut t = Table::new(&["u_re", "u_im", "v_re", "v_im", "kappa_re", "kappa_im", "ln_abs_kappa"]);
    for &(u, v) in &a.pairs {
        let s = ev.eval_scaled(u, v)?;
        let z = s.to_complex();
        let finite = z.re.is_finite() && z.im.is_finite();
        let ln_abs = s.ln_abs();
        t.push(vec![u.re.into(), u.im.into(), v.re.into(), v.im.into(), z.re.into(), z.im.into(), ln_abs.into()]);
        rows.push(KernelRow {
            u,
            v,
            kappa: finite.then_some(z),
            ln_abs: ln_abs.is_finite().then_some(ln_abs),
        });
    }
    let full = KernelTable { params, rows };
    sink.emit("kernel", &[("", &t)], &params, &full)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrResult {
    pub params: EnsembleParams,
    pub points: Vec<Complex64>,
    /// `true`: `values[i] = R_1(points[i])`; `false`: one value `R_k(points)`.
    pub each: bool,
    pub values: Vec<f64>,
}

pub fn corr(a: &CorrArgs, sink: &Sink) -> Result<(), CliError> {
    let params = a.ensemble.params()?;
    let ev = CorrelationEvaluator::new(&params, a.quadrature.config())?;
    let (t, values) = if a.each {
        let mut t = Table::new(&["re", "im", "r1"]);
        let mut values = Vec::new();
        for &z in &a.points {
            let v = ev.density_r1(z)?;
            t.push(vec![z.re.into(), z.im.into(), v.into()]);
            values.push(v);
        }
        (t, values)
    } else {
        let v = ev.correlation_rk(&CorrelationPointSet::new(a.points.clone())?)?;
        let mut t = Table::new(&["k", "value"]);
        t.push(vec![a.points.len().into(), v.into()]);
        (t, vec![v])
    };
    let full = CorrResult {
        params,
        points: a.points.clone(),
        each: a.each,
        values,
    };
    #[derive(Serialize)]
    struct Sidecar<'a> {
        params: EnsembleParams,
        points: &'a [Complex64],
        each: bool,
    }
    let sidecar = Sidecar {
        params,
        points: &a.points,
        each: a.each,
    };
    sink.emit("corr", &[("", &t)], &sidecar, &full)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub params: EnsembleParams,
    pub seed: u64,
    pub draws: usize,
    pub scaling: RadialScaling,
    pub bins: BinSpec,
    pub max_pairing_residual: f64,
    pub max_det_residual: f64,
    /// Draws in which some conjugate pair was numerically real.
    pub real_pair_draws: usize,
    /// Largest |z| (or |ẑ|) over all draws.
    pub max_radius: f64,
    pub total: u64,
    pub overflow: u64,
    pub chi_square: f64,
    pub dof: usize,
    pub max_abs_z: f64,
    /// max |z-score| ≤ 4 and |χ² − dof| ≤ 4√(2 dof).
    pub passes_4sigma: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramRow {
    pub lo: f64,
    /// `None` for an open-ended bin.
    pub hi: Option<f64>,
    pub count: u64,
    pub density: f64,
    pub std_error: f64,
    pub expected: f64,
    pub z_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRun {
    pub summary: SampleSummary,
    pub histogram: Vec<HistogramRow>,
    pub comparison: DensityComparison,
    pub samples: Vec<EigenvalueSample>,
}

pub fn sample(a: &SampleArgs, sink: &Sink) -> Result<(), CliError> {
    let params = a.ensemble.params()?;
    if a.draws == 0 {
        return Err(CliError::Usage("--draws must be at least 1".into()));
    }
    let samples = sample_many(&params, a.seed, a.draws)?;
    let scaling = if a.scaled { RadialScaling::Scaled } else { RadialScaling::Raw };
    let scale = if a.scaled { ScaledParams::from_ensemble(&params).radius_scale() } else { 1.0 };
    let bins = match a.bin_max {
        Some(max) => BinSpec::Uniform { max, count: a.bins },
        None => BinSpec::EqualMass { count: a.bins },
    };
    let hist = radial_histogram(&samples, scaling, &bins)?;
    let cmp = compare_to_density(&hist, &params)?;

    let mut scatter = Table::new(&["draw", "re", "im"]);
    for s in &samples {
        for z in &s.eigenvalues {
            for w in [*z, z.conj()] {
                scatter.push(vec![s.draw.into(), (w.re / scale).into(), (w.im / scale).into()]);
            }
        }
    }
    let mut rows: Vec<HistogramRow> = hist
        .densities()
        .into_iter()
        .enumerate()
        .map(|(i, b)| HistogramRow {
            lo: b.lo,
            hi: b.hi.is_finite().then_some(b.hi),
            count: b.count,
            density: b.density,
            std_error: b.std_error,
            expected: cmp.expected[i],
            z_score: cmp.z_scores[i],
        })
        .collect();
    if cmp.expected.len() > rows.len() {
        // open cell beyond the last finite edge
        let i = rows.len();
        rows.push(HistogramRow {
            lo: *hist.edges.last().unwrap(),
            hi: None,
            count: hist.overflow,
            density: 0.0,
            std_error: 0.0,
            expected: cmp.expected[i],
            z_score: cmp.z_scores[i],
        });
    }
    let mut ht = Table::new(&["lo", "hi", "count", "density", "std_error", "expected", "z_score"]);
    for r in &rows {
        ht.push(vec![
            r.lo.into(),
            r.hi.unwrap_or(f64::INFINITY).into(),
            r.count.into(),
            r.density.into(),
            r.std_error.into(),
            r.expected.into(),
            r.z_score.into(),
        ]);
    }
    let summary = SampleSummary {
        params,
        seed: a.seed,
        draws: a.draws,
        scaling,
        bins,
        max_pairing_residual: samples.iter().map(|s| s.pairing_residual).fold(0.0, f64::max),
        max_det_residual: samples.iter().map(|s| s.det_residual).fold(0.0, f64::max),
        real_pair_draws: samples.iter().filter(|s| s.real_pair).count(),
        max_radius: samples
            .iter()
            .flat_map(|s| &s.eigenvalues)
            .map(|z| z.norm() / scale)
            .fold(0.0, f64::max),
        total: hist.total,
        overflow: hist.overflow,
        chi_square: cmp.chi_square,
        dof: cmp.dof,
        max_abs_z: cmp.max_abs_z,
        passes_4sigma: cmp.passes(4.0, 4.0),
    };
    println!(
        "max radius {:.4}, chi-square {:.2} on {} dof, max |z| {:.2}",
        summary.max_radius, summary.chi_square, summary.dof, summary.max_abs_z
    );
    let full = SampleRun {
        summary: summary.clone(),
        histogram: rows,
        comparison: cmp,
        samples,
    };
    sink.emit("sample", &[("", &scatter), ("_hist", &ht)], &summary, &full)
}

pub fn verify(a: &VerifyArgs, sink: &Sink) -> Result<(), CliError> {
    let opts = VerifyOptions {
        seed: a.seed,
        mc_draws: a.draws,
        criteria: if a.criteria.is_empty() { verify::CRITERIA.to_vec() } else { a.criteria.clone() },
    };
    let report: VerifyReport = verify::run(&opts)?;
    for c in &report.checks {
        let measured = c.measured.map_or("n/a".to_string(), |m| format!("{m:.3e}"));
        println!(
            "criterion {} {} {}: measured {measured}, tolerance {:.1e}{}",
            c.criterion,
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.tolerance,
            if c.detail.is_empty() { String::new() } else { format!(" ({})", c.detail) }
        );
    }
    sink.emit_json("verify", &report)?;
    let failures = report.checks.iter().filter(|c| !c.passed).count();
    if failures > 0 {
        return Err(CliError::VerifyFailed(failures));
    }
    Ok(())
}
