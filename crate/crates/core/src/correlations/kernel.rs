//! The prekernel `κ_N(u, v)`.
//!
//! Two independent routes are provided. [`PrekernelEvaluator`] sums the
//! explicit double series
//!
//! ```text
//! κ_N(u,v) = 2/(πΓ(m+1))ⁿ Σ_{k<N} Σ_{ℓ≤k} [u^{2k+1} v^{2ℓ} − v^{2k+1} u^{2ℓ}] / (A_k B_ℓ),
//! A_k = Π_{j=0}^{k} (m+2j+1)ⁿ,   B_ℓ = Π_{j=1}^{ℓ} (m+2j)ⁿ,
//! ```
//!
//! with the inner sum accumulated as a running prefix so the cost is O(N).
//! [`prekernel_polynomial`] goes through the skew-orthogonal polynomials and
//! `h_k` instead and serves as the cross-check.

use num_complex::Complex64;

use crate::ensemble::{EnsembleParams, SkewPolyBasis};
use crate::error::{Error, Result};
use crate::scaled::{LogSumExp, ScaledComplex};
use crate::specfun::ln_gamma;

const LN_PI: f64 = 1.144_729_885_849_400_2;

/// Precomputed log-denominators of the double-sum form of `κ_N`.
#[derive(Debug, Clone)]
pub struct PrekernelEvaluator {
    params: EnsembleParams,
    ln_prefactor: f64,
    ln_a: Vec<f64>,
    ln_b: Vec<f64>,
}

/// `(ln|z|, arg z)` with the convention that `z^0 = 1` even at `z = 0`.
fn scaled_power(ln_r: f64, theta: f64, p: usize) -> ScaledComplex {
    if p == 0 {
        return ScaledComplex::from_polar_ln(0.0, 0.0);
    }
    let pf = p as f64;
    ScaledComplex::from_polar_ln(pf * ln_r, pf * theta)
}

impl PrekernelEvaluator {
    pub fn new(params: &EnsembleParams) -> Result<Self> {
        params.validate()?;
        let nf = params.nf();
        let m = params.m;
        let size = params.size;
        let mut ln_a = Vec::with_capacity(size);
        let mut ln_b = Vec::with_capacity(size);
        let (mut acc_a, mut acc_b) = (0.0, 0.0);
        for j in 0..size {
            acc_a += nf * (m + 2.0 * j as f64 + 1.0).ln();
            if j > 0 {
                acc_b += nf * (m + 2.0 * j as f64).ln();
            }
            ln_a.push(acc_a);
            ln_b.push(acc_b);
        }
        Ok(Self {
            params: *params,
            ln_prefactor: std::f64::consts::LN_2 - nf * (LN_PI + ln_gamma(m + 1.0)),
            ln_a,
            ln_b,
        })
    }

    pub fn params(&self) -> &EnsembleParams {
        &self.params
    }

    /// `κ_N(u, v)` in scaled form. Exactly antisymmetric: the pair is put in a
    /// canonical order, evaluated once, and negated for the other order.
    pub fn eval_scaled(&self, u: Complex64, v: Complex64) -> Result<ScaledComplex> {
        for z in [u, v] {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::domain(format!("prekernel argument {z} is not finite")));
            }
        }
        Ok(match canonical_order(u, v) {
            std::cmp::Ordering::Equal => ScaledComplex::ZERO,
            std::cmp::Ordering::Less => self.oriented(u, v),
            std::cmp::Ordering::Greater => self.oriented(v, u).neg(),
        })
    }

    /// `κ_N(u, v)`; a numerical error if the value leaves double range.
    pub fn eval(&self, u: Complex64, v: Complex64) -> Result<Complex64> {
        let s = self.eval_scaled(u, v)?;
        let z = s.to_complex();
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::numerical("prekernel value overflows", s.ln_abs()));
        }
        Ok(z)
    }

    fn oriented(&self, u: Complex64, v: Complex64) -> ScaledComplex {
        let (lu, tu) = (u.norm().ln(), u.arg());
        let (lv, tv) = (v.norm().ln(), v.arg());
        let mut prefix_u = ScaledComplex::ZERO;
        let mut prefix_v = ScaledComplex::ZERO;
        let mut total = ScaledComplex::ZERO;
        for k in 0..self.params.size {
            prefix_u = prefix_u.add(scaled_power(lu, tu, 2 * k).scale_exp(-self.ln_b[k]));
            prefix_v = prefix_v.add(scaled_power(lv, tv, 2 * k).scale_exp(-self.ln_b[k]));
            let first = scaled_power(lu, tu, 2 * k + 1).mul(prefix_v);
            let second = scaled_power(lv, tv, 2 * k + 1).mul(prefix_u);
            total = total.add(first.sub(second).scale_exp(-self.ln_a[k]));
        }
        total.scale_exp(self.ln_prefactor)
    }
}

fn canonical_order(u: Complex64, v: Complex64) -> std::cmp::Ordering {
    u.re.total_cmp(&v.re).then(u.im.total_cmp(&v.im))
}

/// `κ_N(u,v) = Σ_{k<N} (p_{2k+1}(u) p_{2k}(v) − p_{2k+1}(v) p_{2k}(u)) / h_k`
/// evaluated through the polynomial basis.
pub fn prekernel_polynomial(basis: &SkewPolyBasis, u: Complex64, v: Complex64) -> Result<ScaledComplex> {
    prekernel_polynomial_with_scale(basis, u, v).map(|(k, _)| k)
}

/// [`prekernel_polynomial`] together with `ln Σ_k (|p_{2k+1}(u) p_{2k}(v)| + |p_{2k+1}(v) p_{2k}(u)|) / h_k`,
/// the size of the terms before cancellation.
pub fn prekernel_polynomial_with_scale(
    basis: &SkewPolyBasis,
    u: Complex64,
    v: Complex64,
) -> Result<(ScaledComplex, f64)> {
    let size = basis.params.size;
    if basis.max_index + 1 < size {
        return Err(Error::usage(format!(
            "basis holds {} polynomial pairs, prekernel needs {size}",
            basis.max_index + 1
        )));
    }
    let mut total = ScaledComplex::ZERO;
    let mut scale = LogSumExp::default();
    for k in 0..size {
        let a = basis
            .eval_poly_scaled(2 * k + 1, u)?
            .mul(basis.eval_poly_scaled(2 * k, v)?);
        let b = basis
            .eval_poly_scaled(2 * k + 1, v)?
            .mul(basis.eval_poly_scaled(2 * k, u)?);
        scale.push(a.ln_abs() - basis.log_h[k]);
        scale.push(b.ln_abs() - basis.log_h[k]);
        total = total.add(a.sub(b).scale_exp(-basis.log_h[k]));
    }
    Ok((total, scale.value()))
}
