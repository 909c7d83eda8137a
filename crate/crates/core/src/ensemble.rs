//! Ensemble parameters, radial moments of the weight, skew-orthogonal
//! polynomials and their normalisations.
//!
//! For a rotation-invariant weight the monomials are orthogonal,
//! `∫ w(z) z^k z̄^ℓ d²z = s_k δ_{kℓ}` with `s_k = πⁿ Γ(m+k+1)ⁿ`, so every skew
//! product reduces to exact moment algebra. The monic skew-orthogonal
//! polynomials are
//!
//! ```text
//! p_{2k+1}(z) = z^{2k+1},   p_{2k}(z) = Σ_{ℓ=0}^{k} [Π_{j=ℓ+1}^{k} (m+2j)ⁿ] z^{2ℓ},
//! ```
//!
//! with `⟨p_{2k+1} | p_{2ℓ}⟩ = h_k δ_{kℓ}`, `h_k = ½ (π Γ(m+2k+2))ⁿ`.
//! Coefficients and normalisations are kept as logarithms; `Γ(m+2k+2)ⁿ`
//! leaves double range near `k ≈ 85/n`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scaled::ScaledComplex;
use crate::specfun::ln_gamma;

const LN_PI: f64 = 1.144_729_885_849_400_2;

/// The product ensemble: `n` factors, induced exponent `m`, quaternion size `N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleParams {
    pub n: u32,
    pub m: f64,
    #[serde(rename = "N")]
    pub size: usize,
}

impl EnsembleParams {
    pub fn new(n: u32, m: f64, size: usize) -> Result<Self> {
        let p = Self { n, m, size };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::usage("number of factors n must be at least 1"));
        }
        if !(self.m >= 0.0 && self.m.is_finite()) {
            return Err(Error::usage(format!(
                "induced exponent m must be finite and >= 0, got {}",
                self.m
            )));
        }
        if self.size == 0 {
            return Err(Error::usage("matrix size N must be at least 1"));
        }
        Ok(())
    }

    pub(crate) fn nf(&self) -> f64 {
        f64::from(self.n)
    }
}

/// `ln s_k = n (ln π + ln Γ(m+k+1))`, the k-th radial moment of the weight.
pub fn log_moment_s(params: &EnsembleParams, k: usize) -> f64 {
    params.nf() * (LN_PI + ln_gamma(params.m + k as f64 + 1.0))
}

/// `ln h_k = n (ln π + ln Γ(m+2k+2)) − ln 2`.
pub fn log_h(params: &EnsembleParams, k: usize) -> f64 {
    params.nf() * (LN_PI + ln_gamma(params.m + 2.0 * k as f64 + 2.0)) - std::f64::consts::LN_2
}

/// Skew-orthogonal polynomials `p_0 … p_{2K+1}` with log-coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkewPolyBasis {
    pub params: EnsembleParams,
    pub max_index: usize,
    /// `even_coeffs[k][ℓ]` is the log of the coefficient of `z^{2ℓ}` in `p_{2k}`.
    pub even_coeffs: Vec<Vec<f64>>,
    pub log_h: Vec<f64>,
}

/// Builds `p_{2k}`, `p_{2k+1}` and `h_k` for `k = 0..=max_index` from the ratio
/// recursion `c_{2j−2} / c_{2j} = (m+2j)ⁿ`.
pub fn build_basis(params: &EnsembleParams, max_index: usize) -> Result<SkewPolyBasis> {
    params.validate()?;
    let nf = params.nf();
    let even_coeffs = (0..=max_index)
        .map(|k| {
            let mut logs = vec![0.0; k + 1];
            for l in (0..k).rev() {
                logs[l] = logs[l + 1] + nf * (params.m + 2.0 * (l + 1) as f64).ln();
            }
            logs
        })
        .collect();
    let log_h = (0..=max_index).map(|k| log_h(params, k)).collect();
    Ok(SkewPolyBasis {
        params: *params,
        max_index,
        even_coeffs,
        log_h,
    })
}

impl SkewPolyBasis {
    pub fn max_degree(&self) -> usize {
        2 * self.max_index + 1
    }

    fn check_degree(&self, degree: usize) -> Result<()> {
        if degree > self.max_degree() {
            return Err(Error::usage(format!(
                "degree {degree} exceeds basis range {}",
                self.max_degree()
            )));
        }
        Ok(())
    }

    /// Linear-scale coefficient list of `p_degree`, lowest power first.
    pub fn coefficients(&self, degree: usize) -> Result<Vec<f64>> {
        self.check_degree(degree)?;
        let mut c = vec![0.0; degree + 1];
        if degree % 2 == 1 {
            c[degree] = 1.0;
        } else {
            for (l, lc) in self.even_coeffs[degree / 2].iter().enumerate() {
                c[2 * l] = lc.exp();
            }
        }
        Ok(c)
    }

    /// `p_degree(z)` by Horner's rule in `z²`. Real coefficients make
    /// `eval_poly(z̄) = conj(eval_poly(z))` hold bit for bit.
    pub fn eval_poly(&self, degree: usize, z: Complex64) -> Result<Complex64> {
        self.check_degree(degree)?;
        if degree % 2 == 1 {
            return Ok(z.powu(degree as u32));
        }
        let z2 = z * z;
        let coeffs = &self.even_coeffs[degree / 2];
        let mut acc = Complex64::new(0.0, 0.0);
        for lc in coeffs.iter().rev() {
            acc = acc * z2 + lc.exp();
        }
        Ok(acc)
    }

    /// `p_degree(z)` in scaled form, safe for large degree and |z|.
    pub fn eval_poly_scaled(&self, degree: usize, z: Complex64) -> Result<ScaledComplex> {
        self.check_degree(degree)?;
        let ln_r = z.norm().ln();
        let theta = z.arg();
        if degree % 2 == 1 {
            let d = degree as f64;
            return Ok(ScaledComplex::from_polar_ln(d * ln_r, d * theta));
        }
        let mut acc = ScaledComplex::ZERO;
        for (l, lc) in self.even_coeffs[degree / 2].iter().enumerate() {
            let p = 2.0 * l as f64;
            let term = if l == 0 {
                ScaledComplex::from_polar_ln(*lc, 0.0)
            } else {
                ScaledComplex::from_polar_ln(lc + p * ln_r, p * theta)
            };
            acc = acc.add(term);
        }
        Ok(acc)
    }
}

/// `⟨z^a | z^b⟩ = ½ (s_a δ_{a,b+1} − s_b δ_{b,a+1})`.
pub fn skew_product_monomials(params: &EnsembleParams, a: usize, b: usize) -> f64 {
    match skew_product_monomials_log(params, a, b) {
        Some((sign, ln)) => sign * ln.exp(),
        None => 0.0,
    }
}

/// Sign and log-magnitude of [`skew_product_monomials`]; `None` when it vanishes.
pub fn skew_product_monomials_log(params: &EnsembleParams, a: usize, b: usize) -> Option<(f64, f64)> {
    let half = -std::f64::consts::LN_2;
    if a == b + 1 {
        Some((1.0, half + log_moment_s(params, a)))
    } else if b == a + 1 {
        Some((-1.0, half + log_moment_s(params, b)))
    } else {
        None
    }
}

/// Bilinear extension of the skew product to coefficient lists (lowest power first).
pub fn skew_product_polys(params: &EnsembleParams, p: &[f64], q: &[f64]) -> f64 {
    skew_product_polys_with_scale(params, p, q).0
}

/// Skew product together with `Σ |p_a q_b ⟨z^a|z^b⟩|`, the scale against which
/// cancellation in the result should be judged.
pub fn skew_product_polys_with_scale(params: &EnsembleParams, p: &[f64], q: &[f64]) -> (f64, f64) {
    let mut sum = 0.0;
    let mut scale = 0.0;
    for (a, pa) in p.iter().enumerate() {
        if *pa == 0.0 {
            continue;
        }
        // only |a − b| = 1 contributes
        for b in [a.wrapping_sub(1), a + 1] {
            if let Some(qb) = q.get(b) {
                let t = pa * qb * skew_product_monomials(params, a, b);
                sum += t;
                scale += t.abs();
            }
        }
    }
    (sum, scale)
}
