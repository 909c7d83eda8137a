//! Weight function, prekernel, Pfaffian and the finite-N correlation functions.
//!
//! Correlation functions are those of the full spectrum of 2N eigenvalues
//! (each point `z` stands for the pair `z, z̄`):
//!
//! ```text
//! R_k(z_1..z_k) = Π_h ½ w(z_h)(z̄_h − z_h) · Pf[κ_N(ζ_a, ζ_b)]_{a,b=1..2k},
//! ζ = (z_1, z̄_1, z_2, z̄_2, …),
//! ```
//!
//! so that `R_1(z) = ½ (z̄ − z) w(z) κ_N(z, z̄)` integrates to `2N` over the plane.

mod kernel;
mod pfaffian;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use kernel::{prekernel_polynomial, prekernel_polynomial_with_scale, PrekernelEvaluator};
pub use pfaffian::pfaffian;

use crate::ensemble::EnsembleParams;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scaled::ScaledComplex;
use crate::specfun::{ln_meijer_g, ln_meijer_g_asymptotic, MellinBarnesConfig};

const LN_PI: f64 = 1.144_729_885_849_400_2;
const IMAG_RESIDUE_TOL: f64 = 1e-8;

/// `w(z) = π^{n−1} G^{n,0}_{0,n}(−; m,…,m; |z|²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightEvaluator {
    pub n: u32,
    pub m: f64,
    pub config: MellinBarnesConfig,
}

impl WeightEvaluator {
    pub fn new(params: &EnsembleParams, config: MellinBarnesConfig) -> Result<Self> {
        params.validate()?;
        config.validate(params.m)?;
        Ok(Self {
            n: params.n,
            m: params.m,
            config,
        })
    }

    /// `ln w` at modulus `r ≥ 0`.
    pub fn ln_weight_radial(&self, r: f64) -> Result<f64> {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::domain(format!("weight needs a finite modulus >= 0, got {r}")));
        }
        if r == 0.0 {
            return if self.m > 0.0 {
                Ok(f64::NEG_INFINITY)
            } else if self.n == 1 {
                Ok(0.0)
            } else {
                Err(Error::domain("weight diverges at the origin for n >= 2 and m = 0"))
            };
        }
        let nf = f64::from(self.n);
        Ok((nf - 1.0) * LN_PI + ln_meijer_g(self.n, self.m, r * r, &self.config)?)
    }

    pub fn weight(&self, z: Complex64) -> Result<f64> {
        self.ln_weight_radial(z.norm()).map(f64::exp)
    }

    /// Large-|z| form of the weight.
    pub fn weight_asymptotic(&self, z: Complex64) -> Result<f64> {
        let nf = f64::from(self.n);
        Ok(((nf - 1.0) * LN_PI + ln_meijer_g_asymptotic(self.n, self.m, z.norm())?).exp())
    }
}

/// Points at which a k-point function is evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationPointSet {
    points: Vec<Complex64>,
}

impl CorrelationPointSet {
    pub fn new(points: Vec<Complex64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::usage("correlation function needs at least one point"));
        }
        if let Some(z) = points.iter().find(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::usage(format!("point {z} is not finite")));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// True if some point lies on the real axis, where every `R_k` vanishes.
    pub fn has_real_point(&self) -> bool {
        self.points.iter().any(|z| z.im == 0.0)
    }
}

/// Weight and prekernel for one ensemble, reused across many evaluations.
#[derive(Debug, Clone)]
pub struct CorrelationEvaluator {
    params: EnsembleParams,
    weight: WeightEvaluator,
    kernel: PrekernelEvaluator,
}

impl CorrelationEvaluator {
    pub fn new(params: &EnsembleParams, config: MellinBarnesConfig) -> Result<Self> {
        Ok(Self {
            params: *params,
            weight: WeightEvaluator::new(params, config)?,
            kernel: PrekernelEvaluator::new(params)?,
        })
    }

    pub fn params(&self) -> &EnsembleParams {
        &self.params
    }

    pub fn weight(&self) -> &WeightEvaluator {
        &self.weight
    }

    pub fn kernel(&self) -> &PrekernelEvaluator {
        &self.kernel
    }

    /// `R_1(z) = ½ (z̄ − z) w(z) κ_N(z, z̄)`; exactly zero on the real axis.
    pub fn density_r1(&self, z: Complex64) -> Result<f64> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::domain(format!("point {z} is not finite")));
        }
        if z.im == 0.0 {
            return Ok(0.0);
        }
        let lw = self.weight.ln_weight_radial(z.norm())?;
        let k = self.kernel.eval_scaled(z, z.conj())?;
        // ½ (z̄ − z) = −i Im z
        let v = k.mul_complex(Complex64::new(0.0, -z.im)).scale_exp(lw);
        Ok(v.to_complex().re)
    }

    /// `R_k` at the given points via the Pfaffian of the prekernel matrix.
    pub fn correlation_rk(&self, pts: &CorrelationPointSet) -> Result<f64> {
        if pts.has_real_point() {
            return Ok(0.0);
        }
        let zs = pts.points();
        let k = zs.len();
        let mut zeta = Vec::with_capacity(2 * k);
        let mut half_lw = Vec::with_capacity(2 * k);
        for z in zs {
            let lw = self.weight.ln_weight_radial(z.norm())?;
            zeta.extend([*z, z.conj()]);
            half_lw.extend([0.5 * lw, 0.5 * lw]);
        }
        // rows and columns scaled by √w so entries stay in range; the weights
        // come back out through det D = Π w
        let mut a = ComplexMatrix::zeros(2 * k);
        for i in 0..2 * k {
            for j in i + 1..2 * k {
                let v = self
                    .kernel
                    .eval_scaled(zeta[i], zeta[j])?
                    .scale_exp(half_lw[i] + half_lw[j])
                    .to_complex();
                a[(i, j)] = v;
                a[(j, i)] = -v;
            }
        }
        if !a.is_finite() {
            return Err(Error::numerical(
                "weighted prekernel matrix overflows",
                f64::INFINITY,
            ));
        }
        let pf = pfaffian(&a).map_err(|e| match e {
            Error::Usage(msg) => Error::Internal(format!("prekernel matrix assembly: {msg}")),
            other => other,
        })?;
        // |Pf|² = |det| is bounded by the product of row norms; rounding in
        // an exactly vanishing Pfaffian is judged against that bound
        let ln_bound = 0.5
            * (0..2 * k)
                .map(|i| (0..2 * k).map(|j| a[(i, j)].norm_sqr()).sum::<f64>().sqrt().ln())
                .sum::<f64>();
        let mut value = ScaledComplex::from_complex(pf);
        let mut ln_prefactor = 0.0;
        for z in zs {
            value = value.mul_complex(Complex64::new(0.0, -z.im));
            ln_prefactor += z.im.abs().ln();
        }
        let v = value.to_complex();
        let noise = 64.0 * f64::EPSILON * (ln_bound + ln_prefactor).exp();
        if v.im.abs() > IMAG_RESIDUE_TOL * v.norm() + noise {
            return Err(Error::numerical(
                "k-point function has a non-negligible imaginary part",
                v.im.abs() / v.norm(),
            ));
        }
        Ok(v.re)
    }

    /// `ln 𝒫(z_1..z_N)`; `−∞` where the density vanishes.
    pub fn ln_jpdf(&self, zs: &[Complex64]) -> Result<f64> {
        if zs.len() != self.params.size {
            return Err(Error::usage(format!(
                "joint density needs exactly N = {} points, got {}",
                self.params.size,
                zs.len()
            )));
        }
        let mut total = -(4f64).ln();
        for (a, za) in zs.iter().enumerate() {
            if za.im == 0.0 {
                return Ok(f64::NEG_INFINITY);
            }
            total += self.weight.ln_weight_radial(za.norm())? + 2.0 * (2.0 * za.im.abs()).ln();
            for zb in &zs[..a] {
                total += 2.0 * ((zb - za).norm().ln() + (zb - za.conj()).norm().ln());
            }
        }
        Ok(if total.is_nan() { f64::NEG_INFINITY } else { total })
    }

    /// `𝒫 = ¼ Π w(z_c)|z_c − z̄_c|² Π_{a>b} |z_b − z_a|² |z_b − z̄_a|²`.
    /// Unnormalised; underflows for large N.
    pub fn jpdf(&self, zs: &[Complex64]) -> Result<f64> {
        self.ln_jpdf(zs).map(f64::exp)
    }
}

/// `w(z)` with default quadrature settings.
pub fn weight(params: &EnsembleParams, z: Complex64) -> Result<f64> {
    WeightEvaluator::new(params, MellinBarnesConfig::default())?.weight(z)
}

/// `R_1(z)` with default quadrature settings.
pub fn density_r1(params: &EnsembleParams, z: Complex64) -> Result<f64> {
    CorrelationEvaluator::new(params, MellinBarnesConfig::default())?.density_r1(z)
}

/// `R_k` with default quadrature settings.
pub fn correlation_rk(params: &EnsembleParams, pts: &CorrelationPointSet) -> Result<f64> {
    CorrelationEvaluator::new(params, MellinBarnesConfig::default())?.correlation_rk(pts)
}

/// Joint eigenvalue density with default quadrature settings.
pub fn jpdf(params: &EnsembleParams, zs: &[Complex64]) -> Result<f64> {
    CorrelationEvaluator::new(params, MellinBarnesConfig::default())?.jpdf(zs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn evaluator(n: u32, m: f64, size: usize) -> CorrelationEvaluator {
        CorrelationEvaluator::new(&EnsembleParams::new(n, m, size).unwrap(), MellinBarnesConfig::default())
            .unwrap()
    }

    /// K₀(z) = ∫₀^∞ exp(−z cosh t) dt by the trapezoid rule.
    fn bessel_k0(z: f64) -> f64 {
        let h = 0.01;
        let mut s = 0.5 * (-z).exp();
        let mut t: f64 = h;
        loop {
            let v = (-z * t.cosh()).exp();
            s += v;
            if v < 1e-300 || t > 50.0 {
                break;
            }
            t += h;
        }
        s * h
    }

    #[test]
    fn weight_examples() {
        let p = EnsembleParams::new(1, 0.0, 1).unwrap();
        assert!((weight(&p, c(1.0, 1.0)).unwrap() - (-2f64).exp()).abs() < 1e-15);
        let p2 = EnsembleParams::new(2, 0.0, 1).unwrap();
        let want = 2.0 * PI * bessel_k0(2.0);
        assert!((weight(&p2, c(0.6, 0.8)).unwrap() - want).abs() < 1e-10 * want);
        assert!(matches!(weight(&p2, c(0.0, 0.0)), Err(Error::Domain(_))));
        assert_eq!(weight(&EnsembleParams::new(2, 1.0, 1).unwrap(), c(0.0, 0.0)).unwrap(), 0.0);
        assert_eq!(weight(&p, c(0.0, 0.0)).unwrap(), 1.0);
    }

    #[test]
    fn weight_is_rotation_invariant() {
        let ev = evaluator(3, 1.0, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let base = ev.weight().weight(c(1.3, 0.0)).unwrap();
        for _ in 0..20 {
            let z = Complex64::from_polar(1.3, rng.random_range(-PI..PI));
            assert!((ev.weight().weight(z).unwrap() - base).abs() < 1e-13 * base);
        }
    }

    #[test]
    fn r1_single_pair_closed_form() {
        let ev = evaluator(1, 0.0, 1);
        for z in [c(0.3, 0.9), c(-1.1, 0.2), c(0.5, -1.7)] {
            let want = 4.0 / PI * z.im * z.im * (-z.norm_sqr()).exp();
            assert!((ev.density_r1(z).unwrap() - want).abs() < 1e-14 * want);
        }
        assert_eq!(ev.density_r1(c(2.0, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn r1_is_nonnegative() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (n, m, size) in [(1, 0.0, 6), (2, 1.0, 4), (3, 2.5, 3)] {
            let ev = evaluator(n, m, size);
            for _ in 0..100 {
                let z = c(rng.random_range(-6.0..6.0), rng.random_range(-6.0..6.0));
                assert!(ev.density_r1(z).unwrap() >= 0.0);
            }
        }
    }

    #[test]
    fn pfaffian_route_reduces_to_r1() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=3 {
            for size in [1, 3, 8] {
                let ev = evaluator(n, 1.0, size);
                let radius = (2.0 * size as f64).powf(f64::from(n) / 2.0);
                for _ in 0..50 {
                    let z = Complex64::from_polar(
                        radius * rng.random::<f64>().sqrt(),
                        rng.random_range(-PI..PI),
                    );
                    let a = ev.density_r1(z).unwrap();
                    let b = ev.correlation_rk(&CorrelationPointSet::new(vec![z]).unwrap()).unwrap();
                    assert!((a - b).abs() <= 1e-10 * a, "n={n} N={size} z={z}");
                }
            }
        }
    }

    #[test]
    fn two_point_function_repulsion_and_symmetry() {
        let ev = evaluator(2, 0.0, 4);
        let z1 = c(0.7, 0.9);
        let far = ev
            .correlation_rk(&CorrelationPointSet::new(vec![z1, c(-1.0, 0.4)]).unwrap())
            .unwrap();
        let near = ev
            .correlation_rk(&CorrelationPointSet::new(vec![z1, z1 + c(1e-4, 1e-4)]).unwrap())
            .unwrap();
        assert!(far > 0.0 && near >= 0.0 && near < 1e-6 * far);

        let pts = [c(0.7, 0.9), c(-1.0, 0.4), c(0.2, -1.3)];
        let base = ev.correlation_rk(&CorrelationPointSet::new(pts.to_vec()).unwrap()).unwrap();
        for perm in [[1, 0, 2], [2, 1, 0], [1, 2, 0]] {
            let q: Vec<_> = perm.iter().map(|&i| pts[i]).collect();
            let v = ev.correlation_rk(&CorrelationPointSet::new(q).unwrap()).unwrap();
            assert!((v - base).abs() <= 1e-10 * base);
        }
    }

    #[test]
    fn single_pair_has_no_two_point_function() {
        let ev = evaluator(1, 0.0, 1);
        let v = ev
            .correlation_rk(&CorrelationPointSet::new(vec![c(0.5, 0.5), c(-0.5, 1.0)]).unwrap())
            .unwrap();
        assert!(v.abs() < 1e-15);
    }

    #[test]
    fn point_set_validation() {
        assert!(CorrelationPointSet::new(vec![]).is_err());
        assert!(CorrelationPointSet::new(vec![c(f64::NAN, 0.0)]).is_err());
        let s = CorrelationPointSet::new(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert!(s.has_real_point());
        assert_eq!(evaluator(1, 0.0, 3).correlation_rk(&s).unwrap(), 0.0);
    }

    #[test]
    fn jpdf_examples() {
        let ev = evaluator(1, 0.0, 1);
        let z = c(0.4, -0.8);
        let want = 0.25 * (-z.norm_sqr()).exp() * (2.0 * z.im).powi(2);
        assert!((ev.jpdf(&[z]).unwrap() - want).abs() < 1e-15);
        let ev2 = evaluator(2, 1.0, 2);
        assert_eq!(ev2.jpdf(&[c(0.5, 0.0), c(0.1, 1.0)]).unwrap(), 0.0);
        assert_eq!(ev2.jpdf(&[c(0.5, 0.3), c(0.5, 0.3)]).unwrap(), 0.0);
        assert!(matches!(ev2.jpdf(&[c(0.5, 0.3)]), Err(Error::Usage(_))));
    }
}
