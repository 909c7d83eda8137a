//! Pfaffians of complex antisymmetric matrices by Parlett–Reid elimination.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

const ANTISYMMETRY_TOL: f64 = 1e-10;

/// Pfaffian of an even-dimensional antisymmetric matrix. The input is checked
/// for antisymmetry (`‖A + Aᵀ‖ ≤ 1e−10 ‖A‖`) and symmetrised before use.
pub fn pfaffian(a: &ComplexMatrix) -> Result<Complex64> {
    let n = a.dim();
    if n % 2 == 1 {
        return Err(Error::usage(format!("Pfaffian needs even dimension, got {n}")));
    }
    if !a.is_finite() {
        return Err(Error::usage("Pfaffian of a matrix with non-finite entries"));
    }
    let skew = a.transpose();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            sum += (a[(i, j)] + skew[(i, j)]).norm_sqr();
        }
    }
    let scale = a.norm();
    if sum.sqrt() > ANTISYMMETRY_TOL * scale {
        return Err(Error::usage(format!(
            "matrix is not antisymmetric: ‖A + Aᵀ‖ = {:e}, ‖A‖ = {:e}",
            sum.sqrt(),
            scale
        )));
    }
    let mut m = ComplexMatrix::from_fn(n, |i, j| 0.5 * (a[(i, j)] - skew[(i, j)]));
    Ok(pfaffian_in_place(&mut m))
}

/// Reduces `a` to tridiagonal form, accumulating the Pfaffian. Assumes exact antisymmetry.
pub(crate) fn pfaffian_in_place(a: &mut ComplexMatrix) -> Complex64 {
    let n = a.dim();
    let mut pf = Complex64::new(1.0, 0.0);
    let mut k = 0;
    while k + 1 < n {
        let kp = (k + 1..n)
            .max_by(|&i, &j| a[(i, k)].norm().total_cmp(&a[(j, k)].norm()))
            .unwrap_or(k + 1);
        if kp != k + 1 {
            a.swap_rows(k + 1, kp);
            a.swap_cols(k + 1, kp);
            pf = -pf;
        }
        let pivot = a[(k, k + 1)];
        if pivot == Complex64::new(0.0, 0.0) {
            return Complex64::new(0.0, 0.0);
        }
        pf *= pivot;
        if k + 2 < n {
            let tau: Vec<Complex64> = (k + 2..n).map(|j| a[(k, j)] / pivot).collect();
            let col: Vec<Complex64> = (k + 2..n).map(|i| a[(i, k + 1)]).collect();
            for (ii, i) in (k + 2..n).enumerate() {
                for (jj, j) in (k + 2..n).enumerate() {
                    let upd = tau[ii] * col[jj] - col[ii] * tau[jj];
                    a[(i, j)] += upd;
                }
            }
        }
        k += 2;
    }
    pf
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::det;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Expansion along the first row: pf A = Σ_j (−1)^{j+1} a_{0j} pf A_{0̂ĵ}.
    fn pf_expansion(a: &ComplexMatrix) -> Complex64 {
        let n = a.dim();
        if n == 0 {
            return c(1.0, 0.0);
        }
        let mut total = c(0.0, 0.0);
        for j in 1..n {
            let keep: Vec<usize> = (1..n).filter(|&i| i != j).collect();
            let minor = ComplexMatrix::from_fn(n - 2, |p, q| a[(keep[p], keep[q])]);
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            total += sign * a[(0, j)] * pf_expansion(&minor);
        }
        total
    }

    fn random_skew(dim: usize, seed: u64) -> ComplexMatrix {
        // small deterministic generator, adequate for test inputs
        let mut s = seed.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1);
        let mut next = || {
            s = s.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let mut m = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            for j in i + 1..dim {
                let z = c(next(), next());
                m[(i, j)] = z;
                m[(j, i)] = -z;
            }
        }
        m
    }

    #[test]
    fn two_by_two() {
        let a = ComplexMatrix::from_row_major(2, vec![c(0.0, 0.0), c(2.0, -1.0), c(-2.0, 1.0), c(0.0, 0.0)])
            .unwrap();
        assert_eq!(pfaffian(&a).unwrap(), c(2.0, -1.0));
    }

    #[test]
    fn four_by_four_closed_form() {
        let a = random_skew(4, 3);
        let want = a[(0, 1)] * a[(2, 3)] - a[(0, 2)] * a[(1, 3)] + a[(0, 3)] * a[(1, 2)];
        assert!((pfaffian(&a).unwrap() - want).norm() < 1e-14 * want.norm().max(1.0));
    }

    #[test]
    fn matches_expansion_oracle() {
        for dim in [2, 4, 6, 8] {
            for seed in 0..5 {
                let a = random_skew(dim, seed);
                let want = pf_expansion(&a);
                let got = pfaffian(&a).unwrap();
                assert!((got - want).norm() <= 1e-12 * want.norm(), "dim={dim} seed={seed}");
            }
        }
    }

    #[test]
    fn square_equals_determinant() {
        for dim in (2..=12).step_by(2) {
            for seed in 0..5 {
                let a = random_skew(dim, 100 + seed);
                let pf = pfaffian(&a).unwrap();
                let d = det(&a);
                assert!((pf * pf - d).norm() <= 1e-9 * d.norm(), "dim={dim}");
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(pfaffian(&ComplexMatrix::zeros(3)), Err(Error::Usage(_))));
        let mut a = random_skew(4, 1);
        a[(0, 1)] += c(1e-3, 0.0);
        assert!(matches!(pfaffian(&a), Err(Error::Usage(_))));
        assert_eq!(pfaffian(&ComplexMatrix::zeros(4)).unwrap(), c(0.0, 0.0));
        assert_eq!(pfaffian(&ComplexMatrix::zeros(0)).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn row_pair_swap_flips_sign() {
        let a = random_skew(6, 9);
        let mut b = a.clone();
        b.swap_rows(1, 2);
        b.swap_cols(1, 2);
        assert!((pfaffian(&a).unwrap() + pfaffian(&b).unwrap()).norm() < 1e-12);
    }

    proptest! {
        #[test]
        fn congruence_scaling(seed in 0u64..1000, s in 0.1..3.0f64) {
            // pf(D A D) = det(D) pf(A) for diagonal D
            let a = random_skew(6, seed);
            let d: Vec<f64> = (0..6).map(|i| s + i as f64 * 0.25).collect();
            let scaled = ComplexMatrix::from_fn(6, |i, j| a[(i, j)] * d[i] * d[j]);
            let lhs = pfaffian(&scaled).unwrap();
            let rhs = pfaffian(&a).unwrap() * d.iter().product::<f64>();
            prop_assert!((lhs - rhs).norm() <= 1e-11 * rhs.norm().max(1e-300));
        }
    }
}
