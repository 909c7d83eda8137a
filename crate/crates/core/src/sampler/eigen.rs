//! Dense non-Hermitian eigenvalues: balancing, Householder reduction to
//! Hessenberg form, then single-shift complex QR with Wilkinson shifts.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

fn abs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// All eigenvalues of `m`, in the order they deflate.
pub fn eigenvalues_dense(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    if !m.is_finite() {
        return Err(Error::usage("eigenvalues_dense needs finite entries"));
    }
    let mut a = m.clone();
    balance(&mut a);
    hessenberg(&mut a);
    hessenberg_qr(&mut a)
}

/// Diagonal similarity by powers of two so that row and column norms are
/// comparable.
fn balance(a: &mut ComplexMatrix) {
    let n = a.dim();
    loop {
        let mut done = true;
        for i in 0..n {
            let (mut c, mut r) = (0.0, 0.0);
            for j in 0..n {
                if j != i {
                    c += abs1(a[(j, i)]);
                    r += abs1(a[(i, j)]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let (mut c, g_lo, g_hi) = (c, r / 2.0, r * 2.0);
            while c < g_lo {
                f *= 2.0;
                c *= 4.0;
            }
            while c > g_hi {
                f /= 2.0;
                c /= 4.0;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
}

/// In-place unitary reduction to upper Hessenberg form.
fn hessenberg(a: &mut ComplexMatrix) {
    let n = a.dim();
    for k in 0..n.saturating_sub(2) {
        let norm = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        v[0] -= alpha;
        let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vn == 0.0 {
            continue;
        }
        for z in &mut v {
            *z /= vn;
        }
        // A ← (I − 2vv*) A
        for j in k..n {
            let dot: Complex64 = v.iter().enumerate().map(|(t, vi)| vi.conj() * a[(k + 1 + t, j)]).sum();
            for (t, vi) in v.iter().enumerate() {
                a[(k + 1 + t, j)] -= 2.0 * vi * dot;
            }
        }
        // A ← A (I − 2vv*)
        for i in 0..n {
            let dot: Complex64 = v.iter().enumerate().map(|(t, vi)| a[(i, k + 1 + t)] * vi).sum();
            for (t, vi) in v.iter().enumerate() {
                a[(i, k + 1 + t)] -= 2.0 * dot * vi.conj();
            }
        }
        a[(k + 1, k)] = alpha;
        for i in k + 2..n {
            a[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
}

fn hessenberg_qr(h: &mut ComplexMatrix) -> Result<Vec<Complex64>> {
    let n = h.dim();
    let mut eig = vec![Complex64::new(0.0, 0.0); n];
    if n == 0 {
        return Ok(eig);
    }
    let hnorm = h.norm();
    let eps = f64::EPSILON;
    let mut hi = n - 1;
    let mut iter = 0usize;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let mut tst = abs1(h[(l - 1, l - 1)]) + abs1(h[(l, l)]);
            if tst == 0.0 {
                tst = hnorm;
            }
            if abs1(h[(l, l - 1)]) <= eps * tst {
                h[(l, l - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > MAX_SWEEPS_PER_EIGENVALUE {
            return Err(Error::numerical(
                format!("QR iteration did not deflate eigenvalue {hi} of {n}"),
                abs1(h[(hi, hi - 1)]),
            ));
        }
        let d = h[(hi, hi)];
        let mu = if iter.is_multiple_of(10) {
            // exceptional shift
            d + 0.75 * abs1(h[(hi, hi - 1)])
        } else {
            let a = h[(hi - 1, hi - 1)];
            let bc = h[(hi - 1, hi)] * h[(hi, hi - 1)];
            let half = (a - d) * 0.5;
            let disc = (half * half + bc).sqrt();
            let (r1, r2) = (a - half + disc, a - half - disc);
            if (r1 - d).norm() <= (r2 - d).norm() { r1 } else { r2 }
        };
        let mut x = h[(l, l)] - mu;
        let mut y = h[(l + 1, l)];
        for k in l..hi {
            let norm = x.norm().hypot(y.norm());
            let (c, s) = if norm == 0.0 {
                (1.0, Complex64::new(0.0, 0.0))
            } else if x.norm() == 0.0 {
                (0.0, y.conj() / y.norm())
            } else {
                (x.norm() / norm, (x / x.norm()) * y.conj() / norm)
            };
            for j in k.saturating_sub(1).max(l)..=hi {
                let (t1, t2) = (h[(k, j)], h[(k + 1, j)]);
                h[(k, j)] = c * t1 + s * t2;
                h[(k + 1, j)] = -s.conj() * t1 + c * t2;
            }
            for i in l..=(k + 2).min(hi) {
                let (t1, t2) = (h[(i, k)], h[(i, k + 1)]);
                h[(i, k)] = c * t1 + s.conj() * t2;
                h[(i, k + 1)] = -s * t1 + c * t2;
            }
            if k + 1 < hi {
                x = h[(k + 1, k)];
                y = h[(k + 2, k)];
            }
        }
    }
    eig[0] = h[(0, 0)];
    Ok(eig)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    /// Largest distance from each wanted eigenvalue to its nearest computed one.
    fn match_error(got: &[Complex64], want: &[Complex64]) -> f64 {
        assert_eq!(got.len(), want.len());
        let mut used = vec![false; got.len()];
        let mut worst: f64 = 0.0;
        for w in want {
            let (idx, d) = got
                .iter()
                .enumerate()
                .filter(|(i, _)| !used[*i])
                .map(|(i, g)| (i, (g - w).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            used[idx] = true;
            worst = worst.max(d);
        }
        worst
    }

    #[test]
    fn diagonal_matrix() {
        let d = [c(1.0, 2.0), c(-3.0, 0.0), c(0.5, -0.5), c(0.0, 0.0)];
        let m = ComplexMatrix::from_fn(4, |i, j| if i == j { d[i] } else { c(0.0, 0.0) });
        assert_eq!(sorted(eigenvalues_dense(&m).unwrap()), sorted(d.to_vec()));
    }

    #[test]
    fn companion_of_z_squared_minus_one() {
        let m = ComplexMatrix::from_row_major(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let e = sorted(eigenvalues_dense(&m).unwrap());
        assert!((e[0] - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((e[1] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn companion_of_cubic() {
        // (z − 1)(z − 2i)(z + 3): z³ + (2 − 2i)z² + (−3 − 4i)z + 6i
        let coeffs = [c(6.0, 0.0) * c(0.0, 1.0), c(-3.0, -4.0), c(2.0, -2.0)];
        let m = ComplexMatrix::from_fn(3, |i, j| {
            if j == 2 {
                -coeffs[i]
            } else if i == j + 1 {
                c(1.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let e = eigenvalues_dense(&m).unwrap();
        assert!(match_error(&e, &[c(1.0, 0.0), c(0.0, 2.0), c(-3.0, 0.0)]) < 1e-12);
    }

    #[test]
    fn constructed_spectrum_is_recovered() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let dim = 20;
        for _ in 0..10 {
            let want: Vec<Complex64> =
                (0..dim).map(|_| c(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0))).collect();
            let mut g = || c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let s = ComplexMatrix::from_fn(dim, |i, j| if i == j { c(1.0, 0.0) + 0.3 * g() } else { 0.3 * g() / (dim as f64).sqrt() });
            let s_inv = inverse(&s);
            let d = ComplexMatrix::from_fn(dim, |i, j| if i == j { want[i] } else { c(0.0, 0.0) });
            let m = s.matmul(&d).matmul(&s_inv);
            let got = eigenvalues_dense(&m).unwrap();
            let err = match_error(&got, &want);
            assert!(err <= 1e-8 * m.norm(), "error {err}, norm {}", m.norm());
        }
    }

    #[test]
    fn non_finite_input_is_rejected() {
        let mut m = ComplexMatrix::identity(3);
        m[(1, 2)] = c(f64::NAN, 0.0);
        assert!(matches!(eigenvalues_dense(&m), Err(Error::Usage(_))));
    }

    #[test]
    fn trivial_sizes() {
        assert!(eigenvalues_dense(&ComplexMatrix::zeros(0)).unwrap().is_empty());
        let m = ComplexMatrix::from_row_major(1, vec![c(2.0, -1.0)]).unwrap();
        assert_eq!(eigenvalues_dense(&m).unwrap(), vec![c(2.0, -1.0)]);
        // nilpotent Jordan block
        let j = ComplexMatrix::from_fn(4, |i, k| if k == i + 1 { c(1.0, 0.0) } else { c(0.0, 0.0) });
        assert!(eigenvalues_dense(&j).unwrap().iter().all(|z| z.norm() < 1e-12));
    }

    fn inverse(a: &ComplexMatrix) -> ComplexMatrix {
        // Gauss-Jordan with partial pivoting
        let n = a.dim();
        let mut m = a.clone();
        let mut inv = ComplexMatrix::identity(n);
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| m[(i, k)].norm().total_cmp(&m[(j, k)].norm())).unwrap();
            m.swap_rows(p, k);
            inv.swap_rows(p, k);
            let piv = m[(k, k)];
            for j in 0..n {
                m[(k, j)] /= piv;
                inv[(k, j)] /= piv;
            }
            for i in 0..n {
                if i != k {
                    let f = m[(i, k)];
                    for j in 0..n {
                        let (t, u) = (m[(k, j)], inv[(k, j)]);
                        m[(i, j)] -= f * t;
                        inv[(i, j)] -= f * u;
                    }
                }
            }
        }
        inv
    }
}
