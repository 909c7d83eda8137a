//! Small dense complex matrices: storage, products and LU determinants.

use num_complex::Complex64;

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major data; `None` if the length is not a square.
    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Option<Self> {
        (data.len() == dim * dim).then_some(Self { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let n = self.dim;
        for j in 0..n {
            self.data.swap(a * n + j, b * n + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let n = self.dim;
        for i in 0..n {
            self.data.swap(i * n + a, i * n + b);
        }
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// `ln |det M|` and the phase `det M / |det M|` from an LU factorisation with
/// partial pivoting. A singular matrix gives `(−∞, 0)`.
pub fn lu_log_det(m: &ComplexMatrix) -> (f64, Complex64) {
    let n = m.dim();
    let mut a = m.clone();
    let mut ln_abs = 0.0;
    let mut phase = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[(i, k)].norm().total_cmp(&a[(j, k)].norm()))
            .unwrap_or(k);
        let pivot = a[(p, k)];
        if pivot.norm() == 0.0 {
            return (f64::NEG_INFINITY, Complex64::new(0.0, 0.0));
        }
        if p != k {
            a.swap_rows(p, k);
            phase = -phase;
        }
        ln_abs += pivot.norm().ln();
        phase *= pivot / pivot.norm();
        for i in k + 1..n {
            let f = a[(i, k)] / pivot;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in k + 1..n {
                let t = a[(k, j)];
                a[(i, j)] -= f * t;
            }
        }
    }
    (ln_abs, phase)
}

/// Determinant by LU; overflows for large entries, use [`lu_log_det`] there.
pub fn det(m: &ComplexMatrix) -> Complex64 {
    let (ln_abs, phase) = lu_log_det(m);
    phase * ln_abs.exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn small_determinants() {
        let m = ComplexMatrix::from_row_major(2, vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)])
            .unwrap();
        assert!((det(&m) - c(-2.0, 0.0)).norm() < 1e-14);
        let m = ComplexMatrix::from_row_major(
            3,
            vec![
                c(0.0, 1.0), c(2.0, 0.0), c(0.0, 0.0),
                c(1.0, 0.0), c(0.0, 0.0), c(3.0, -1.0),
                c(0.0, 0.0), c(1.0, 1.0), c(2.0, 0.0),
            ],
        )
        .unwrap();
        // cofactor expansion along the first row
        let want = c(0.0, 1.0) * (c(0.0, 0.0) * c(2.0, 0.0) - c(3.0, -1.0) * c(1.0, 1.0))
            - c(2.0, 0.0) * (c(1.0, 0.0) * c(2.0, 0.0) - c(3.0, -1.0) * c(0.0, 0.0));
        assert!((det(&m) - want).norm() < 1e-13 * want.norm());
        assert_eq!(lu_log_det(&ComplexMatrix::zeros(3)).0, f64::NEG_INFINITY);
        assert!((det(&ComplexMatrix::identity(5)) - 1.0).norm() < 1e-15);
    }

    #[test]
    fn product_determinant() {
        let a = ComplexMatrix::from_fn(4, |i, j| c(((i * 7 + j * j) as f64).sin(), ((i * i + 3 * j) as f64).cos()));
        let b = ComplexMatrix::from_fn(4, |i, j| c(if i == j { 2.0 } else { 0.1 }, 0.2 * j as f64));
        let lhs = det(&a.matmul(&b));
        let rhs = det(&a) * det(&b);
        assert!((lhs - rhs).norm() < 1e-12 * rhs.norm());
        assert_eq!(a.transpose().transpose(), a);
    }
}
