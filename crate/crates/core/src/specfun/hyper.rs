use crate::error::{Error, Result};

const MAX_TERMS: usize = 10_000;

/// `₁F₂ₙ(1 ; (m+2)/2 ×n, (m+3)/2 ×n ; y)`, the series left after resumming
/// `Σ_k r^{4k+2} / Γ(m+2k+2)ⁿ` with `y = r⁴ / 2^{2n}`.
///
/// Terms obey `t_{k+1} = t_k · y / ((k + (m+2)/2)(k + (m+3)/2))ⁿ`; summation
/// stops once a decreasing term drops below `1e−15` of the running sum.
pub fn hyp_1_f_2n(n: u32, m: f64, y: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::usage("order n must be at least 1"));
    }
    if !(m >= 0.0 && m.is_finite()) {
        return Err(Error::usage(format!("parameter m must be finite and >= 0, got {m}")));
    }
    if !(y >= 0.0 && y.is_finite()) {
        return Err(Error::domain(format!("1F2n argument must be >= 0, got {y}")));
    }
    let a = 0.5 * (m + 2.0);
    let b = 0.5 * (m + 3.0);
    let nf = n as i32;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let next = term * y / ((kf + a) * (kf + b)).powi(nf);
        sum += next;
        if !sum.is_finite() {
            return Err(Error::numerical("1F2n overflowed", y));
        }
        if next <= term && next < 1e-15 * sum {
            return Ok(sum);
        }
        term = next;
    }
    Err(Error::numerical(
        format!("1F2n did not converge in {MAX_TERMS} terms"),
        term / sum,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::ln_gamma;

    /// The un-resummed series Σ_k r^{4k+2} Γ(m+2)ⁿ / (r² Γ(m+2k+2)ⁿ).
    fn direct(n: u32, m: f64, r: f64) -> f64 {
        let nf = f64::from(n);
        let g0 = ln_gamma(m + 2.0);
        (0..400)
            .map(|k| {
                let kf = k as f64;
                (4.0 * kf * r.ln() + nf * (g0 - ln_gamma(m + 2.0 * kf + 2.0))).exp()
            })
            .sum()
    }

    #[test]
    fn zero_argument() {
        for n in 1..4 {
            for m in [0.0, 1.0, 3.5] {
                assert_eq!(hyp_1_f_2n(n, m, 0.0).unwrap(), 1.0);
            }
        }
    }

    #[test]
    fn matches_rearranged_series() {
        // n = 1, m = 0, r = 1 ↔ y = 1/4
        let want = direct(1, 0.0, 1.0);
        let got = hyp_1_f_2n(1, 0.0, 0.25).unwrap();
        assert!((got - want).abs() < 1e-13 * want);
        for (n, m, r) in [(2, 1.0, 2f64.sqrt()), (3, 0.0, 2.0), (2, 2.5, 3.0), (1, 1.0, 4.0)] {
            let y = r.powi(4) / 4f64.powi(n as i32);
            let got = hyp_1_f_2n(n, m, y).unwrap();
            let want = direct(n, m, r);
            assert!((got - want).abs() < 1e-12 * want, "n={n} m={m} r={r}");
        }
    }

    #[test]
    fn partial_sums_increase() {
        // n = 2, m = 1, y = 1: all terms positive, so the value exceeds every partial sum
        let v = hyp_1_f_2n(2, 1.0, 1.0).unwrap();
        let mut partial = 0.0;
        let mut term = 1.0;
        for k in 0..30 {
            partial += term;
            assert!(partial <= v * (1.0 + 1e-15));
            let kf = k as f64;
            term *= 1.0 / ((kf + 1.5) * (kf + 2.0)).powi(2);
        }
        assert!((partial - v).abs() < 1e-14 * v);
    }

    #[test]
    fn negative_argument_rejected() {
        assert!(matches!(hyp_1_f_2n(1, 0.0, -1.0), Err(Error::Domain(_))));
    }
}
