/// Complementary error function `erfc(x) = 1 − erf(x)`.
///
/// Backed by the musl-derived `libm` implementation, which keeps full relative
/// accuracy in the far right tail where `1 − erf(x)` would cancel.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Taylor series of erf about 0; independent of the library routine.
    fn erfc_taylor(x: f64) -> f64 {
        let mut term = x;
        let mut sum = x;
        let mut k = 0.0;
        loop {
            k += 1.0;
            term *= -x * x / k;
            let add = term / (2.0 * k + 1.0);
            sum += add;
            if add.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        1.0 - 2.0 / std::f64::consts::PI.sqrt() * sum
    }

    /// Lentz continued fraction for the right tail.
    fn erfc_cf(x: f64) -> f64 {
        // erfc(x) = exp(-x²)/√π · 1/(x + 1/2/(x + 1/(x + 3/2/(x + ...))))
        let tiny = 1e-300;
        let mut f = x;
        let mut c = x;
        let mut d = 0.0;
        for k in 1..500 {
            let a = k as f64 / 2.0;
            d = x + a * d;
            d = if d.abs() < tiny { tiny } else { d };
            c = x + a / c;
            c = if c.abs() < tiny { tiny } else { c };
            d = 1.0 / d;
            let delta = c * d;
            f *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        (-x * x).exp() / std::f64::consts::PI.sqrt() / f
    }

    #[test]
    fn fixed_points() {
        assert_eq!(erfc(0.0), 1.0);
        assert_eq!(erfc(f64::INFINITY), 0.0);
        assert_eq!(erfc(f64::NEG_INFINITY), 2.0);
    }

    #[test]
    fn against_oracles() {
        for x in [0.1, 0.3, 0.7, 1.0, 1.5] {
            let want = erfc_taylor(x);
            assert!((erfc(x) - want).abs() <= 1e-12 * want, "x={x}");
        }
        for x in [3.0, 5.0, 9.0, 20.0] {
            let want = erfc_cf(x);
            assert!((erfc(x) - want).abs() <= 1e-12 * want, "x={x}");
        }
        // mpmath at 40 digits
        assert!((erfc(1.0) - 0.157_299_207_050_285_13).abs() < 1e-12 * 0.157);
        assert!((erfc(5.0) - 1.537_459_794_428_034_9e-12).abs() < 1e-12 * 1.54e-12);
        assert!((erfc(-1.7) - 1.983_790_458_590_774_6).abs() < 1e-12 * 2.0);
        assert!((erfc(26.0) - 5.663_192_408_856_143e-296).abs() < 1e-12 * 5.67e-296);
    }

    #[test]
    fn reflection() {
        for i in -40..=40 {
            let x = i as f64 * 0.173;
            assert!((erfc(x) + erfc(-x) - 2.0).abs() < 4.0 * f64::EPSILON);
        }
    }
}
