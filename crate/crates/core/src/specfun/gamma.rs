//! Log-gamma for real and complex arguments.
//!
//! Both routines shift the argument upward with the recurrence
//! `ln Γ(s) = ln Γ(s + K) − Σ ln(s + j)` until `|s + K| ≥ 15` and
//! `Re(s + K) ≥ 0.5`, then apply the Stirling series. The complex version is
//! the analytic continuation of `ln Γ` from the positive real axis, cut along
//! the non-positive real axis (the branch used by `mpmath.loggamma`), so `ln Γ(s+1) = ln Γ(s) + ln s` holds with the
//! principal logarithm everywhere off the cut.

use num_complex::Complex64;

use crate::error::{Error, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// `B_{2k} / (2k (2k − 1))` for k = 1..10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

const SHIFT_MODULUS: f64 = 15.0;

fn is_pole(s: Complex64) -> bool {
    s.im == 0.0 && s.re <= 0.0 && s.re.fract() == 0.0
}

/// `ln Γ(s)` for complex `s` off the poles (log-gamma branch, imaginary part
/// continuous off the negative real axis).
pub fn ln_gamma_complex(s: Complex64) -> Result<Complex64> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::domain(format!("ln_gamma of non-finite {s}")));
    }
    if is_pole(s) {
        return Err(Error::domain(format!("ln_gamma pole at {}", s.re)));
    }
    Ok(ln_gamma_complex_unchecked(s))
}

pub(crate) fn ln_gamma_complex_unchecked(s: Complex64) -> Complex64 {
    let mut z = s;
    let mut shift = Complex64::new(0.0, 0.0);
    while z.re < 0.5 || z.norm() < SHIFT_MODULUS {
        shift += z.ln();
        z += 1.0;
    }
    stirling_complex(z) - shift
}

fn stirling_complex(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + series
}

/// `ln Γ(x)` for real `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0, "ln_gamma expects a positive argument, got {x}");
    let mut z = x;
    let mut shift = 0.0;
    // multiply in blocks before taking a single log
    let mut prod = 1.0;
    while z < SHIFT_MODULUS {
        prod *= z;
        z += 1.0;
        if !(1e-280..=1e280).contains(&prod) {
            shift += prod.ln();
            prod = 1.0;
        }
    }
    shift += prod.ln();
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + series - shift
}

/// `Γ(x)` for real `x > 0`; overflows to `+∞` past `x ≈ 171.6`.
pub fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}

/// Digamma `ψ(x)` for real `x > 0`.
pub(crate) fn digamma(x: f64) -> f64 {
    let mut z = x;
    let mut acc = 0.0;
    while z < 20.0 {
        acc -= 1.0 / z;
        z += 1.0;
    }
    let inv2 = 1.0 / (z * z);
    let tail = inv2
        * (1.0 / 12.0
            - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 / 132.0))));
    acc + z.ln() - 0.5 / z - tail
}

/// Trigamma `ψ'(x)` for real `x > 0`.
pub(crate) fn trigamma(x: f64) -> f64 {
    let mut z = x;
    let mut acc = 0.0;
    while z < 20.0 {
        acc += 1.0 / (z * z);
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let tail = inv
        + 0.5 * inv2
        + inv * inv2 * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 * (1.0 / 42.0 - inv2 / 30.0)));
    acc + tail
}

/// Solves `ψ(a) = y` for `a > 0` by Newton iteration.
pub(crate) fn inverse_digamma(y: f64) -> f64 {
    const EULER: f64 = 0.577_215_664_901_532_9;
    let mut a = if y >= -2.22 { y.exp() + 0.5 } else { -1.0 / (y + EULER) };
    for _ in 0..50 {
        let step = (digamma(a) - y) / trigamma(a);
        let next = if a - step <= 0.0 { 0.5 * a } else { a - step };
        let done = (next - a).abs() <= 1e-15 * a;
        a = next;
        if done {
            break;
        }
    }
    a
}
