//! Numbers carried as `mantissa · e^{exponent}` so that sums of terms spanning
//! hundreds of orders of magnitude can be formed without overflow.

use num_complex::Complex64;

/// A complex number `mant · e^{exp}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledComplex {
    pub mant: Complex64,
    pub exp: f64,
}

impl ScaledComplex {
    pub const ZERO: ScaledComplex = ScaledComplex {
        mant: Complex64::new(0.0, 0.0),
        exp: f64::NEG_INFINITY,
    };

    pub fn new(mant: Complex64, exp: f64) -> Self {
        Self { mant, exp }.normalized()
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z, 0.0)
    }

    /// `e^{ln_abs} · e^{i phase}`.
    pub fn from_polar_ln(ln_abs: f64, phase: f64) -> Self {
        if ln_abs == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        Self {
            mant: Complex64::from_polar(1.0, phase),
            exp: ln_abs,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.exp == f64::NEG_INFINITY || self.mant == Complex64::new(0.0, 0.0)
    }

    fn normalized(self) -> Self {
        let a = self.mant.norm();
        if a == 0.0 || self.exp == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        let shift = a.ln();
        Self {
            mant: self.mant / a,
            exp: self.exp + shift,
        }
    }

    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.mant.norm().ln() + self.exp
        }
    }

    /// Converts to an ordinary complex number (may overflow or underflow).
    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            Complex64::new(0.0, 0.0)
        } else {
            self.mant * self.exp.exp()
        }
    }

    /// Multiplies by `e^{t}`.
    pub fn scale_exp(self, t: f64) -> Self {
        if self.is_zero() {
            self
        } else {
            Self {
                mant: self.mant,
                exp: self.exp + t,
            }
        }
    }

    pub fn mul(self, other: Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::ZERO;
        }
        Self {
            mant: self.mant * other.mant,
            exp: self.exp + other.exp,
        }
        .normalized()
    }

    pub fn mul_complex(self, z: Complex64) -> Self {
        self.mul(Self::from_complex(z))
    }

    pub fn add(self, other: Self) -> Self {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let e = self.exp.max(other.exp);
        let m = self.mant * (self.exp - e).exp() + other.mant * (other.exp - e).exp();
        Self { mant: m, exp: e }.normalized()
    }

    /// `self − other`, computed so that `a.sub(b)` is the exact negation of `b.sub(a)`.
    pub fn sub(self, other: Self) -> Self {
        self.add(other.neg())
    }

    pub fn neg(self) -> Self {
        Self {
            mant: -self.mant,
            exp: self.exp,
        }
    }

    pub fn conj(self) -> Self {
        Self {
            mant: self.mant.conj(),
            exp: self.exp,
        }
    }
}

/// Running `ln Σ e^{x_i}` without overflow.
#[derive(Debug, Clone, Copy)]
pub struct LogSumExp {
    max: f64,
    acc: f64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            acc: 0.0,
        }
    }
}

impl LogSumExp {
    pub fn push(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x <= self.max {
            self.acc += (x - self.max).exp();
        } else {
            self.acc = self.acc * (self.max - x).exp() + 1.0;
            self.max = x;
        }
    }

    pub fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.acc.ln()
        }
    }
}

impl FromIterator<f64> for LogSumExp {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = LogSumExp::default();
        for x in iter {
            s.push(x);
        }
        s
    }
}
