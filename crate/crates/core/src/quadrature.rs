//! Adaptive Gauss–Kronrod quadrature on finite and half-infinite intervals.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_SEGMENTS: usize = 4000;

fn gk15<F: FnMut(f64) -> Result<f64>>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx)? + f(c + dx)?;
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    Ok((kron * h, ((kron - gauss) * h).abs()))
}

/// Integrates `f` over `[a, b]` to the requested relative/absolute accuracy by
/// bisecting the segment with the largest error estimate.
pub fn integrate<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::usage("integration limits must be finite"));
    }
    if a == b {
        return Ok(0.0);
    }
    let (v, e) = gk15(&mut f, a, b)?;
    let mut segs = vec![(a, b, v, e)];
    let mut total = v;
    let mut err = e;
    while err > abs_tol.max(rel_tol * total.abs()) {
        if segs.len() >= MAX_SEGMENTS {
            return Err(Error::numerical("adaptive quadrature exhausted its segments", err));
        }
        let (idx, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (lo, hi, v0, e0) = segs.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&mut f, lo, mid)?;
        let (v2, e2) = gk15(&mut f, mid, hi)?;
        total += v1 + v2 - v0;
        err += e1 + e2 - e0;
        segs.push((lo, mid, v1, e1));
        segs.push((mid, hi, v2, e2));
        if err < 0.0 {
            err = segs.iter().map(|s| s.3).sum();
        }
    }
    Ok(segs.iter().map(|s| s.2).sum())
}

/// Integrates `f` over `[a, ∞)` by summing adaptive pieces `[a + (2^k − 1)L, a + (2^{k+1} − 1)L]`
/// until a piece contributes less than `rel_tol` of the running total.
pub fn integrate_to_infinity<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    a: f64,
    length: f64,
    rel_tol: f64,
) -> Result<f64> {
    let mut lo = a;
    let mut len = length;
    let mut total = 0.0;
    for _ in 0..60 {
        let piece = integrate(&mut f, lo, lo + len, rel_tol * 0.1, 0.0)?;
        total += piece;
        if piece.abs() <= 0.01 * rel_tol * total.abs() {
            return Ok(total);
        }
        lo += len;
        len *= 2.0;
    }
    Err(Error::numerical("tail integral did not decay", total))
}
