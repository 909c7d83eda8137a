//! Scalar special functions: log-gamma, erfc, the Meijer G-function
//! `G^{n,0}_{0,n}` and the generalized hypergeometric series `₁F₂ₙ`.

mod erfc;
mod gamma;
mod hyper;
mod meijer;

pub use erfc::erfc;
pub use gamma::{gamma, ln_gamma, ln_gamma_complex};
pub use hyper::hyp_1_f_2n;
pub use meijer::{
    ln_meijer_g, ln_meijer_g_asymptotic, ln_meijer_g_contour, meijer_g, meijer_g_asymptotic, MellinBarnesConfig,
};

