//! Truncated product evaluation of the odd theta function
//! `θ(x) = (x^{1/2} − x^{-1/2}) ∏_{n≥1} (1 − qⁿx)(1 − qⁿ/x)`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hard cap on the number of product factors.
pub const MAX_TERMS: usize = 512;

/// Number of product factors needed so that `|q|^N · max(|x|, 1/|x|) < tol`.
pub fn truncation_order(abs_q: f64, abs_x: f64, tol: f64) -> usize {
    if abs_q == 0.0 {
        return 0;
    }
    let big = abs_x.max(1.0 / abs_x);
    // |q|^N < tol / big  <=>  N > ln(tol/big) / ln|q|
    let n = ((tol / big).ln() / abs_q.ln()).ceil();
    if n.is_finite() && n > 0.0 {
        (n as usize + 1).min(MAX_TERMS)
    } else {
        1
    }
}

/// `θ(x)` for `x = exp(log_x)`; the square root is taken on the branch of the
/// supplied logarithm.
pub fn theta_eval(log_x: Complex64, q: Complex64, tol: f64) -> Result<Complex64> {
    let abs_q = q.norm();
    if !(abs_q < 1.0) {
        return Err(Error::Eval(format!("nome |q| = {abs_q} is not inside the unit disk")));
    }
    if !log_x.re.is_finite() || !log_x.im.is_finite() {
        return Err(Error::Eval("theta argument is zero or not finite".into()));
    }
    let x = log_x.exp();
    let s = (log_x * 0.5).exp();
    let mut v = s - 1.0 / s;
    let n = truncation_order(abs_q, x.norm(), tol);
    let xi = 1.0 / x;
    let mut qn = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        qn *= q;
        v *= (1.0 - qn * x) * (1.0 - qn * xi);
    }
    Ok(v)
}

/// `â(x) = x^{1/2} − x^{-1/2}` for `x = exp(log_x)`.
pub fn ahat_eval(log_x: Complex64) -> Complex64 {
    let s = (log_x * 0.5).exp();
    s - 1.0 / s
}
