//! Independent reference quadrature shared by the integration tests.
#![allow(dead_code)]

/// Adaptive Simpson on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[allow(clippy::too_many_arguments)]
fn recurse(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Splits `[a, b]` into `pieces` equal parts before adapting, so narrow
/// features are not missed by the first Simpson estimate.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, pieces: usize, tol: f64) -> f64 {
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| adaptive_simpson(f, a + h * i as f64, a + h * (i + 1) as f64, tol / pieces as f64))
        .sum()
}

/// Equispaced points on `[lo, hi]` including both ends.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}
