use crate::error::{HeatError, Result};
use crate::kernel::{SpaceVec, MAX_ORDER};

/// `(d/dt - Laplacian)^m u(x, t)` by `m` nested second-order central
/// differences with steps `h_x` (each axis) and `h_t`. The caller compares
/// the result with `f(x, t)`.
pub fn fd_heat_operator_residual(
    u: &dyn Fn(&SpaceVec, f64) -> Result<f64>,
    m: u32,
    x: &SpaceVec,
    t: f64,
    h_x: f64,
    h_t: f64,
) -> Result<f64> {
    if m == 0 || m > MAX_ORDER {
        return Err(HeatError::Argument(format!("operator power must be in 1..={MAX_ORDER}, got {m}")));
    }
    if !(h_x > 0.0 && h_t > 0.0) {
        return Err(HeatError::Argument("finite-difference steps must be positive".into()));
    }
    if !(t - m as f64 * h_t > 0.0) {
        return Err(HeatError::Argument(format!(
            "time stencil reaches t <= 0: t = {t}, m = {m}, h_t = {h_t}"
        )));
    }
    apply(u, m, x, t, h_x, h_t)
}

fn apply(
    u: &dyn Fn(&SpaceVec, f64) -> Result<f64>,
    m: u32,
    x: &SpaceVec,
    t: f64,
    hx: f64,
    ht: f64,
) -> Result<f64> {
    let inner = |p: &SpaceVec, s: f64| -> Result<f64> {
        if m == 1 {
            u(p, s)
        } else {
            apply(u, m - 1, p, s, hx, ht)
        }
    };
    let centre = inner(x, t)?;
    let mut value = (inner(x, t + ht)? - inner(x, t - ht)?) / (2.0 * ht);
    for axis in 0..x.dim() as usize {
        let plus = inner(&x.shifted(axis, hx), t)?;
        let minus = inner(&x.shifted(axis, -hx), t)?;
        value -= (plus - 2.0 * centre + minus) / (hx * hx);
    }
    Ok(value)
}
