//! Crank-Nicolson for `u_t - Laplacian u = f` with Dirichlet data and zero
//! initial values; Peaceman-Rachford alternating directions on rectangles.

use crate::error::{HeatError, Result};
use crate::geometry::Domain;
use crate::kernel::SpaceVec;
use crate::source::SourceField;

/// Solution on a uniform space-time grid. Values at every time level are
/// stored with the boundary data in place, index `iy * xs.len() + ix`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSolution {
    pub xs: Vec<f64>,
    /// Empty for one space dimension.
    pub ys: Vec<f64>,
    pub times: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl GridSolution {
    fn axis_cell(axis: &[f64], x: f64) -> Result<(usize, f64)> {
        let n = axis.len() - 1;
        let (lo, hi) = (axis[0], axis[n]);
        let slack = 1e-12 * (hi - lo);
        if !(x >= lo - slack && x <= hi + slack) {
            return Err(HeatError::Argument(format!("{x} outside grid [{lo}, {hi}]")));
        }
        let u = ((x - lo) / (hi - lo) * n as f64).clamp(0.0, n as f64);
        let i = (u.floor() as usize).min(n - 1);
        Ok((i, u - i as f64))
    }

    fn level_at(&self, level: usize, x: &SpaceVec) -> Result<f64> {
        let vals = &self.values[level];
        let (ix, fx) = Self::axis_cell(&self.xs, x.x())?;
        let nx = self.xs.len();
        if self.ys.is_empty() {
            return Ok((1.0 - fx) * vals[ix] + fx * vals[ix + 1]);
        }
        let (iy, fy) = Self::axis_cell(&self.ys, x.y())?;
        let at = |i: usize, j: usize| vals[j * nx + i];
        Ok((1.0 - fy) * ((1.0 - fx) * at(ix, iy) + fx * at(ix + 1, iy))
            + fy * ((1.0 - fx) * at(ix, iy + 1) + fx * at(ix + 1, iy + 1)))
    }

    /// Piecewise (bi)linear interpolation in space and linear in time; exact
    /// at grid nodes.
    pub fn value_at(&self, x: &SpaceVec, t: f64) -> Result<f64> {
        let expected = if self.ys.is_empty() { 1 } else { 2 };
        if x.dim() as usize != expected {
            return Err(HeatError::Argument(format!("point {x:?} has the wrong dimension")));
        }
        let (it, ft) = Self::axis_cell(&self.times, t)?;
        let v0 = self.level_at(it, x)?;
        if ft == 0.0 {
            return Ok(v0);
        }
        Ok((1.0 - ft) * v0 + ft * self.level_at(it + 1, x)?)
    }

    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Solves `a_i x_{i-1} + b_i x_i + c_i x_{i+1} = d_i` in place (Thomas).
fn thomas(a: f64, b: f64, c: f64, d: &mut [f64], scratch: &mut Vec<f64>) -> Result<()> {
    let n = d.len();
    scratch.clear();
    scratch.resize(n, 0.0);
    let mut denom = b;
    if denom == 0.0 {
        return Err(HeatError::Numerical("singular tridiagonal system".into()));
    }
    scratch[0] = c / denom;
    d[0] /= denom;
    for i in 1..n {
        denom = b - a * scratch[i - 1];
        if denom.abs() < 1e-300 {
            return Err(HeatError::Numerical("singular tridiagonal system".into()));
        }
        scratch[i] = c / denom;
        d[i] = (d[i] - a * d[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        d[i] -= scratch[i] * d[i + 1];
    }
    if d.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(HeatError::Numerical("non-finite values in tridiagonal solve".into()))
    }
}

fn uniform(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..=n)
        .map(|i| if i == n { hi } else { lo + (hi - lo) * i as f64 / n as f64 })
        .collect()
}

/// Crank-Nicolson (intervals) or Peaceman-Rachford ADI (rectangles) with
/// `nx` cells per axis and `nt` steps on `[0, horizon]`.
pub fn crank_nicolson_m1(
    f: &dyn SourceField,
    dirichlet: &dyn Fn(&SpaceVec, f64) -> f64,
    domain: &Domain,
    nx: usize,
    nt: usize,
    horizon: f64,
) -> Result<GridSolution> {
    domain.validate()?;
    if nx < 16 || nt < 16 {
        return Err(HeatError::Config(format!("Crank-Nicolson needs nx, nt >= 16, got {nx}, {nt}")));
    }
    if !(horizon > 0.0) {
        return Err(HeatError::Config(format!("horizon must be > 0, got {horizon}")));
    }
    let times = uniform(0.0, horizon, nt);
    match *domain {
        Domain::Interval { a, b } => interval_cn(f, dirichlet, a, b, nx, times),
        Domain::Rectangle { ax, bx, ay, by } => {
            rectangle_adi(f, dirichlet, [ax, bx, ay, by], nx, times)
        }
        Domain::Disk { .. } => Err(HeatError::Config(
            "Crank-Nicolson oracle supports intervals and rectangles".into(),
        )),
    }
}

fn interval_cn(
    f: &dyn SourceField,
    g: &dyn Fn(&SpaceVec, f64) -> f64,
    a: f64,
    b: f64,
    nx: usize,
    times: Vec<f64>,
) -> Result<GridSolution> {
    let xs = uniform(a, b, nx);
    let h = (b - a) / nx as f64;
    let dt = times[1] - times[0];
    let r = dt / (h * h);
    let pts: Vec<SpaceVec> = xs.iter().map(|&x| SpaceVec::d1(x)).collect();
    let source = |t: f64| pts.iter().map(|p| f.value(p, t)).collect::<Vec<_>>();
    let mut values = Vec::with_capacity(times.len());
    let mut u = vec![0.0; nx + 1];
    values.push(u.clone());
    let mut f_old = source(0.0);
    let mut rhs = vec![0.0; nx - 1];
    let mut scratch = Vec::new();
    for &t in &times[1..] {
        let f_new = source(t);
        let (g0, g1) = (g(&pts[0], t), g(&pts[nx], t));
        for i in 1..nx {
            rhs[i - 1] = u[i]
                + 0.5 * r * (u[i - 1] - 2.0 * u[i] + u[i + 1])
                + 0.5 * dt * (f_old[i] + f_new[i]);
        }
        rhs[0] += 0.5 * r * g0;
        rhs[nx - 2] += 0.5 * r * g1;
        thomas(-0.5 * r, 1.0 + r, -0.5 * r, &mut rhs, &mut scratch)?;
        u[0] = g0;
        u[nx] = g1;
        u[1..nx].copy_from_slice(&rhs);
        values.push(u.clone());
        f_old = f_new;
    }
    Ok(GridSolution {
        xs,
        ys: Vec::new(),
        times,
        values,
    })
}

fn rectangle_adi(
    f: &dyn SourceField,
    g: &dyn Fn(&SpaceVec, f64) -> f64,
    [ax, bx, ay, by]: [f64; 4],
    n: usize,
    times: Vec<f64>,
) -> Result<GridSolution> {
    let xs = uniform(ax, bx, n);
    let ys = uniform(ay, by, n);
    let np = n + 1;
    let idx = |i: usize, j: usize| j * np + i;
    let hx = (bx - ax) / n as f64;
    let hy = (by - ay) / n as f64;
    let dt = times[1] - times[0];
    let (rx, ry) = (dt / (hx * hx), dt / (hy * hy));
    let point = |i: usize, j: usize| SpaceVec::d2(xs[i], ys[j]);
    let on_edge = |i: usize, j: usize| i == 0 || j == 0 || i == n || j == n;
    let boundary = |t: f64| {
        let mut v = vec![0.0; np * np];
        for j in 0..np {
            for i in 0..np {
                if on_edge(i, j) {
                    v[idx(i, j)] = g(&point(i, j), t);
                }
            }
        }
        v
    };
    let mut u = vec![0.0; np * np];
    let mut values = vec![u.clone()];
    let mut g_old = boundary(0.0);
    let mut star = vec![0.0; np * np];
    let mut line = vec![0.0; n - 1];
    let mut scratch = Vec::new();
    for step in 1..times.len() {
        let t_old = times[step - 1];
        let t_new = times[step];
        let t_mid = 0.5 * (t_old + t_new);
        let g_new = boundary(t_new);
        let fmid: Vec<f64> = (0..np * np)
            .map(|k| {
                let (i, j) = (k % np, k / np);
                if on_edge(i, j) { 0.0 } else { f.value(&point(i, j), t_mid) }
            })
            .collect();
        // Intermediate boundary values on the x = const sides, consistent
        // with the two half steps.
        for &i in &[0, n] {
            for j in 1..n {
                let lap = |v: &[f64]| v[idx(i, j - 1)] - 2.0 * v[idx(i, j)] + v[idx(i, j + 1)];
                star[idx(i, j)] = 0.5 * (g_old[idx(i, j)] + 0.5 * ry * lap(&g_old))
                    + 0.5 * (g_new[idx(i, j)] - 0.5 * ry * lap(&g_new));
            }
        }
        // x sweep: (1 - rx/2 dxx) u* = (1 + ry/2 dyy) u^n + dt/2 f
        for j in 1..n {
            for i in 1..n {
                line[i - 1] = u[idx(i, j)]
                    + 0.5 * ry * (u[idx(i, j - 1)] - 2.0 * u[idx(i, j)] + u[idx(i, j + 1)])
                    + 0.5 * dt * fmid[idx(i, j)];
            }
            line[0] += 0.5 * rx * star[idx(0, j)];
            line[n - 2] += 0.5 * rx * star[idx(n, j)];
            thomas(-0.5 * rx, 1.0 + rx, -0.5 * rx, &mut line, &mut scratch)?;
            for i in 1..n {
                star[idx(i, j)] = line[i - 1];
            }
        }
        // y sweep: (1 - ry/2 dyy) u^{n+1} = (1 + rx/2 dxx) u* + dt/2 f
        let mut next = g_new.clone();
        for i in 1..n {
            for j in 1..n {
                line[j - 1] = star[idx(i, j)]
                    + 0.5 * rx * (star[idx(i - 1, j)] - 2.0 * star[idx(i, j)] + star[idx(i + 1, j)])
                    + 0.5 * dt * fmid[idx(i, j)];
            }
            line[0] += 0.5 * ry * g_new[idx(i, 0)];
            line[n - 2] += 0.5 * ry * g_new[idx(i, n)];
            thomas(-0.5 * ry, 1.0 + ry, -0.5 * ry, &mut line, &mut scratch)?;
            for j in 1..n {
                next[idx(i, j)] = line[j - 1];
            }
        }
        u = next;
        values.push(u.clone());
        g_old = g_new;
    }
    Ok(GridSolution {
        xs,
        ys,
        times,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::FnSource;
    use std::f64::consts::PI;

    #[test]
    fn zero_problem_stays_zero() {
        let f = FnSource::new(|_: &SpaceVec, _| 0.0);
        let d = Domain::Interval { a: 0.0, b: 1.0 };
        let sol = crank_nicolson_m1(&f, &|_, _| 0.0, &d, 16, 16, 1.0).unwrap();
        assert_eq!(sol.max_abs(), 0.0);
        assert!(crank_nicolson_m1(&f, &|_, _| 0.0, &d, 8, 16, 1.0).is_err());
    }

    #[test]
    fn manufactured_interval() {
        let f = FnSource::new(|x: &SpaceVec, t| (PI * x.x()).sin() * (1.0 + PI * PI * t));
        let d = Domain::Interval { a: 0.0, b: 1.0 };
        let sol = crank_nicolson_m1(&f, &|_, _| 0.0, &d, 200, 200, 1.0).unwrap();
        let mut err: f64 = 0.0;
        for (n, t) in sol.times.iter().enumerate() {
            for (i, x) in sol.xs.iter().enumerate() {
                err = err.max((sol.values[n][i] - t * (PI * x).sin()).abs());
            }
        }
        assert!(err <= 1e-4, "{err}");
    }

    #[test]
    fn manufactured_rectangle_with_data() {
        // u = t (1 + x y) + t sin(pi x) sin(pi y)
        let f = FnSource::new(|p: &SpaceVec, t| {
            let s = (PI * p.x()).sin() * (PI * p.y()).sin();
            1.0 + p.x() * p.y() + s * (1.0 + 2.0 * PI * PI * t)
        });
        let exact = |p: &SpaceVec, t: f64| {
            t * (1.0 + p.x() * p.y()) + t * (PI * p.x()).sin() * (PI * p.y()).sin()
        };
        let d = Domain::Rectangle {
            ax: 0.0,
            bx: 1.0,
            ay: 0.0,
            by: 1.0,
        };
        let sol = crank_nicolson_m1(&f, &exact, &d, 40, 40, 0.5).unwrap();
        let p = SpaceVec::d2(0.5, 0.25);
        let err = (sol.value_at(&p, 0.5).unwrap() - exact(&p, 0.5)).abs();
        assert!(err <= 1e-3, "{err}");
    }
}
