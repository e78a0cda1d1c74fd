//! `V_m[f] = V_1[V_1[... V_1[f 1_Q]]]`: the order-`m` potential as `m`
//! nested first-order potentials, each stage solving `(d/dt - Laplacian) w_j
//! = w_{j-1}` from zero on a periodic box around `Q`. Stages are advanced in
//! Fourier space with exponential time differencing (exact decay, forcing
//! interpolated linearly over each step), so nothing here reuses the
//! kernel `eps_{m,n}` for `m > 1`.

use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{HeatError, Result};
use crate::geometry::Domain;
use crate::kernel::{SpaceVec, MAX_ORDER};
use crate::source::SourceField;

/// Largest admissible periodic leakage `erfc(pad / (2 sqrt t))`.
const TAIL_TOL: f64 = 1e-8;

/// Discretization of the cascade: grid points per axis and time steps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CascadeRules {
    pub grid: usize,
    pub steps: usize,
}

/// Stage `m` of the cascade on the periodic grid at a fixed time.
#[derive(Debug, Clone)]
pub struct CascadeSnapshot {
    lo: [f64; 2],
    period: [f64; 2],
    dims: [usize; 2],
    dim: usize,
    /// Fourier coefficients, index `iy * nx + ix`.
    coeffs: Vec<Complex<f64>>,
}

impl CascadeSnapshot {
    /// Trigonometric interpolation of the stage-`m` field at `x`.
    pub fn eval(&self, x: &SpaceVec) -> Result<f64> {
        if x.dim() as usize != self.dim {
            return Err(HeatError::Argument(format!("point {x:?} has the wrong dimension")));
        }
        let [nx, ny] = self.dims;
        let phase = |axis: usize, n: usize| -> Vec<Complex<f64>> {
            let u = (x.as_slice()[axis] - self.lo[axis]) / self.period[axis];
            (0..n)
                .map(|k| {
                    let kk = signed_freq(k, n) as f64;
                    Complex::from_polar(1.0, 2.0 * PI * kk * u)
                })
                .collect()
        };
        let px = phase(0, nx);
        let py = if self.dim == 2 { phase(1, ny) } else { vec![Complex::new(1.0, 0.0)] };
        let mut total = Complex::new(0.0, 0.0);
        for (iy, ey) in py.iter().enumerate() {
            let row = &self.coeffs[iy * nx..(iy + 1) * nx];
            let mut acc = Complex::new(0.0, 0.0);
            for (c, ex) in row.iter().zip(&px) {
                acc += c * ex;
            }
            total += acc * ey;
        }
        Ok(total.re / (nx * ny) as f64)
    }
}

fn signed_freq(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

struct Fft2 {
    dims: [usize; 2],
    fwd_x: std::sync::Arc<dyn rustfft::Fft<f64>>,
    fwd_y: std::sync::Arc<dyn rustfft::Fft<f64>>,
}

impl Fft2 {
    fn new(dims: [usize; 2]) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            dims,
            fwd_x: planner.plan_fft_forward(dims[0]),
            fwd_y: planner.plan_fft_forward(dims[1]),
        }
    }

    fn forward(&self, data: &mut [Complex<f64>]) {
        let [nx, ny] = self.dims;
        self.fwd_x.process(data);
        if ny > 1 {
            let mut col = vec![Complex::new(0.0, 0.0); ny];
            for ix in 0..nx {
                for iy in 0..ny {
                    col[iy] = data[iy * nx + ix];
                }
                self.fwd_y.process(&mut col);
                for iy in 0..ny {
                    data[iy * nx + ix] = col[iy];
                }
            }
        }
    }
}

/// `(1 - e^{-z}) / z` and `(z - 1 + e^{-z}) / z^2`.
fn etd_factors(z: f64) -> (f64, f64) {
    if z < 1e-3 {
        let p1 = 1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0;
        let p2 = 0.5 - z / 6.0 + z * z / 24.0 - z * z * z / 120.0;
        (p1, p2)
    } else {
        let em = (-z).exp_m1();
        (-em / z, (z + em) / (z * z))
    }
}

/// Runs the cascade to time `t` and returns the stage-`m` field.
///
/// `enlargement` is the padding added on every side of the bounding box of
/// `Q`; it must be at least `8 sqrt(t)` and keep `erfc(pad / (2 sqrt t))`
/// below `1e-8`.
pub fn cascade_snapshot(
    m: u32,
    f: &dyn SourceField,
    domain: &Domain,
    enlargement: f64,
    rules: &CascadeRules,
    t: f64,
) -> Result<CascadeSnapshot> {
    domain.validate()?;
    if m == 0 || m > MAX_ORDER {
        return Err(HeatError::Config(format!("cascade order must be in 1..={MAX_ORDER}, got {m}")));
    }
    if !(t > 0.0) {
        return Err(HeatError::Argument(format!("cascade needs t > 0, got {t}")));
    }
    if rules.grid < 8 || rules.steps < 1 {
        return Err(HeatError::Config("cascade needs grid >= 8 and steps >= 1".into()));
    }
    let root = t.sqrt();
    let tail = libm::erfc(enlargement / (2.0 * root));
    if !(enlargement >= 8.0 * root) || tail > TAIL_TOL {
        return Err(HeatError::Config(format!(
            "cascade padding {enlargement} too small for t = {t} (tail {tail:e})"
        )));
    }
    let dim = domain.dim() as usize;
    let bb = domain.bounding_box();
    let mut lo = [0.0; 2];
    let mut period = [1.0; 2];
    let mut dims = [1usize; 2];
    for axis in 0..dim {
        lo[axis] = bb.lo[axis] - enlargement;
        period[axis] = bb.extent(axis) + 2.0 * enlargement;
        dims[axis] = rules.grid;
    }
    let h = [period[0] / dims[0] as f64, period[1] / dims[1] as f64];
    let points: Vec<(usize, SpaceVec)> = (0..dims[1])
        .flat_map(|iy| (0..dims[0]).map(move |ix| (iy, ix)))
        .map(|(iy, ix)| {
            let px = lo[0] + ix as f64 * h[0];
            let p = if dim == 1 {
                SpaceVec::d1(px)
            } else {
                SpaceVec::d2(px, lo[1] + iy as f64 * h[1])
            };
            (iy * dims[0] + ix, p)
        })
        .filter_map(|(i, p)| match domain.contains(&p) {
            Ok(true) => Some(Ok((i, p))),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        })
        .collect::<Result<_>>()?;
    let lambda: Vec<f64> = (0..dims[1])
        .flat_map(|iy| (0..dims[0]).map(move |ix| (iy, ix)))
        .map(|(iy, ix)| {
            let kx = 2.0 * PI * signed_freq(ix, dims[0]) as f64 / period[0];
            let ky = if dim == 2 {
                2.0 * PI * signed_freq(iy, dims[1]) as f64 / period[1]
            } else {
                0.0
            };
            kx * kx + ky * ky
        })
        .collect();

    let fft = Fft2::new(dims);
    let size = dims[0] * dims[1];
    let sample = |tau: f64| {
        let mut buf = vec![Complex::new(0.0, 0.0); size];
        for (i, p) in &points {
            buf[*i] = Complex::new(f.value(p, tau), 0.0);
        }
        fft.forward(&mut buf);
        buf
    };

    let dt = t / rules.steps as f64;
    let m = m as usize;
    let factors: Vec<(f64, f64, f64)> = lambda
        .iter()
        .map(|&l| {
            let z = l * dt;
            let (p1, p2) = etd_factors(z);
            ((-z).exp(), dt * p1, dt * p2)
        })
        .collect();
    // stages[j] holds w_{j+1}; the forcing of stage j is stage j-1 (or f).
    let mut stages = vec![vec![Complex::new(0.0, 0.0); size]; m];
    let mut f_old = sample(0.0);
    for step in 0..rules.steps {
        let tau = if step + 1 == rules.steps { t } else { (step + 1) as f64 * dt };
        let f_new = sample(tau);
        let old = stages.clone();
        for j in 0..m {
            let (done, rest) = stages.split_at_mut(j);
            let (g0, g1) = if j == 0 { (&f_old, &f_new) } else { (&old[j - 1], &done[j - 1]) };
            for (i, w) in rest[0].iter_mut().enumerate() {
                let (decay, a1, a2) = factors[i];
                *w = decay * *w + a1 * g0[i] + a2 * (g1[i] - g0[i]);
            }
        }
        f_old = f_new;
    }
    Ok(CascadeSnapshot {
        lo,
        period,
        dims,
        dim,
        coeffs: stages.pop().expect("m >= 1"),
    })
}

/// Stage-`m` cascade value at `(x, t)`; see [`cascade_snapshot`].
pub fn cascade_volume_potential(
    m: u32,
    f: &dyn SourceField,
    domain: &Domain,
    enlargement: f64,
    rules: &CascadeRules,
    x: &SpaceVec,
    t: f64,
) -> Result<f64> {
    if f.is_zero() {
        return Ok(0.0);
    }
    cascade_snapshot(m, f, domain, enlargement, rules, t)?.eval(x)
}
#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::FnSource;

    #[test]
    fn etd_factors_are_continuous_at_the_switch() {
        let (a1, a2) = etd_factors(1e-3 * (1.0 - 1e-12));
        let (b1, b2) = etd_factors(1e-3 * (1.0 + 1e-12));
        assert!((a1 - b1).abs() < 1e-12 && (a2 - b2).abs() < 1e-10);
    }

    #[test]
    fn padding_and_zero_source() {
        let d = Domain::Interval { a: -1.0, b: 1.0 };
        let zero = FnSource::new(|_: &SpaceVec, _| 0.0);
        let rules = CascadeRules { grid: 64, steps: 10 };
        let x = SpaceVec::d1(0.0);
        assert_eq!(cascade_volume_potential(2, &zero, &d, 8.0, &rules, &x, 0.5).unwrap(), 0.0);
        let one = FnSource::new(|_: &SpaceVec, _| 1.0);
        let err = cascade_volume_potential(2, &one, &d, 8.0 * 0.5f64.sqrt(), &rules, &x, 0.5);
        assert!(matches!(err, Err(HeatError::Config(_))));
    }

    #[test]
    fn constant_source_far_from_edges() {
        // Early on, the potential of 1_Q at the centre is t^m / m!.
        let d = Domain::Interval { a: -1.0, b: 1.0 };
        let one = FnSource::new(|_: &SpaceVec, _| 1.0);
        let rules = CascadeRules { grid: 1024, steps: 200 };
        let t = 0.01;
        let v = cascade_volume_potential(2, &one, &d, 1.0, &rules, &SpaceVec::d1(0.0), t).unwrap();
        assert!((v - t * t / 2.0).abs() < 1e-6 * t * t, "{v}");
    }
}
