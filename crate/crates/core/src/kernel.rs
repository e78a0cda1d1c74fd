//! The iterated heat kernel family
//!
//! ```text
//! eps_{m,n}(r, s) = theta(s) * s^(m-1) / (m-1)! * (4 pi s)^(-n/2) * exp(-|r|^2 / (4 s))
//! ```
//!
//! `eps_{1,n}` is the Gaussian heat kernel; applying the heat operator
//! `d/ds - Laplacian` to `eps_{m,n}` yields `eps_{m-1,n}`, which is what the
//! `1/(m-1)!` normalization buys. The adjoint operator acting in the source
//! variables `(xi, tau)` produces the same index shift, so adjoint powers are
//! pure index arithmetic.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{HeatError, Result};

/// Largest supported iteration order.
pub const MAX_ORDER: u32 = 20;

/// Exponent beyond which `exp(-x)` underflows in double precision.
const UNDERFLOW_EXPONENT: f64 = 745.0;

/// Iteration order `m` of the heat operator and space dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawOrder", into = "RawOrder")]
pub struct KernelOrder {
    m: u32,
    n: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOrder {
    m: u32,
    n: u32,
}

impl TryFrom<RawOrder> for KernelOrder {
    type Error = HeatError;
    fn try_from(raw: RawOrder) -> Result<Self> {
        KernelOrder::new(raw.m, raw.n)
    }
}

impl From<KernelOrder> for RawOrder {
    fn from(o: KernelOrder) -> Self {
        RawOrder { m: o.m, n: o.n }
    }
}

impl KernelOrder {
    pub fn new(m: u32, n: u32) -> Result<Self> {
        if m == 0 || m > MAX_ORDER {
            return Err(HeatError::Config(format!(
                "order m = {m} outside 1..={MAX_ORDER}"
            )));
        }
        if n != 1 && n != 2 {
            return Err(HeatError::Config(format!(
                "space dimension n = {n} unsupported (1 or 2)"
            )));
        }
        Ok(Self { m, n })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Same dimension, order `m - k`. `None` once the order is exhausted.
    pub fn lowered(&self, k: u32) -> Option<Self> {
        (k < self.m).then(|| Self {
            m: self.m - k,
            n: self.n,
        })
    }

    /// `1 / (4 pi s)^(n/2)` times `s^(m-1) / (m-1)!`.
    fn prefactor(&self, s: f64) -> f64 {
        let spatial = match self.n {
            1 => 1.0 / (4.0 * PI * s).sqrt(),
            _ => 1.0 / (4.0 * PI * s),
        };
        if self.m == 1 {
            spatial
        } else {
            spatial * s.powi(self.m as i32 - 1) / factorial(self.m - 1)
        }
    }
}

/// `k!` as a float via an integer product; exact for `k <= 20`.
pub fn factorial(k: u32) -> f64 {
    debug_assert!(k <= MAX_ORDER);
    (1..=k as u64).product::<u64>() as f64
}

/// A point or displacement in one or two space dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceVec {
    coords: [f64; 2],
    dim: u8,
}

impl SpaceVec {
    pub fn d1(x: f64) -> Self {
        Self {
            coords: [x, 0.0],
            dim: 1,
        }
    }

    pub fn d2(x: f64, y: f64) -> Self {
        Self {
            coords: [x, y],
            dim: 2,
        }
    }

    pub fn zero(dim: u32) -> Self {
        if dim == 1 {
            Self::d1(0.0)
        } else {
            Self::d2(0.0, 0.0)
        }
    }

    pub fn from_slice(xs: &[f64]) -> Result<Self> {
        match xs {
            [x] => Ok(Self::d1(*x)),
            [x, y] => Ok(Self::d2(*x, *y)),
            _ => Err(HeatError::Config(format!(
                "expected 1 or 2 coordinates, got {}",
                xs.len()
            ))),
        }
    }

    pub fn dim(&self) -> u32 {
        self.dim as u32
    }

    pub fn x(&self) -> f64 {
        self.coords[0]
    }

    pub fn y(&self) -> f64 {
        self.coords[1]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords[..self.dim as usize]
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.coords[0] * other.coords[0] + self.coords[1] * other.coords[1]
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(&self, a: f64) -> Self {
        Self {
            coords: [a * self.coords[0], a * self.coords[1]],
            dim: self.dim,
        }
    }

    /// Copy with component `axis` shifted by `h`.
    pub fn shifted(&self, axis: usize, h: f64) -> Self {
        let mut out = *self;
        out.coords[axis] += h;
        out
    }

    pub(crate) fn check_dim(&self, order: &KernelOrder) -> Result<()> {
        if self.dim() != order.n {
            return Err(HeatError::Config(format!(
                "vector of dimension {} used with kernel dimension {}",
                self.dim(),
                order.n
            )));
        }
        Ok(())
    }
}

impl Add for SpaceVec {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            coords: [self.coords[0] + o.coords[0], self.coords[1] + o.coords[1]],
            dim: self.dim.max(o.dim),
        }
    }
}

impl Sub for SpaceVec {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self {
            coords: [self.coords[0] - o.coords[0], self.coords[1] - o.coords[1]],
            dim: self.dim.max(o.dim),
        }
    }
}

impl Neg for SpaceVec {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul<SpaceVec> for f64 {
    type Output = SpaceVec;
    fn mul(self, v: SpaceVec) -> SpaceVec {
        v.scale(self)
    }
}

/// `eps_{m,n}(r, s)`; zero for `s <= 0` and below double-precision underflow.
pub fn iterated_kernel(order: KernelOrder, r: &SpaceVec, s: f64) -> f64 {
    eval_kernel(order, r.norm_sq(), s)
}

#[inline]
pub(crate) fn eval_kernel(order: KernelOrder, r2: f64, s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    let exponent = r2 / (4.0 * s);
    if exponent > UNDERFLOW_EXPONENT {
        return 0.0;
    }
    order.prefactor(s) * (-exponent).exp()
}

/// Spatial gradient `grad_r eps = -r / (2 s) * eps`.
pub fn kernel_gradient(order: KernelOrder, r: &SpaceVec, s: f64) -> Result<SpaceVec> {
    if s <= 0.0 {
        return Err(HeatError::Domain(format!(
            "kernel gradient requested at s = {s} <= 0"
        )));
    }
    Ok(r.scale(-iterated_kernel(order, r, s) / (2.0 * s)))
}

/// Exterior normal derivative with respect to the source point `xi`,
/// `d eps(x - xi, s) / d n_xi = (r . n) / (2 s) * eps` with `r = x - xi`.
pub fn kernel_normal_derivative(
    order: KernelOrder,
    r: &SpaceVec,
    s: f64,
    normal: &SpaceVec,
) -> Result<f64> {
    if s <= 0.0 {
        return Err(HeatError::Domain(format!(
            "normal derivative requested at s = {s} <= 0"
        )));
    }
    Ok(normal_derivative_unchecked(order, r, s, normal))
}

#[inline]
pub(crate) fn normal_derivative_unchecked(
    order: KernelOrder,
    r: &SpaceVec,
    s: f64,
    normal: &SpaceVec,
) -> f64 {
    r.dot(normal) / (2.0 * s) * iterated_kernel(order, r, s)
}

/// `(adjoint heat operator)^k eps_{m,n}`: the order-`(m-k)` kernel, and zero
/// once `k >= m`.
pub fn adjoint_power(k: u32, order: KernelOrder, r: &SpaceVec, s: f64) -> f64 {
    match order.lowered(k) {
        Some(lower) => iterated_kernel(lower, r, s),
        None => 0.0,
    }
}
