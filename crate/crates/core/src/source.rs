//! Source terms `f(x, t)` and boundary data `phi(x, t)`.
//!
//! Sources are assumed Hölder continuous in space and time with exponents
//! `(gamma, gamma / 2)`, `0 < gamma < 1`. This is a documented assumption on
//! the analytic families below; nothing checks it at runtime.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{HeatError, Result};
use crate::geometry::{Aabb, Domain};
use crate::kernel::SpaceVec;

/// A deterministic source `f(x, t)` with an optional box outside which it
/// vanishes.
pub trait SourceField: Sync {
    fn value(&self, x: &SpaceVec, t: f64) -> f64;

    fn support(&self) -> Option<Aabb> {
        None
    }

    /// True when the source is identically zero.
    fn is_zero(&self) -> bool {
        false
    }
}

/// Wraps a closure as a source.
pub struct FnSource<F> {
    f: F,
    support: Option<Aabb>,
}

impl<F> FnSource<F>
where
    F: Fn(&SpaceVec, f64) -> f64 + Sync,
{
    pub fn new(f: F) -> Self {
        Self { f, support: None }
    }

    pub fn with_support(f: F, support: Aabb) -> Self {
        Self {
            f,
            support: Some(support),
        }
    }
}

impl<F> SourceField for FnSource<F>
where
    F: Fn(&SpaceVec, f64) -> f64 + Sync,
{
    fn value(&self, x: &SpaceVec, t: f64) -> f64 {
        (self.f)(x, t)
    }

    fn support(&self) -> Option<Aabb> {
        self.support
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TimeProfile {
    #[default]
    Constant,
    /// Grows linearly, `p(t) = t`.
    Linear,
}

impl TimeProfile {
    pub fn value(&self, t: f64) -> f64 {
        match self {
            TimeProfile::Constant => 1.0,
            TimeProfile::Linear => t,
        }
    }
}

/// Support radius of a Gaussian bump in units of its width.
pub const BUMP_SUPPORT_WIDTHS: f64 = 4.0;

/// `amplitude * exp(-|x - center|^2 / width^2) * p(t)`; treated as supported
/// in the box `center +- 4 width` (the tail there is below 1.2e-7).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianBump {
    pub center: Vec<f64>,
    pub width: f64,
    pub amplitude: f64,
    #[serde(default)]
    pub time_profile: TimeProfile,
}

impl GaussianBump {
    pub fn center_vec(&self) -> Result<SpaceVec> {
        SpaceVec::from_slice(&self.center)
    }

    pub fn support_box(&self) -> Result<Aabb> {
        let c = self.center_vec()?;
        let r = BUMP_SUPPORT_WIDTHS * self.width;
        Ok(if c.dim() == 1 {
            Aabb::interval(c.x() - r, c.x() + r)
        } else {
            Aabb::rect(c.x() - r, c.x() + r, c.y() - r, c.y() + r)
        })
    }
}

/// Named analytic source families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceSpec {
    Zero,
    GaussianBump(GaussianBump),
    /// Forcing of the manufactured solution `t * prod_i sin(pi (x_i - a_i) / L_i)`
    /// for the first-order heat equation on an interval or rectangle.
    Manufactured,
}

/// A [`SourceSpec`] bound to a domain.
#[derive(Debug, Clone)]
pub struct Source {
    spec: SourceSpec,
    domain: Domain,
    center: SpaceVec,
    support: Option<Aabb>,
}

impl Source {
    pub fn new(spec: SourceSpec, domain: Domain) -> Result<Self> {
        domain.validate()?;
        let (center, support) = match &spec {
            SourceSpec::Zero => (SpaceVec::zero(domain.dim()), None),
            SourceSpec::GaussianBump(b) => {
                let c = b.center_vec()?;
                if c.dim() != domain.dim() {
                    return Err(HeatError::Config("bump center dimension mismatch".into()));
                }
                if !(b.width > 0.0) || !b.amplitude.is_finite() {
                    return Err(HeatError::Config("bump needs width > 0 and finite amplitude".into()));
                }
                (c, Some(b.support_box()?))
            }
            SourceSpec::Manufactured => {
                if matches!(domain, Domain::Disk { .. }) {
                    return Err(HeatError::Config(
                        "manufactured source is defined on intervals and rectangles".into(),
                    ));
                }
                (SpaceVec::zero(domain.dim()), None)
            }
        };
        Ok(Self {
            spec,
            domain,
            center,
            support,
        })
    }

    pub fn spec(&self) -> &SourceSpec {
        &self.spec
    }

    /// Checks that a bump's nominal support lies strictly inside the domain.
    pub fn validate_support(&self) -> Result<()> {
        let Some(b) = self.support else {
            return Ok(());
        };
        let corners: Vec<SpaceVec> = if b.dim == 1 {
            vec![SpaceVec::d1(b.lo[0]), SpaceVec::d1(b.hi[0])]
        } else {
            vec![
                SpaceVec::d2(b.lo[0], b.lo[1]),
                SpaceVec::d2(b.hi[0], b.lo[1]),
                SpaceVec::d2(b.lo[0], b.hi[1]),
                SpaceVec::d2(b.hi[0], b.hi[1]),
            ]
        };
        for c in &corners {
            if !self.domain.is_interior(c)? {
                return Err(HeatError::Config(format!(
                    "source support {b:?} is not strictly inside the domain"
                )));
            }
        }
        Ok(())
    }

    /// The manufactured exact solution `t * prod sin(...)`.
    pub fn manufactured_solution(&self, x: &SpaceVec, t: f64) -> f64 {
        t * self.sine_product(x)
    }

    fn sine_product(&self, x: &SpaceVec) -> f64 {
        let b = self.domain.bounding_box();
        (0..b.dim as usize)
            .map(|d| (PI * (x.as_slice()[d] - b.lo[d]) / b.extent(d)).sin())
            .product()
    }

    fn manufactured_rate(&self) -> f64 {
        let b = self.domain.bounding_box();
        (0..b.dim as usize)
            .map(|d| (PI / b.extent(d)).powi(2))
            .sum()
    }
}

impl SourceField for Source {
    fn value(&self, x: &SpaceVec, t: f64) -> f64 {
        match &self.spec {
            SourceSpec::Zero => 0.0,
            SourceSpec::GaussianBump(b) => {
                let r2 = (*x - self.center).norm_sq();
                b.amplitude * (-r2 / (b.width * b.width)).exp() * b.time_profile.value(t)
            }
            SourceSpec::Manufactured => {
                self.sine_product(x) * (1.0 + self.manufactured_rate() * t)
            }
        }
    }

    fn support(&self) -> Option<Aabb> {
        self.support
    }

    fn is_zero(&self) -> bool {
        matches!(self.spec, SourceSpec::Zero)
    }
}

/// `x^3 (10 - 15 x + 6 x^2)`: a C2 ramp from 0 to 1 on `[0, 1]`.
pub fn smooth_ramp(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    x * x * x * (10.0 + x * (-15.0 + 6.0 * x))
}

/// Derivative of [`smooth_ramp`].
pub fn smooth_ramp_derivative(x: f64) -> f64 {
    if !(0.0..=1.0).contains(&x) {
        return 0.0;
    }
    30.0 * x * x * (1.0 - x) * (1.0 - x)
}

/// Boundary data `phi(x, t)` families. Each vanishes at `t = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BoundaryDataSpec {
    Zero,
    /// Spatially uniform `amplitude * ramp(t / rise_time)`.
    Ramp { amplitude: f64, rise_time: f64 },
    /// Named analytic expressions, see [`BoundaryDataSpec::value`].
    Analytic { id: AnalyticData },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnalyticData {
    /// `sin(pi t)^2 (1 + x_1 / 2)`.
    TiltedPulse,
    /// `t (1 + x_1 x_2)`.
    BilinearGrowth,
}

impl BoundaryDataSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            BoundaryDataSpec::Ramp {
                amplitude,
                rise_time,
            } if !(rise_time > 0.0) || !amplitude.is_finite() => Err(HeatError::Config(
                "ramp boundary data needs rise_time > 0 and finite amplitude".into(),
            )),
            _ => Ok(()),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, BoundaryDataSpec::Zero)
    }

    pub fn value(&self, x: &SpaceVec, t: f64) -> f64 {
        match *self {
            BoundaryDataSpec::Zero => 0.0,
            BoundaryDataSpec::Ramp {
                amplitude,
                rise_time,
            } => amplitude * smooth_ramp(t / rise_time),
            BoundaryDataSpec::Analytic { id } => match id {
                AnalyticData::TiltedPulse => (PI * t).sin().powi(2) * (1.0 + 0.5 * x.x()),
                AnalyticData::BilinearGrowth => t * (1.0 + x.x() * x.y()),
            },
        }
    }

    /// Times where `phi` loses smoothness (the ramp's end).
    pub fn kinks(&self) -> Vec<f64> {
        match *self {
            BoundaryDataSpec::Ramp { rise_time, .. } => vec![rise_time],
            _ => Vec::new(),
        }
    }

    /// `d phi / dt`.
    pub fn time_derivative(&self, x: &SpaceVec, t: f64) -> f64 {
        match *self {
            BoundaryDataSpec::Zero => 0.0,
            BoundaryDataSpec::Ramp {
                amplitude,
                rise_time,
            } => amplitude * smooth_ramp_derivative(t / rise_time) / rise_time,
            BoundaryDataSpec::Analytic { id } => match id {
                AnalyticData::TiltedPulse => PI * (2.0 * PI * t).sin() * (1.0 + 0.5 * x.x()),
                AnalyticData::BilinearGrowth => 1.0 + x.x() * x.y(),
            },
        }
    }
}
