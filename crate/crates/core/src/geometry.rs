//! Reference domains: interval, rectangle and disk.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{HeatError, Result};
use crate::kernel::SpaceVec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Domain {
    Interval { a: f64, b: f64 },
    Rectangle { ax: f64, bx: f64, ay: f64, by: f64 },
    Disk { center: [f64; 2], radius: f64 },
}

/// Axis-aligned box used for source supports and integration windows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aabb {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
    pub dim: u32,
}

impl Aabb {
    pub fn interval(a: f64, b: f64) -> Self {
        Self {
            lo: [a, 0.0],
            hi: [b, 0.0],
            dim: 1,
        }
    }

    pub fn rect(ax: f64, bx: f64, ay: f64, by: f64) -> Self {
        Self {
            lo: [ax, ay],
            hi: [bx, by],
            dim: 2,
        }
    }

    pub fn intersect(&self, other: &Aabb) -> Option<Aabb> {
        let mut out = *self;
        for d in 0..self.dim as usize {
            out.lo[d] = self.lo[d].max(other.lo[d]);
            out.hi[d] = self.hi[d].min(other.hi[d]);
            if out.lo[d] >= out.hi[d] {
                return None;
            }
        }
        Some(out)
    }

    pub fn contains(&self, p: &SpaceVec) -> bool {
        (0..self.dim as usize).all(|d| {
            let c = p.as_slice()[d];
            c >= self.lo[d] && c <= self.hi[d]
        })
    }

    pub fn extent(&self, axis: usize) -> f64 {
        self.hi[axis] - self.lo[axis]
    }
}

impl Domain {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Domain::Interval { a, b } => a.is_finite() && b.is_finite() && a < b,
            Domain::Rectangle { ax, bx, ay, by } => {
                [ax, bx, ay, by].iter().all(|v| v.is_finite()) && ax < bx && ay < by
            }
            Domain::Disk { center, radius } => {
                center.iter().all(|v| v.is_finite()) && radius.is_finite() && radius > 0.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(HeatError::Config(format!("degenerate domain {self:?}")))
        }
    }

    pub fn dim(&self) -> u32 {
        match self {
            Domain::Interval { .. } => 1,
            _ => 2,
        }
    }

    pub fn bounding_box(&self) -> Aabb {
        match *self {
            Domain::Interval { a, b } => Aabb::interval(a, b),
            Domain::Rectangle { ax, bx, ay, by } => Aabb::rect(ax, bx, ay, by),
            Domain::Disk { center, radius } => Aabb::rect(
                center[0] - radius,
                center[0] + radius,
                center[1] - radius,
                center[1] + radius,
            ),
        }
    }

    /// Volume (length, area) of the domain.
    pub fn measure(&self) -> f64 {
        match *self {
            Domain::Interval { a, b } => b - a,
            Domain::Rectangle { ax, bx, ay, by } => (bx - ax) * (by - ay),
            Domain::Disk { radius, .. } => PI * radius * radius,
        }
    }

    /// Boundary measure; the n = 1 boundary is two points of unit weight.
    pub fn boundary_measure(&self) -> f64 {
        match *self {
            Domain::Interval { .. } => 2.0,
            Domain::Rectangle { ax, bx, ay, by } => 2.0 * ((bx - ax) + (by - ay)),
            Domain::Disk { radius, .. } => 2.0 * PI * radius,
        }
    }

    /// Largest distance between two points of the closure.
    pub fn diameter(&self) -> f64 {
        match *self {
            Domain::Interval { a, b } => b - a,
            Domain::Rectangle { ax, bx, ay, by } => (bx - ax).hypot(by - ay),
            Domain::Disk { radius, .. } => 2.0 * radius,
        }
    }

    fn check_point(&self, p: &SpaceVec) -> Result<()> {
        if p.dim() != self.dim() {
            return Err(HeatError::Config(format!(
                "point of dimension {} used with a {}-d domain",
                p.dim(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// Closed-set membership.
    pub fn contains(&self, p: &SpaceVec) -> Result<bool> {
        self.check_point(p)?;
        Ok(match *self {
            Domain::Interval { a, b } => p.x() >= a && p.x() <= b,
            Domain::Rectangle { ax, bx, ay, by } => {
                p.x() >= ax && p.x() <= bx && p.y() >= ay && p.y() <= by
            }
            Domain::Disk { center, radius } => {
                (p.x() - center[0]).hypot(p.y() - center[1]) <= radius
            }
        })
    }

    /// Unsigned Euclidean distance from `p` to the boundary.
    pub fn distance_to_boundary(&self, p: &SpaceVec) -> Result<f64> {
        self.check_point(p)?;
        Ok(match *self {
            Domain::Interval { a, b } => {
                let x = p.x();
                if x < a {
                    a - x
                } else if x > b {
                    x - b
                } else {
                    (x - a).min(b - x)
                }
            }
            Domain::Rectangle { ax, bx, ay, by } => {
                let (x, y) = (p.x(), p.y());
                let inside = x >= ax && x <= bx && y >= ay && y <= by;
                if inside {
                    (x - ax).min(bx - x).min(y - ay).min(by - y)
                } else {
                    let dx = (ax - x).max(0.0).max(x - bx);
                    let dy = (ay - y).max(0.0).max(y - by);
                    dx.hypot(dy)
                }
            }
            Domain::Disk { center, radius } => {
                ((p.x() - center[0]).hypot(p.y() - center[1]) - radius).abs()
            }
        })
    }

    /// Strict interior test with a relative slack for round-off.
    pub fn is_interior(&self, p: &SpaceVec) -> Result<bool> {
        let slack = 1e-12 * self.diameter();
        Ok(self.contains(p)? && self.distance_to_boundary(p)? > slack)
    }

    /// Whether `p` lies on the boundary up to a relative slack.
    pub fn on_boundary(&self, p: &SpaceVec) -> Result<bool> {
        let slack = 1e-10 * self.diameter();
        Ok(self.distance_to_boundary(p)? <= slack)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predicates() {
        let i = Domain::Interval { a: 0.0, b: 1.0 };
        assert!(i.contains(&SpaceVec::d1(0.5)).unwrap());
        assert_eq!(i.distance_to_boundary(&SpaceVec::d1(0.5)).unwrap(), 0.5);
        let d = Domain::Disk {
            center: [0.0, 0.0],
            radius: 1.0,
        };
        assert!(!d.contains(&SpaceVec::d2(2.0, 0.0)).unwrap());
        assert_eq!(d.distance_to_boundary(&SpaceVec::d2(2.0, 0.0)).unwrap(), 1.0);
        let r = Domain::Rectangle {
            ax: 0.0,
            bx: 1.0,
            ay: 0.0,
            by: 1.0,
        };
        assert!(r.contains(&SpaceVec::d2(0.25, 0.5)).unwrap());
        assert_eq!(r.distance_to_boundary(&SpaceVec::d2(0.25, 0.5)).unwrap(), 0.25);
        assert_eq!(r.distance_to_boundary(&SpaceVec::d2(2.0, 2.0)).unwrap(), 2f64.sqrt());
    }

    #[test]
    fn dimension_mismatch_is_config_error() {
        let i = Domain::Interval { a: 0.0, b: 1.0 };
        assert!(matches!(
            i.contains(&SpaceVec::d2(0.1, 0.1)),
            Err(HeatError::Config(_))
        ));
    }

    #[test]
    fn degenerate_domains_rejected() {
        assert!(Domain::Interval { a: 1.0, b: 1.0 }.validate().is_err());
        assert!(Domain::Disk {
            center: [0.0, 0.0],
            radius: 0.0
        }
        .validate()
        .is_err());
        assert!(Domain::Rectangle {
            ax: 0.0,
            bx: 1.0,
            ay: 2.0,
            by: 1.0
        }
        .validate()
        .is_err());
    }
}
