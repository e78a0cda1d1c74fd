//! Scenario files: one JSON document describing a verification or solve run.
//!
//! Parsing is strict (unknown fields are rejected) and every scenario is
//! validated before use: order caps, dimension agreement, a bump source
//! strictly inside the domain, and boundary data vanishing at `t = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{HeatError, Result};
use crate::geometry::Domain;
use crate::greens::GreenEvalParams;
use crate::kernel::{KernelOrder, SpaceVec};
use crate::oracle::CascadeRules;
use crate::quadrature::{make_boundary_rule, TimeGrading};
use crate::source::{BoundaryDataSpec, Source, SourceSpec};

pub const SCHEMA_VERSION: u32 = 1;

/// Discretization parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Resolution {
    /// Gauss-Legendre nodes per axis of the volume rule.
    pub volume: usize,
    /// Panels per side (rectangle), nodes (disk); ignored on intervals.
    pub boundary: usize,
    /// Gauss-Legendre nodes per time panel.
    pub time_nodes: usize,
    /// Number of geometrically graded time panels.
    pub time_levels: usize,
    /// Crank-Nicolson cells per axis and time steps.
    pub oracle_grid: usize,
    pub oracle_steps: usize,
    /// Fourier cascade grid points per axis and time steps.
    pub cascade_grid: usize,
    pub cascade_steps: usize,
    /// Finite-difference step (space and time) for PDE residuals.
    pub fd_step: f64,
}

impl Resolution {
    pub fn grading(&self) -> TimeGrading {
        TimeGrading::graded(self.time_nodes, self.time_levels)
    }

    /// Level `level` of the refinement ladder: time nodes per panel and
    /// boundary panels double with each level.
    pub fn refined(&self, level: u32) -> Self {
        let f = 1usize << level;
        Self {
            time_nodes: self.time_nodes * f,
            boundary: self.boundary * f,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Normalized `I^k` residual on the boundary.
    pub boundary_residual: f64,
    /// Normalized interior identity residual.
    pub interior_residual: f64,
    /// `|diamond u - f| / max|f|` at interior probes.
    pub pde_residual: f64,
    /// Required initial slope as a fraction of `m`.
    pub initial_slope_fraction: f64,
    /// Oracle comparisons (cascade, Crank-Nicolson).
    pub oracle: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    #[serde(default)]
    pub report: Option<String>,
    #[serde(default)]
    pub values: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema_version: u32,
    pub name: String,
    pub order: KernelOrder,
    pub domain: Domain,
    pub horizon: f64,
    pub source: SourceSpec,
    pub boundary_data: BoundaryDataSpec,
    pub resolution: Resolution,
    pub tolerances: Tolerances,
    /// Two-dimensional boundary verification must be enabled explicitly.
    #[serde(default)]
    pub enable_2d: bool,
    #[serde(default)]
    pub green: GreenEvalParams,
    /// Seed for pseudo-random probe points.
    pub seed: u64,
    #[serde(default)]
    pub output: OutputPaths,
}

const BUNDLED: [(&str, &str); 6] = [
    ("m1_interval_bump", include_str!("../scenarios/m1_interval_bump.json")),
    ("m2_interval_bump", include_str!("../scenarios/m2_interval_bump.json")),
    ("m3_interval_bump", include_str!("../scenarios/m3_interval_bump.json")),
    ("m1_interval_ramp_phi", include_str!("../scenarios/m1_interval_ramp_phi.json")),
    ("m1_rect_bump", include_str!("../scenarios/m1_rect_bump.json")),
    ("m2_rect_bump", include_str!("../scenarios/m2_rect_bump.json")),
];

/// Names of the scenarios shipped with the crate.
pub fn bundled_names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(n, _)| *n)
}

impl Scenario {
    /// Parses and validates a scenario document.
    pub fn from_json(text: &str) -> Result<Self> {
        let sc: Scenario = serde_json::from_str(text)
            .map_err(|e| HeatError::Config(format!("scenario parse error: {e}")))?;
        sc.validate()?;
        Ok(sc)
    }

    pub fn bundled(name: &str) -> Result<Self> {
        let (_, text) = BUNDLED
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| HeatError::Config(format!("no bundled scenario named {name:?}")))?;
        Self::from_json(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(HeatError::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        self.domain.validate()?;
        if self.order.n() != self.domain.dim() {
            return Err(HeatError::Config(format!(
                "order dimension n = {} does not match the domain",
                self.order.n()
            )));
        }
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return Err(HeatError::Config(format!("horizon must be > 0, got {}", self.horizon)));
        }
        self.source()?.validate_support()?;
        self.boundary_data.validate()?;
        self.green.validate()?;
        let r = &self.resolution;
        if r.volume < 4 || r.time_nodes < 2 || r.time_levels < 1 || r.boundary < 1 {
            return Err(HeatError::Config(format!("resolution too coarse: {r:?}")));
        }
        if r.oracle_grid < 16 || r.oracle_steps < 16 || r.cascade_grid < 8 || r.cascade_steps < 1 {
            return Err(HeatError::Config(format!("oracle resolution too coarse: {r:?}")));
        }
        if !(r.fd_step > 0.0) || r.fd_step * self.order.m() as f64 >= 0.125 * self.horizon {
            return Err(HeatError::Config(format!("fd_step {} out of range", r.fd_step)));
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("boundary_residual", t.boundary_residual),
            ("interior_residual", t.interior_residual),
            ("pde_residual", t.pde_residual),
            ("initial_slope_fraction", t.initial_slope_fraction),
            ("oracle", t.oracle),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(HeatError::Config(format!("tolerance {name} must be > 0, got {v}")));
            }
        }
        if !self.boundary_data.is_zero() {
            let brule = make_boundary_rule(&self.domain, r.boundary)?;
            for node in &brule.nodes {
                let v = self.boundary_data.value(&node.point, 0.0);
                if v != 0.0 {
                    return Err(HeatError::Config(format!(
                        "boundary data must vanish at t = 0, got {v} at {:?}",
                        node.point
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> Result<Source> {
        Source::new(self.source.clone(), self.domain)
    }

    /// Copy with the resolution moved `level` steps up the refinement ladder.
    pub fn refined(&self, level: u32) -> Self {
        Self {
            resolution: self.resolution.refined(level),
            ..self.clone()
        }
    }

    /// `KernelOrder` of the scenario.
    pub fn kernel_order(&self) -> KernelOrder {
        self.order
    }

    /// Padding of the cascade box, `10 sqrt(T)`.
    pub fn cascade_padding(&self) -> f64 {
        10.0 * self.horizon.sqrt()
    }

    pub fn cascade_rules(&self) -> CascadeRules {
        CascadeRules {
            grid: self.resolution.cascade_grid,
            steps: self.resolution.cascade_steps,
        }
    }
}

/// Five interior probe points: the centre and four points halfway to the
/// boundary (intervals: evenly spread).
pub fn interior_probes(domain: &Domain) -> Vec<SpaceVec> {
    match *domain {
        Domain::Interval { a, b } => [0.5, 0.3, 0.7, 0.15, 0.85]
            .iter()
            .map(|u| SpaceVec::d1(a + u * (b - a)))
            .collect(),
        Domain::Rectangle { ax, bx, ay, by } => [(0.5, 0.5), (0.3, 0.3), (0.7, 0.3), (0.3, 0.7), (0.7, 0.7)]
            .iter()
            .map(|(u, v)| SpaceVec::d2(ax + u * (bx - ax), ay + v * (by - ay)))
            .collect(),
        Domain::Disk { center, radius } => {
            let mut pts = vec![SpaceVec::d2(center[0], center[1])];
            for k in 0..4 {
                let th = std::f64::consts::FRAC_PI_2 * k as f64 + 0.25;
                pts.push(SpaceVec::d2(
                    center[0] + 0.5 * radius * th.cos(),
                    center[1] + 0.5 * radius * th.sin(),
                ));
            }
            pts
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_scenarios_parse_and_round_trip() {
        for name in bundled_names() {
            let sc = Scenario::bundled(name).unwrap();
            assert_eq!(sc.name, name);
            let back = Scenario::from_json(&sc.to_json()).unwrap();
            assert_eq!(back, sc);
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let sc = Scenario::bundled("m1_interval_bump").unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&sc.to_json()).unwrap();
        v["tolerances"]["boundary_residul"] = serde_json::json!(1e-3);
        let err = Scenario::from_json(&v.to_string()).unwrap_err();
        assert!(matches!(err, HeatError::Config(_)));
    }

    #[test]
    fn validation_rejects_bad_scenarios() {
        let base = Scenario::bundled("m1_interval_bump").unwrap();
        let mut touching = base.clone();
        if let SourceSpec::GaussianBump(b) = &mut touching.source {
            b.center = vec![0.8];
        }
        assert!(touching.validate().is_err());
        let mut late = base.clone();
        late.boundary_data = BoundaryDataSpec::Analytic {
            id: crate::source::AnalyticData::BilinearGrowth,
        };
        assert!(late.validate().is_ok());
        let mut text: serde_json::Value = serde_json::from_str(&base.to_json()).unwrap();
        text["order"]["m"] = serde_json::json!(25);
        assert!(Scenario::from_json(&text.to_string()).is_err());
        let mut neg = base;
        neg.horizon = -1.0;
        assert!(neg.validate().is_err());
    }
}
