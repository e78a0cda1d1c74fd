//! Quadrature rules: volume rules over domains, boundary rules with outward
//! normals, and time rules in the variable `sigma = sqrt(t - tau)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{HeatError, Result};
use crate::geometry::{Aabb, Domain};
use crate::kernel::SpaceVec;

/// Nodes per Gauss-Legendre panel on rectangle sides.
pub const SIDE_PANEL_NODES: usize = 8;

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on the three-term Legendre recurrence; nodes ascend.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let half = n.div_ceil(2);
        for i in 0..half {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped affinely onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeNode {
    pub point: SpaceVec,
    pub weight: f64,
}

/// Tensor (or polar) rule over a region of the domain.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeRule {
    pub nodes: Vec<VolumeNode>,
    /// Bounding box of the integration region.
    pub region: Aabb,
    /// Largest gap between consecutive node coordinates along any axis.
    pub spacing: f64,
}

impl VolumeRule {
    pub fn total_weight(&self) -> f64 {
        self.nodes.iter().map(|n| n.weight).sum()
    }

    pub fn integrate(&self, f: impl Fn(&SpaceVec) -> f64) -> f64 {
        self.nodes.iter().map(|n| n.weight * f(&n.point)).sum()
    }
}

fn max_gap(lo: f64, hi: f64, coords: impl Iterator<Item = f64>) -> f64 {
    let mut prev = lo;
    let mut gap: f64 = 0.0;
    for c in coords {
        gap = gap.max(c - prev);
        prev = c;
    }
    gap.max(hi - prev)
}

/// Tensor Gauss-Legendre on Interval/Rectangle; polar Gauss-Legendre in the
/// radius times trapezoidal in angle on the Disk.
pub fn make_volume_rule(domain: &Domain, resolution: usize) -> Result<VolumeRule> {
    domain.validate()?;
    if resolution == 0 {
        return Err(HeatError::Config("volume resolution must be >= 1".into()));
    }
    match *domain {
        Domain::Disk { center, radius } => {
            let gl = GaussLegendre::new(resolution);
            let n_theta = 2 * resolution.max(4);
            let dtheta = 2.0 * PI / n_theta as f64;
            let mut nodes = Vec::with_capacity(resolution * n_theta);
            for (r, wr) in gl.mapped(0.0, radius) {
                for j in 0..n_theta {
                    let th = (j as f64 + 0.5) * dtheta;
                    nodes.push(VolumeNode {
                        point: SpaceVec::d2(center[0] + r * th.cos(), center[1] + r * th.sin()),
                        weight: wr * r * dtheta,
                    });
                }
            }
            let radial_gap = max_gap(0.0, radius, gl.mapped(0.0, radius).map(|(r, _)| r));
            Ok(VolumeRule {
                nodes,
                region: domain.bounding_box(),
                spacing: radial_gap.max(radius * dtheta),
            })
        }
        _ => Ok(tensor_rule(&domain.bounding_box(), resolution)),
    }
}

/// Volume rule restricted to `support` (clipped to the domain). Used for
/// sources that vanish outside a known box.
pub fn make_volume_rule_on(
    domain: &Domain,
    support: &Aabb,
    resolution: usize,
) -> Result<VolumeRule> {
    domain.validate()?;
    if resolution == 0 {
        return Err(HeatError::Config("volume resolution must be >= 1".into()));
    }
    if support.dim != domain.dim() {
        return Err(HeatError::Config("support box dimension mismatch".into()));
    }
    let clipped = support
        .intersect(&domain.bounding_box())
        .ok_or_else(|| HeatError::Config("source support misses the domain".into()))?;
    if let Domain::Disk { .. } = domain {
        let corners = [
            SpaceVec::d2(clipped.lo[0], clipped.lo[1]),
            SpaceVec::d2(clipped.hi[0], clipped.lo[1]),
            SpaceVec::d2(clipped.lo[0], clipped.hi[1]),
            SpaceVec::d2(clipped.hi[0], clipped.hi[1]),
        ];
        for c in &corners {
            if !domain.contains(c)? {
                return make_volume_rule(domain, resolution);
            }
        }
    }
    Ok(tensor_rule(&clipped, resolution))
}

fn tensor_rule(region: &Aabb, resolution: usize) -> VolumeRule {
    let gl = GaussLegendre::new(resolution);
    let xs: Vec<(f64, f64)> = gl.mapped(region.lo[0], region.hi[0]).collect();
    let mut spacing = max_gap(region.lo[0], region.hi[0], xs.iter().map(|p| p.0));
    let nodes = if region.dim == 1 {
        xs.iter()
            .map(|&(x, w)| VolumeNode {
                point: SpaceVec::d1(x),
                weight: w,
            })
            .collect()
    } else {
        let ys: Vec<(f64, f64)> = gl.mapped(region.lo[1], region.hi[1]).collect();
        spacing = spacing.max(max_gap(region.lo[1], region.hi[1], ys.iter().map(|p| p.0)));
        xs.iter()
            .flat_map(|&(x, wx)| {
                ys.iter().map(move |&(y, wy)| VolumeNode {
                    point: SpaceVec::d2(x, y),
                    weight: wx * wy,
                })
            })
            .collect()
    };
    VolumeRule {
        nodes,
        region: *region,
        spacing,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryNode {
    pub point: SpaceVec,
    /// Outward unit normal.
    pub normal: SpaceVec,
    pub weight: f64,
}

/// A smooth piece of the boundary together with the interpolation data
/// needed to evaluate node-sampled densities between nodes.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryPatch {
    /// Endpoint of an interval (n = 1).
    Point { node: usize },
    /// Straight panel from `start` to `end`; its nodes are Gauss-Legendre
    /// points with local coordinates `local` in `[-1, 1]`.
    Segment {
        start: SpaceVec,
        end: SpaceVec,
        normal: SpaceVec,
        first: usize,
        local: Vec<f64>,
        bary: Vec<f64>,
    },
    /// Whole circle with `count` equispaced nodes at angles `2 pi j / count`.
    Circle {
        center: SpaceVec,
        radius: f64,
        first: usize,
        count: usize,
    },
}

impl BoundaryPatch {
    pub fn node_range(&self) -> std::ops::Range<usize> {
        match self {
            BoundaryPatch::Point { node } => *node..*node + 1,
            BoundaryPatch::Segment { first, local, .. } => *first..*first + local.len(),
            BoundaryPatch::Circle { first, count, .. } => *first..*first + *count,
        }
    }

    /// Interpolates node values (indexed by global node number) at local
    /// parameter `u` (`[-1, 1]` for segments, angle for circles).
    pub fn interpolate(&self, values: &[f64], u: f64) -> f64 {
        match self {
            BoundaryPatch::Point { node } => values[*node],
            BoundaryPatch::Segment {
                first, local, bary, ..
            } => barycentric(local, bary, &values[*first..*first + local.len()], u),
            BoundaryPatch::Circle { first, count, .. } => {
                trig_interpolate(&values[*first..*first + *count], u)
            }
        }
    }
}

/// Barycentric weights for Lagrange interpolation through `xs`.
pub fn barycentric_weights(xs: &[f64]) -> Vec<f64> {
    (0..xs.len())
        .map(|j| {
            let prod: f64 = (0..xs.len())
                .filter(|&k| k != j)
                .map(|k| xs[j] - xs[k])
                .product();
            1.0 / prod
        })
        .collect()
}

fn barycentric(xs: &[f64], w: &[f64], f: &[f64], u: f64) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for ((x, wj), fj) in xs.iter().zip(w).zip(f) {
        let d = u - x;
        if d == 0.0 {
            return *fj;
        }
        let c = wj / d;
        num += c * fj;
        den += c;
    }
    num / den
}

/// Trigonometric interpolant through equispaced samples on `[0, 2 pi)`.
fn trig_interpolate(f: &[f64], theta: f64) -> f64 {
    let n = f.len();
    let h = 2.0 * PI / n as f64;
    let mut acc = 0.0;
    for (j, fj) in f.iter().enumerate() {
        let x = theta - j as f64 * h;
        let half = 0.5 * x;
        let sh = half.sin();
        if sh.abs() < 1e-14 {
            // x is a multiple of 2 pi: the cardinal function equals one.
            return *fj;
        }
        let num = (0.5 * n as f64 * x).sin();
        let card = if n.is_multiple_of(2) {
            num * half.cos() / (n as f64 * sh)
        } else {
            num / (n as f64 * sh)
        };
        acc += fj * card;
    }
    acc
}

/// Boundary nodes with outward normals, and the patch structure.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryRule {
    pub nodes: Vec<BoundaryNode>,
    pub patches: Vec<BoundaryPatch>,
}

impl BoundaryRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.nodes.iter().map(|n| n.weight).sum()
    }

    /// Index of the node located at `p`, if any.
    pub fn find_node(&self, p: &SpaceVec) -> Option<usize> {
        let scale = self
            .nodes
            .iter()
            .map(|n| n.point.norm())
            .fold(1.0, f64::max);
        self.nodes
            .iter()
            .position(|n| (n.point - *p).norm() <= 1e-12 * scale)
    }
}

/// Interval: both endpoints with unit weight. Rectangle: `resolution`
/// Gauss-Legendre panels of [`SIDE_PANEL_NODES`] nodes per side (corners are
/// never nodes). Disk: `resolution` equispaced trapezoidal nodes.
pub fn make_boundary_rule(domain: &Domain, resolution: usize) -> Result<BoundaryRule> {
    domain.validate()?;
    if resolution == 0 {
        return Err(HeatError::Config("boundary resolution must be >= 1".into()));
    }
    match *domain {
        Domain::Interval { a, b } => Ok(BoundaryRule {
            nodes: vec![
                BoundaryNode {
                    point: SpaceVec::d1(a),
                    normal: SpaceVec::d1(-1.0),
                    weight: 1.0,
                },
                BoundaryNode {
                    point: SpaceVec::d1(b),
                    normal: SpaceVec::d1(1.0),
                    weight: 1.0,
                },
            ],
            patches: vec![
                BoundaryPatch::Point { node: 0 },
                BoundaryPatch::Point { node: 1 },
            ],
        }),
        Domain::Rectangle { ax, bx, ay, by } => {
            let gl = GaussLegendre::new(SIDE_PANEL_NODES);
            let bary = barycentric_weights(&gl.nodes);
            // Counter-clockwise sides with outward normals.
            let sides = [
                (SpaceVec::d2(ax, ay), SpaceVec::d2(bx, ay), SpaceVec::d2(0.0, -1.0)),
                (SpaceVec::d2(bx, ay), SpaceVec::d2(bx, by), SpaceVec::d2(1.0, 0.0)),
                (SpaceVec::d2(bx, by), SpaceVec::d2(ax, by), SpaceVec::d2(0.0, 1.0)),
                (SpaceVec::d2(ax, by), SpaceVec::d2(ax, ay), SpaceVec::d2(-1.0, 0.0)),
            ];
            let mut nodes = Vec::new();
            let mut patches = Vec::new();
            for (p0, p1, normal) in sides {
                for k in 0..resolution {
                    let a = p0 + (k as f64 / resolution as f64) * (p1 - p0);
                    let b = p0 + ((k + 1) as f64 / resolution as f64) * (p1 - p0);
                    let jac = 0.5 * (b - a).norm();
                    let first = nodes.len();
                    for (u, w) in gl.nodes.iter().zip(&gl.weights) {
                        nodes.push(BoundaryNode {
                            point: a + (0.5 * (u + 1.0)) * (b - a),
                            normal,
                            weight: w * jac,
                        });
                    }
                    patches.push(BoundaryPatch::Segment {
                        start: a,
                        end: b,
                        normal,
                        first,
                        local: gl.nodes.clone(),
                        bary: bary.clone(),
                    });
                }
            }
            Ok(BoundaryRule { nodes, patches })
        }
        Domain::Disk { center, radius } => {
            let count = resolution.max(3);
            let h = 2.0 * PI / count as f64;
            let nodes = (0..count)
                .map(|j| {
                    let th = j as f64 * h;
                    let normal = SpaceVec::d2(th.cos(), th.sin());
                    BoundaryNode {
                        point: SpaceVec::d2(center[0], center[1]) + radius * normal,
                        normal,
                        weight: radius * h,
                    }
                })
                .collect();
            Ok(BoundaryRule {
                nodes,
                patches: vec![BoundaryPatch::Circle {
                    center: SpaceVec::d2(center[0], center[1]),
                    radius,
                    first: 0,
                    count,
                }],
            })
        }
    }
}

/// Geometric grading of the `sigma` panels toward `sigma = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrading {
    pub nodes_per_panel: usize,
    /// Number of panels; 1 means a single Gauss-Legendre panel.
    pub levels: usize,
    /// Ratio between consecutive panel breakpoints.
    pub ratio: f64,
}

impl TimeGrading {
    pub fn single(nodes: usize) -> Self {
        Self {
            nodes_per_panel: nodes,
            levels: 1,
            ratio: 0.25,
        }
    }

    pub fn graded(nodes_per_panel: usize, levels: usize) -> Self {
        Self {
            nodes_per_panel,
            levels,
            ratio: 0.25,
        }
    }

    pub fn total_nodes(&self) -> usize {
        self.nodes_per_panel * self.levels
    }

    pub fn refined(&self, factor: usize) -> Self {
        Self {
            nodes_per_panel: self.nodes_per_panel * factor,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeNode {
    pub tau: f64,
    /// `t - tau`, stored exactly as `sigma^2`.
    pub lag: f64,
    pub weight: f64,
}

/// Time rule on `(0, t)` from Gauss-Legendre nodes in `sigma = sqrt(t - tau)`
/// (`d tau = 2 sigma d sigma`). Nodes ascend in `tau`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeRule {
    pub target: f64,
    pub nodes: Vec<TimeNode>,
    pub grading: TimeGrading,
}

impl TimeRule {
    pub fn new(t: f64, grading: TimeGrading) -> Result<Self> {
        let gl = GaussLegendre::new(grading.nodes_per_panel.max(1));
        Self::with_reference(t, grading, &gl)
    }

    /// Builds the rule from a precomputed reference rule of
    /// `grading.nodes_per_panel` nodes.
    pub fn with_reference(t: f64, grading: TimeGrading, gl: &GaussLegendre) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(HeatError::Argument(format!("time rule needs t > 0, got {t}")));
        }
        if grading.nodes_per_panel < 1 || grading.levels < 1 {
            return Err(HeatError::Config("time rule needs nodes >= 1, levels >= 1".into()));
        }
        if !(grading.ratio > 0.0 && grading.ratio < 1.0) {
            return Err(HeatError::Config("time grading ratio must lie in (0, 1)".into()));
        }
        if gl.len() != grading.nodes_per_panel {
            return Err(HeatError::Config("reference rule size mismatch".into()));
        }
        let root = t.sqrt();
        let mut breaks = vec![0.0];
        for l in (0..grading.levels).rev() {
            breaks.push(root * grading.ratio.powi(l as i32));
        }
        let mut nodes = Vec::with_capacity(grading.total_nodes());
        for win in breaks.windows(2) {
            for (sigma, w) in gl.mapped(win[0], win[1]) {
                let lag = sigma * sigma;
                nodes.push(TimeNode {
                    tau: t - lag,
                    lag,
                    weight: 2.0 * sigma * w,
                });
            }
        }
        nodes.reverse();
        Ok(Self {
            target: t,
            nodes,
            grading,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.nodes.iter().map(|n| n.weight).sum()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().map(|n| n.weight * f(n.tau)).sum()
    }
}

/// Single-panel time rule with `nodes` Gauss-Legendre points in `sigma`.
pub fn make_time_rule(t: f64, nodes: usize) -> Result<TimeRule> {
    if nodes < 2 {
        return Err(HeatError::Config("time rule needs at least 2 nodes".into()));
    }
    TimeRule::new(t, TimeGrading::single(nodes))
}
