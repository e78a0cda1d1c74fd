//! Heat potentials: the volume potential of a source, its trace family
//! `diamond^k u`, normal derivatives on the boundary, and single/double layer
//! potentials of boundary densities.
//!
//! Spatial integrals fall back to a Gaussian-adapted window rule whenever the
//! kernel width `sqrt(s)` drops below the resolution of the volume rule, and
//! boundary integrals subdivide panels whose length exceeds `sqrt(s)`.
//! Summation order is fixed (ascending node index), so every evaluation is
//! bitwise reproducible.

use std::sync::OnceLock;

use crate::error::{HeatError, Result};
use crate::geometry::{Aabb, Domain};
use crate::kernel::{eval_kernel, factorial, KernelOrder, SpaceVec};
use crate::quadrature::{BoundaryPatch, BoundaryRule, GaussLegendre, TimeGrading, TimeRule, VolumeRule};
use crate::source::SourceField;

/// The volume rule is trusted when `sqrt(s) >= VOLUME_RESOLVED * spacing`.
const VOLUME_RESOLVED: f64 = 3.0;
/// Half-width of the integration window in units of `sqrt(s)`.
const WINDOW_HALF_WIDTH: f64 = 12.0;
/// Window panel length in units of `sqrt(s)`.
const WINDOW_PANEL: f64 = 3.0;
const WINDOW_NODES: usize = 10;
/// A boundary panel is resolved when its length is at most `sqrt(s)` times this.
const PANEL_RESOLVED: f64 = 1.0;
/// Leaves of the adaptive boundary subdivision.
const LEAF_RESOLVED: f64 = 2.0;
const LEAF_NODES: usize = 16;
const MAX_DEPTH: usize = 60;
/// Kernel contributions below `exp(-NEGLIGIBLE_EXPONENT)` are dropped.
const NEGLIGIBLE_EXPONENT: f64 = 80.0;

fn window_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(WINDOW_NODES))
}

fn leaf_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(LEAF_NODES))
}

/// Composite Gauss-Legendre nodes for `[lo, hi]` with panels no longer than
/// `panel`.
fn window_axis(lo: f64, hi: f64, panel: f64) -> Vec<(f64, f64)> {
    let panels = ((hi - lo) / panel).ceil().clamp(1.0, 64.0) as usize;
    let step = (hi - lo) / panels as f64;
    let gl = window_rule();
    (0..panels)
        .flat_map(|p| {
            let a = lo + p as f64 * step;
            gl.mapped(a, a + step).collect::<Vec<_>>()
        })
        .collect()
}

/// Integrates `g(xi)` against a kernel of width `sqrt(s)` centred at `x`
/// over the region of `vrule` (clipped to `domain`).
pub(crate) fn region_integral(
    domain: &Domain,
    vrule: &VolumeRule,
    x: &SpaceVec,
    s: f64,
    g: impl Fn(&SpaceVec) -> f64,
) -> f64 {
    let root = s.sqrt();
    if root >= VOLUME_RESOLVED * vrule.spacing {
        return vrule.nodes.iter().map(|n| n.weight * g(&n.point)).sum();
    }
    let half = WINDOW_HALF_WIDTH * root;
    let dim = vrule.region.dim as usize;
    let mut window = vrule.region;
    for d in 0..dim {
        let c = x.as_slice()[d];
        window.lo[d] = c - half;
        window.hi[d] = c + half;
    }
    let Some(clip) = window.intersect(&vrule.region) else {
        return 0.0;
    };
    let panel = WINDOW_PANEL * root;
    let check_disk = matches!(domain, Domain::Disk { .. });
    if dim == 1 {
        window_axis(clip.lo[0], clip.hi[0], panel)
            .into_iter()
            .map(|(xi, w)| w * g(&SpaceVec::d1(xi)))
            .sum()
    } else {
        let xs = window_axis(clip.lo[0], clip.hi[0], panel);
        let ys = window_axis(clip.lo[1], clip.hi[1], panel);
        let mut acc = 0.0;
        for &(xi, wx) in &xs {
            for &(yi, wy) in &ys {
                let p = SpaceVec::d2(xi, yi);
                if check_disk && !domain.contains(&p).unwrap_or(false) {
                    continue;
                }
                acc += wx * wy * g(&p);
            }
        }
        acc
    }
}

pub(crate) fn check_target_time(trule: &TimeRule, t: f64) -> Result<()> {
    if !(t > 0.0) {
        return Err(HeatError::Argument(format!("evaluation time must be > 0, got {t}")));
    }
    if (trule.target - t).abs() > 1e-12 * t.max(1.0) {
        return Err(HeatError::Argument(format!(
            "time rule targets t = {}, evaluation requested at t = {t}",
            trule.target
        )));
    }
    Ok(())
}

fn check_setup(order: KernelOrder, domain: &Domain, vrule: &VolumeRule, x: &SpaceVec) -> Result<()> {
    x.check_dim(&order)?;
    if domain.dim() != order.n() || vrule.region.dim != order.n() {
        return Err(HeatError::Config(format!(
            "kernel dimension {} does not match domain/rule dimension {}",
            order.n(),
            domain.dim()
        )));
    }
    Ok(())
}

/// Volume heat potential `u(x, t) = int_0^t int_Q eps_{m,n}(x - xi, t - tau) f(xi, tau)`.
///
/// For interior `x` at boundary distance `d`, time nodes with lag
/// `s < min((d/8)^2, 1e-6 t)` contribute `f(x, tau) s^(m-1) / (m-1)!`.
pub fn volume_potential(
    order: KernelOrder,
    f: &dyn SourceField,
    domain: &Domain,
    vrule: &VolumeRule,
    trule: &TimeRule,
    x: &SpaceVec,
    t: f64,
) -> Result<f64> {
    check_setup(order, domain, vrule, x)?;
    check_target_time(trule, t)?;
    if f.is_zero() {
        return Ok(0.0);
    }
    let patch_below = if domain.is_interior(x)? {
        let d = domain.distance_to_boundary(x)?;
        (d / 8.0).powi(2).min(1e-6 * t)
    } else {
        0.0
    };
    let mass = factorial(order.m() - 1);
    let mut total = 0.0;
    for node in &trule.nodes {
        let s = node.lag;
        let inner = if s < patch_below {
            f.value(x, node.tau) * s.powi(order.m() as i32 - 1) / mass
        } else {
            region_integral(domain, vrule, x, s, |xi| {
                eval_kernel(order, (*x - *xi).norm_sq(), s) * f.value(xi, node.tau)
            })
        };
        total += node.weight * inner;
    }
    Ok(total)
}

/// `diamond^k u(x, t)`, evaluated as the volume potential of order `m - k`.
#[allow(clippy::too_many_arguments)]
pub fn potential_trace(
    k: u32,
    order: KernelOrder,
    f: &dyn SourceField,
    domain: &Domain,
    vrule: &VolumeRule,
    trule: &TimeRule,
    x: &SpaceVec,
    t: f64,
) -> Result<f64> {
    let lower = order.lowered(k).ok_or_else(|| {
        HeatError::Argument(format!("trace index k = {k} outside 0..{}", order.m()))
    })?;
    volume_potential(lower, f, domain, vrule, trule, x, t)
}

/// Exterior normal derivative of `diamond^k u` at a boundary point, by
/// differentiating the order-`(m - k)` kernel under the integral sign.
#[allow(clippy::too_many_arguments)]
pub fn potential_trace_normal_derivative(
    k: u32,
    order: KernelOrder,
    f: &dyn SourceField,
    domain: &Domain,
    vrule: &VolumeRule,
    trule: &TimeRule,
    x_b: &SpaceVec,
    normal: &SpaceVec,
    t: f64,
) -> Result<f64> {
    let lower = order.lowered(k).ok_or_else(|| {
        HeatError::Argument(format!("trace index k = {k} outside 0..{}", order.m()))
    })?;
    check_setup(order, domain, vrule, x_b)?;
    check_target_time(trule, t)?;
    if !domain.on_boundary(x_b)? {
        return Err(HeatError::Argument(format!("{x_b:?} is not on the boundary")));
    }
    if f.is_zero() {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for node in &trule.nodes {
        let s = node.lag;
        let inner = region_integral(domain, vrule, x_b, s, |xi| {
            let r = *x_b - *xi;
            -r.dot(normal) / (2.0 * s) * eval_kernel(lower, r.norm_sq(), s) * f.value(xi, node.tau)
        });
        total += node.weight * inner;
    }
    Ok(total)
}

/// A source, domain and discretization bundled so potentials can be
/// evaluated at arbitrary `(x, t)`; the time rule is rebuilt per target time.
pub struct HeatPotential<'a> {
    pub order: KernelOrder,
    pub source: &'a dyn SourceField,
    pub domain: Domain,
    pub vrule: VolumeRule,
    pub grading: TimeGrading,
    reference: GaussLegendre,
}

impl<'a> HeatPotential<'a> {
    pub fn new(
        order: KernelOrder,
        source: &'a dyn SourceField,
        domain: Domain,
        vrule: VolumeRule,
        grading: TimeGrading,
    ) -> Self {
        Self {
            order,
            source,
            domain,
            vrule,
            grading,
            reference: GaussLegendre::new(grading.nodes_per_panel),
        }
    }

    pub fn time_rule(&self, t: f64) -> Result<TimeRule> {
        TimeRule::with_reference(t, self.grading, &self.reference)
    }

    pub fn value(&self, x: &SpaceVec, t: f64) -> Result<f64> {
        self.trace(0, x, t)
    }

    pub fn trace(&self, k: u32, x: &SpaceVec, t: f64) -> Result<f64> {
        let trule = self.time_rule(t)?;
        potential_trace(k, self.order, self.source, &self.domain, &self.vrule, &trule, x, t)
    }

    pub fn trace_normal_derivative(
        &self,
        k: u32,
        x_b: &SpaceVec,
        normal: &SpaceVec,
        t: f64,
    ) -> Result<f64> {
        let trule = self.time_rule(t)?;
        potential_trace_normal_derivative(
            k,
            self.order,
            self.source,
            &self.domain,
            &self.vrule,
            &trule,
            x_b,
            normal,
            t,
        )
    }
}

/// Values of a boundary function on the (boundary node) x (time node) grid,
/// stored time-major.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryDensity {
    n_nodes: usize,
    n_times: usize,
    values: Vec<f64>,
}

impl BoundaryDensity {
    pub fn zeros(n_nodes: usize, n_times: usize) -> Self {
        Self {
            n_nodes,
            n_times,
            values: vec![0.0; n_nodes * n_times],
        }
    }

    /// Samples `g(node, tau)` on the grid of `brule` x `trule`.
    pub fn sample(
        brule: &BoundaryRule,
        trule: &TimeRule,
        g: impl Fn(&SpaceVec, f64) -> f64,
    ) -> Self {
        let mut d = Self::zeros(brule.len(), trule.len());
        for (it, tn) in trule.nodes.iter().enumerate() {
            for (ib, bn) in brule.nodes.iter().enumerate() {
                d.set(ib, it, g(&bn.point, tn.tau));
            }
        }
        d
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_times(&self) -> usize {
        self.n_times
    }

    pub fn get(&self, node: usize, time: usize) -> f64 {
        self.values[time * self.n_nodes + node]
    }

    pub fn set(&mut self, node: usize, time: usize, v: f64) {
        self.values[time * self.n_nodes + node] = v;
    }

    /// All node values at one time index.
    pub fn at_time(&self, time: usize) -> &[f64] {
        &self.values[time * self.n_nodes..(time + 1) * self.n_nodes]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        self.check_shape(other.n_nodes, other.n_times)?;
        Ok(Self {
            n_nodes: self.n_nodes,
            n_times: self.n_times,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }

    pub(crate) fn check_shape(&self, n_nodes: usize, n_times: usize) -> Result<()> {
        if self.n_nodes != n_nodes || self.n_times != n_times {
            return Err(HeatError::Config(format!(
                "density grid {}x{} does not match rules {}x{}",
                self.n_nodes, self.n_times, n_nodes, n_times
            )));
        }
        Ok(())
    }
}

fn point_segment_distance(x: &SpaceVec, a: &SpaceVec, b: &SpaceVec) -> f64 {
    let ab = *b - *a;
    let len2 = ab.norm_sq();
    let u = if len2 > 0.0 {
        ((*x - *a).dot(&ab) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (*x - (*a + u * ab)).norm()
}

fn arc_point(center: &SpaceVec, radius: f64, theta: f64) -> (SpaceVec, SpaceVec) {
    let normal = SpaceVec::d2(theta.cos(), theta.sin());
    (*center + radius * normal, normal)
}

fn point_arc_distance(x: &SpaceVec, center: &SpaceVec, radius: f64, th0: f64, th1: f64) -> f64 {
    let rel = *x - *center;
    let rho = rel.norm();
    if rho > 0.0 {
        let mid = 0.5 * (th0 + th1);
        let phi = rel.y().atan2(rel.x());
        let mut delta = (phi - mid) % (2.0 * std::f64::consts::PI);
        if delta > std::f64::consts::PI {
            delta -= 2.0 * std::f64::consts::PI;
        } else if delta < -std::f64::consts::PI {
            delta += 2.0 * std::f64::consts::PI;
        }
        if delta.abs() <= 0.5 * (th1 - th0) {
            return (rho - radius).abs();
        }
    }
    let (p0, _) = arc_point(center, radius, th0);
    let (p1, _) = arc_point(center, radius, th1);
    (*x - p0).norm().min((*x - p1).norm())
}

/// `int_{boundary} kernel(x - xi, n_xi) mu(xi) dS_xi` at a single time lag
/// `s`, for node values `mu`.
pub(crate) fn boundary_integral(
    brule: &BoundaryRule,
    x: &SpaceVec,
    s: f64,
    mu: &[f64],
    kernel: &impl Fn(&SpaceVec, &SpaceVec) -> f64,
) -> f64 {
    let root = s.sqrt();
    let negligible = |d: f64| d * d / (4.0 * s) > NEGLIGIBLE_EXPONENT;
    let mut total = 0.0;
    for patch in &brule.patches {
        match patch {
            BoundaryPatch::Point { node } => {
                let bn = &brule.nodes[*node];
                total += bn.weight * kernel(&(*x - bn.point), &bn.normal) * mu[*node];
            }
            BoundaryPatch::Segment {
                start, end, normal, ..
            } => {
                let len = (*end - *start).norm();
                if negligible(point_segment_distance(x, start, end)) {
                    continue;
                }
                if len <= PANEL_RESOLVED * root {
                    for i in patch.node_range() {
                        let bn = &brule.nodes[i];
                        total += bn.weight * kernel(&(*x - bn.point), &bn.normal) * mu[i];
                    }
                } else {
                    let at = |u: f64| *start + (0.5 * (u + 1.0)) * (*end - *start);
                    let geom = |u: f64| (at(u), *normal, 0.5 * len);
                    let dist = |u0: f64, u1: f64| point_segment_distance(x, &at(u0), &at(u1));
                    total += adaptive_patch(
                        -1.0,
                        1.0,
                        0.5 * len,
                        root,
                        &dist,
                        &geom,
                        &|u| patch.interpolate(mu, u),
                        x,
                        kernel,
                        0,
                        &negligible,
                    );
                }
            }
            BoundaryPatch::Circle {
                center, radius, count, ..
            } => {
                let d = ((*x - *center).norm() - radius).abs();
                if negligible(d) {
                    continue;
                }
                let h = 2.0 * std::f64::consts::PI * radius / *count as f64;
                if h <= PANEL_RESOLVED * root {
                    for i in patch.node_range() {
                        let bn = &brule.nodes[i];
                        total += bn.weight * kernel(&(*x - bn.point), &bn.normal) * mu[i];
                    }
                } else {
                    let rel = *x - *center;
                    let phi = if rel.norm() > 0.0 { rel.y().atan2(rel.x()) } else { 0.0 };
                    let half = ((20.0 * root + 2.0 * d) / radius).min(std::f64::consts::PI);
                    let geom = |th: f64| {
                        let (p, n) = arc_point(center, *radius, th);
                        (p, n, *radius)
                    };
                    let dist = |t0: f64, t1: f64| point_arc_distance(x, center, *radius, t0, t1);
                    total += adaptive_patch(
                        phi - half,
                        phi + half,
                        *radius,
                        root,
                        &dist,
                        &geom,
                        &|th| patch.interpolate(mu, th),
                        x,
                        kernel,
                        0,
                        &negligible,
                    );
                }
            }
        }
    }
    total
}

/// Recursive bisection in the patch parameter; `jac` is the (constant)
/// length per unit parameter.
#[allow(clippy::too_many_arguments)]
fn adaptive_patch(
    u0: f64,
    u1: f64,
    jac: f64,
    root: f64,
    dist: &impl Fn(f64, f64) -> f64,
    geom: &impl Fn(f64) -> (SpaceVec, SpaceVec, f64),
    density: &impl Fn(f64) -> f64,
    x: &SpaceVec,
    kernel: &impl Fn(&SpaceVec, &SpaceVec) -> f64,
    depth: usize,
    negligible: &impl Fn(f64) -> bool,
) -> f64 {
    let len = (u1 - u0) * jac;
    if negligible(dist(u0, u1)) {
        return 0.0;
    }
    if len <= LEAF_RESOLVED * root || depth >= MAX_DEPTH {
        return leaf_rule()
            .mapped(u0, u1)
            .map(|(u, w)| {
                let (p, n, j) = geom(u);
                w * j * kernel(&(*x - p), &n) * density(u)
            })
            .sum();
    }
    let mid = 0.5 * (u0 + u1);
    adaptive_patch(u0, mid, jac, root, dist, geom, density, x, kernel, depth + 1, negligible)
        + adaptive_patch(mid, u1, jac, root, dist, geom, density, x, kernel, depth + 1, negligible)
}

fn check_layer_inputs(
    j: u32,
    n: u32,
    density: &BoundaryDensity,
    brule: &BoundaryRule,
    trule: &TimeRule,
    x: &SpaceVec,
    t: f64,
) -> Result<KernelOrder> {
    let order = KernelOrder::new(j, n)?;
    x.check_dim(&order)?;
    density.check_shape(brule.len(), trule.len())?;
    check_target_time(trule, t)?;
    Ok(order)
}

fn space_dim(brule: &BoundaryRule) -> u32 {
    brule.nodes.first().map(|n| n.point.dim()).unwrap_or(1)
}

/// Single layer heat potential with kernel `eps_{j,n}`:
/// `int_0^t int_{boundary} eps_j(x - xi, t - tau) mu(xi, tau) dS dtau`.
pub fn single_layer(
    j: u32,
    density: &BoundaryDensity,
    brule: &BoundaryRule,
    trule: &TimeRule,
    x: &SpaceVec,
    t: f64,
) -> Result<f64> {
    let order = check_layer_inputs(j, space_dim(brule), density, brule, trule, x, t)?;
    if density.is_zero() {
        return Ok(0.0);
    }
    Ok(trule
        .nodes
        .iter()
        .enumerate()
        .map(|(it, node)| {
            let s = node.lag;
            let kernel = |r: &SpaceVec, _n: &SpaceVec| eval_kernel(order, r.norm_sq(), s);
            node.weight * boundary_integral(brule, x, s, density.at_time(it), &kernel)
        })
        .sum())
}

/// Double layer heat potential with kernel `d eps_{j,n}(x - xi, t - tau) / d n_xi`.
///
/// With `on_boundary` the target must be a node of `brule`; the weakly
/// singular integral is evaluated directly and no jump term is added.
pub fn double_layer(
    j: u32,
    density: &BoundaryDensity,
    brule: &BoundaryRule,
    trule: &TimeRule,
    x: &SpaceVec,
    t: f64,
    on_boundary: bool,
) -> Result<f64> {
    let order = check_layer_inputs(j, space_dim(brule), density, brule, trule, x, t)?;
    if on_boundary && brule.find_node(x).is_none() {
        return Err(HeatError::Argument(format!(
            "on-boundary double layer requested at {x:?}, which is not a boundary node"
        )));
    }
    if density.is_zero() {
        return Ok(0.0);
    }
    Ok(trule
        .nodes
        .iter()
        .enumerate()
        .map(|(it, node)| {
            let s = node.lag;
            let kernel = |r: &SpaceVec, n: &SpaceVec| {
                r.dot(n) / (2.0 * s) * eval_kernel(order, r.norm_sq(), s)
            };
            node.weight * boundary_integral(brule, x, s, density.at_time(it), &kernel)
        })
        .sum())
}

/// Box of the domain clipped to the source support, if any.
pub fn source_region(domain: &Domain, f: &dyn SourceField) -> Aabb {
    let bb = domain.bounding_box();
    f.support().and_then(|s| s.intersect(&bb)).unwrap_or(bb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{make_boundary_rule, make_time_rule, make_volume_rule};
    use crate::source::FnSource;
    use approx::assert_relative_eq;

    fn ord(m: u32, n: u32) -> KernelOrder {
        KernelOrder::new(m, n).unwrap()
    }

    #[test]
    fn zero_source_gives_exact_zero() {
        let dom = Domain::Interval { a: -1.0, b: 1.0 };
        let vr = make_volume_rule(&dom, 16).unwrap();
        let tr = make_time_rule(0.5, 8).unwrap();
        let zero = crate::source::Source::new(crate::source::SourceSpec::Zero, dom).unwrap();
        let v = volume_potential(ord(2, 1), &zero, &dom, &vr, &tr, &SpaceVec::d1(0.0), 0.5).unwrap();
        assert_eq!(v, 0.0);
        let b = make_boundary_rule(&dom, 1).unwrap();
        let g = potential_trace_normal_derivative(
            0,
            ord(1, 1),
            &zero,
            &dom,
            &vr,
            &tr,
            &b.nodes[1].point,
            &b.nodes[1].normal,
            0.5,
        )
        .unwrap();
        assert_eq!(g, 0.0);
    }

    #[test]
    fn mismatched_time_rule_is_rejected() {
        let dom = Domain::Interval { a: -1.0, b: 1.0 };
        let vr = make_volume_rule(&dom, 16).unwrap();
        let tr = make_time_rule(0.5, 8).unwrap();
        let f = FnSource::new(|_: &SpaceVec, _| 1.0);
        assert!(volume_potential(ord(1, 1), &f, &dom, &vr, &tr, &SpaceVec::d1(0.0), 0.4).is_err());
        assert!(volume_potential(ord(1, 1), &f, &dom, &vr, &tr, &SpaceVec::d2(0.0, 0.0), 0.5).is_err());
    }

    #[test]
    fn trace_index_checked() {
        let dom = Domain::Interval { a: -1.0, b: 1.0 };
        let vr = make_volume_rule(&dom, 16).unwrap();
        let tr = make_time_rule(0.5, 8).unwrap();
        let f = FnSource::new(|_: &SpaceVec, _| 1.0);
        let r = potential_trace(2, ord(2, 1), &f, &dom, &vr, &tr, &SpaceVec::d1(0.0), 0.5);
        assert!(matches!(r, Err(HeatError::Argument(_))));
        let r = potential_trace_normal_derivative(
            0,
            ord(1, 1),
            &f,
            &dom,
            &vr,
            &tr,
            &SpaceVec::d1(0.2),
            &SpaceVec::d1(1.0),
            0.5,
        );
        assert!(matches!(r, Err(HeatError::Argument(_))));
    }

    #[test]
    fn constant_source_small_time_asymptotics() {
        let dom = Domain::Interval { a: -1.0, b: 1.0 };
        let vr = make_volume_rule(&dom, 32).unwrap();
        let c = 2.5;
        let f = FnSource::new(move |_: &SpaceVec, _| c);
        let t = 1e-3;
        let tr = make_time_rule(t, 16).unwrap();
        let x = SpaceVec::d1(0.0);
        let u1 = volume_potential(ord(1, 1), &f, &dom, &vr, &tr, &x, t).unwrap();
        assert_relative_eq!(u1, c * t, max_relative = 1e-3);
        let u2 = volume_potential(ord(2, 1), &f, &dom, &vr, &tr, &x, t).unwrap();
        assert_relative_eq!(u2, c * t * t / 2.0, max_relative = 1e-3);
        let tr2 = potential_trace(1, ord(2, 1), &f, &dom, &vr, &tr, &x, t).unwrap();
        assert_eq!(tr2, u1);
    }

    #[test]
    fn on_boundary_double_layer_needs_node() {
        let dom = Domain::Interval { a: 0.0, b: 1.0 };
        let b = make_boundary_rule(&dom, 1).unwrap();
        let tr = make_time_rule(1.0, 8).unwrap();
        let mu = BoundaryDensity::sample(&b, &tr, |_, _| 1.0);
        assert!(double_layer(1, &mu, &b, &tr, &SpaceVec::d1(0.5), 1.0, true).is_err());
        assert!(double_layer(1, &mu, &b, &tr, &SpaceVec::d1(1.0), 1.0, true).is_ok());
        let zero = BoundaryDensity::zeros(2, tr.len());
        assert_eq!(double_layer(1, &zero, &b, &tr, &SpaceVec::d1(0.5), 1.0, false).unwrap(), 0.0);
        assert_eq!(single_layer(1, &zero, &b, &tr, &SpaceVec::d1(0.5), 1.0).unwrap(), 0.0);
    }

    #[test]
    fn far_single_layer_decays() {
        let dom = Domain::Interval { a: 0.0, b: 1.0 };
        let b = make_boundary_rule(&dom, 1).unwrap();
        let tr = make_time_rule(1.0, 16).unwrap();
        let mu = BoundaryDensity::sample(&b, &tr, |_, _| 1.0);
        let v = single_layer(1, &mu, &b, &tr, &SpaceVec::d1(11.0), 1.0).unwrap();
        assert!(v.abs() <= 1e-10);
    }

    #[test]
    fn segment_adaptivity_matches_flat_integral() {
        // Single layer of a unit density on a long straight side, evaluated
        // at a side node for a tiny lag: the spatial integral tends to the
        // 1-d kernel mass 1 / (2 sqrt(pi s)) times the density.
        let dom = Domain::Rectangle {
            ax: 0.0,
            bx: 1.0,
            ay: 0.0,
            by: 1.0,
        };
        let b = make_boundary_rule(&dom, 2).unwrap();
        let mu = vec![1.0; b.len()];
        let x = b.nodes[3].point;
        let s = 1e-6;
        let k = |r: &SpaceVec, _n: &SpaceVec| eval_kernel(ord(1, 2), r.norm_sq(), s);
        let v = boundary_integral(&b, &x, s, &mu, &k);
        let expected = 1.0 / (2.0 * (std::f64::consts::PI * s).sqrt());
        assert_relative_eq!(v, expected, max_relative = 1e-10);
    }
}
