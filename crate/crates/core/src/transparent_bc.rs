//! The nonlocal boundary functionals
//!
//! ```text
//! I^k(x, t) = -diamond^k u / 2
//!     + sum_{i=0}^{m-k-1} DL_{m-i-k}[diamond^{m-i-1} u] - SL_{m-i-k}[d_n diamond^{m-i-1} u]
//! ```
//!
//! evaluated on Cauchy traces of a volume potential, the matching interior
//! identity (same sum without the jump term, at interior points), and the
//! driver that checks all of them for a scenario.

use serde::{Deserialize, Serialize};

use crate::error::{HeatError, Result};
use crate::geometry::Domain;
use crate::kernel::{KernelOrder, SpaceVec};
use crate::oracle::fd_heat_operator_residual;
use crate::par::map_indexed;
use crate::potentials::{
    double_layer, single_layer, source_region, BoundaryDensity, HeatPotential,
};
use crate::quadrature::{
    make_boundary_rule, make_volume_rule_on, BoundaryNode, BoundaryRule, TimeRule, VolumeRule,
};
use crate::scenario::{interior_probes, Resolution, Scenario, Tolerances};
use crate::source::SourceField;

/// Boundary records `diamond^j u` and `d_n diamond^j u`, `j = 0..m-1`, on the
/// (boundary node) x (time node) grid of a time rule targeting `t`, plus
/// `diamond^j u` at the nodes at `t` itself.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyTraces {
    pub order: KernelOrder,
    pub domain: Domain,
    pub brule: BoundaryRule,
    pub trule: TimeRule,
    pub dirichlet: Vec<BoundaryDensity>,
    pub neumann: Vec<BoundaryDensity>,
    pub current: Vec<Vec<f64>>,
}

impl CauchyTraces {
    pub fn zeros(order: KernelOrder, domain: Domain, brule: BoundaryRule, trule: TimeRule) -> Self {
        let m = order.m() as usize;
        let grid = BoundaryDensity::zeros(brule.len(), trule.len());
        Self {
            order,
            domain,
            dirichlet: vec![grid.clone(); m],
            neumann: vec![grid; m],
            current: vec![vec![0.0; brule.len()]; m],
            brule,
            trule,
        }
    }

    /// Fills the traces from `sampler(j, node, tau) -> (diamond^j u, d_n
    /// diamond^j u)`, evaluated in parallel over (node, time) pairs. The
    /// current values use `tau = t` (only the first component is kept).
    pub fn from_sampler<F>(
        order: KernelOrder,
        domain: Domain,
        brule: BoundaryRule,
        trule: TimeRule,
        sampler: F,
    ) -> Result<Self>
    where
        F: Fn(u32, &BoundaryNode, f64, bool) -> Result<(f64, f64)> + Sync + Send,
    {
        let m = order.m();
        let nb = brule.len();
        let nt = trule.len();
        let taus: Vec<f64> = trule
            .nodes
            .iter()
            .map(|n| n.tau)
            .chain(std::iter::once(trule.target))
            .collect();
        let cells = map_indexed(nb * taus.len(), |idx| {
            let (it, ib) = (idx / nb, idx % nb);
            let want_flux = it < nt;
            (0..m)
                .map(|j| sampler(j, &brule.nodes[ib], taus[it], want_flux))
                .collect::<Result<Vec<_>>>()
        });
        let mut out = Self::zeros(order, domain, brule, trule);
        for (idx, cell) in cells.into_iter().enumerate() {
            let (it, ib) = (idx / nb, idx % nb);
            for (j, (value, flux)) in cell?.into_iter().enumerate() {
                if it < nt {
                    out.dirichlet[j].set(ib, it, value);
                    out.neumann[j].set(ib, it, flux);
                } else {
                    out.current[j][ib] = value;
                }
            }
        }
        Ok(out)
    }

    pub fn target_time(&self) -> f64 {
        self.trule.target
    }

    pub fn is_zero(&self) -> bool {
        self.dirichlet.iter().all(|d| d.is_zero())
            && self.neumann.iter().all(|d| d.is_zero())
            && self.current.iter().flatten().all(|v| *v == 0.0)
    }

    /// `a * self + b * other` for traces on the same grid.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        if self.order != other.order
            || self.brule.len() != other.brule.len()
            || self.trule != other.trule
        {
            return Err(HeatError::Config("traces live on different grids".into()));
        }
        let mix = |x: &[BoundaryDensity], y: &[BoundaryDensity]| {
            x.iter().zip(y).map(|(p, q)| p.combine(a, q, b)).collect::<Result<Vec<_>>>()
        };
        Ok(Self {
            dirichlet: mix(&self.dirichlet, &other.dirichlet)?,
            neumann: mix(&self.neumann, &other.neumann)?,
            current: self
                .current
                .iter()
                .zip(&other.current)
                .map(|(p, q)| p.iter().zip(q).map(|(u, v)| a * u + b * v).collect())
                .collect(),
            ..self.clone()
        })
    }
}

/// Cauchy traces of the order-`m` volume potential of `f`.
pub fn extract_traces(
    order: KernelOrder,
    f: &dyn SourceField,
    domain: &Domain,
    vrule: &VolumeRule,
    brule: &BoundaryRule,
    trule: &TimeRule,
) -> Result<CauchyTraces> {
    if domain.dim() != order.n() {
        return Err(HeatError::Config("order and domain dimensions differ".into()));
    }
    if f.is_zero() {
        return Ok(CauchyTraces::zeros(order, *domain, brule.clone(), trule.clone()));
    }
    let pot = HeatPotential::new(order, f, *domain, vrule.clone(), trule.grading);
    CauchyTraces::from_sampler(order, *domain, brule.clone(), trule.clone(), |j, node, tau, flux| {
        let value = pot.trace(j, &node.point, tau)?;
        let dn = if flux {
            pot.trace_normal_derivative(j, &node.point, &node.normal, tau)?
        } else {
            0.0
        };
        Ok((value, dn))
    })
}

fn node_index(traces: &CauchyTraces, x_b: &SpaceVec) -> Result<usize> {
    traces
        .brule
        .find_node(x_b)
        .ok_or_else(|| HeatError::Argument(format!("{x_b:?} is not a boundary node")))
}

fn check_time(traces: &CauchyTraces, t: f64) -> Result<()> {
    if (traces.trule.target - t).abs() > 1e-12 * t.abs().max(1.0) {
        return Err(HeatError::Argument(format!(
            "traces were extracted for t = {}, residual requested at t = {t}",
            traces.trule.target
        )));
    }
    Ok(())
}

/// `sum_{i=0}^{m-k-1} DL_{m-i-k}[diamond^{m-i-1} u] - SL_{m-i-k}[d_n diamond^{m-i-1} u]`.
fn layer_sum(traces: &CauchyTraces, k: u32, x: &SpaceVec, t: f64, on_boundary: bool) -> Result<f64> {
    let m = traces.order.m();
    let mut total = 0.0;
    for i in 0..m - k {
        let j = m - i - k;
        let idx = (m - i - 1) as usize;
        let dl = double_layer(
            j,
            &traces.dirichlet[idx],
            &traces.brule,
            &traces.trule,
            x,
            t,
            on_boundary,
        )?;
        let sl = single_layer(j, &traces.neumann[idx], &traces.brule, &traces.trule, x, t)?;
        total += dl - sl;
    }
    Ok(total)
}

/// `I^k(x_b, t)` at a boundary node.
pub fn bc_residual(k: u32, traces: &CauchyTraces, x_b: &SpaceVec, t: f64) -> Result<f64> {
    if k >= traces.order.m() {
        return Err(HeatError::Argument(format!(
            "k = {k} outside 0..{}",
            traces.order.m()
        )));
    }
    check_time(traces, t)?;
    let node = node_index(traces, x_b)?;
    let jump = -0.5 * traces.current[k as usize][node];
    Ok(jump + layer_sum(traces, k, x_b, t, true)?)
}

/// The layer sum of `I^0` at an interior point (no jump term); vanishes for
/// traces of a volume potential.
pub fn interior_identity_residual(traces: &CauchyTraces, x: &SpaceVec, t: f64) -> Result<f64> {
    check_time(traces, t)?;
    if x.dim() != traces.domain.dim() || !traces.domain.is_interior(x)? {
        return Err(HeatError::Argument(format!("{x:?} is not strictly inside the domain")));
    }
    layer_sum(traces, 0, x, t, false)
}

/// `I^0(x_b, t) - phi(x_b, t)` for first-order traces: the residual of the
/// inhomogeneous nonlocal condition.
pub fn bc_residual_inhomogeneous(
    traces: &CauchyTraces,
    phi: &dyn Fn(&SpaceVec, f64) -> f64,
    x_b: &SpaceVec,
    t: f64,
) -> Result<f64> {
    if traces.order.m() != 1 {
        return Err(HeatError::Argument(format!(
            "inhomogeneous condition is stated for m = 1, got m = {}",
            traces.order.m()
        )));
    }
    Ok(bc_residual(0, traces, x_b, t)? - phi(x_b, t))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KResidual {
    pub k: u32,
    pub max_abs: f64,
    pub mean_abs: f64,
    /// `max |diamond^k u|` over boundary nodes and interior probes.
    pub scale: f64,
    pub normalized: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeResidual {
    pub probes: usize,
    pub max_abs: f64,
    pub scale: f64,
    pub normalized: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub m: u32,
    pub n: u32,
    pub resolution: Resolution,
    pub boundary_nodes: usize,
    pub time_nodes: usize,
    pub volume_nodes: usize,
    pub sample_times: Vec<f64>,
    /// `max |u|` over boundary nodes and interior probes at the sample times.
    pub scale: f64,
    pub boundary: Vec<KResidual>,
    /// Largest normalized boundary residual over `k`.
    pub boundary_max: f64,
    pub interior: ProbeResidual,
    /// `|diamond (diamond^{m-1} u) - f|` by finite differences, over `max |f|`.
    pub pde: ProbeResidual,
    /// Slope of `log |u|` against `log t` for small `t` at the first probe;
    /// absent when `u` vanishes there.
    pub initial_slope: Option<f64>,
}

/// One pass/fail line of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub pass: bool,
}

impl Check {
    fn at_most(name: &str, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            limit,
            pass: value <= limit,
        }
    }
}

impl ResidualReport {
    pub fn checks(&self, tol: &Tolerances) -> Vec<Check> {
        let mut out: Vec<Check> = self
            .boundary
            .iter()
            .map(|r| Check::at_most(&format!("boundary_residual_k{}", r.k), r.normalized, tol.boundary_residual))
            .collect();
        out.push(Check::at_most("interior_identity", self.interior.normalized, tol.interior_residual));
        out.push(Check::at_most("pde_residual", self.pde.normalized, tol.pde_residual));
        let need = tol.initial_slope_fraction * self.m as f64;
        let slope = self.initial_slope.unwrap_or(need);
        out.push(Check {
            name: "initial_slope".into(),
            value: slope,
            limit: need,
            pass: slope >= need,
        });
        out
    }
}

fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn safe_ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Least-squares slope of `ys` against `xs`.
fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Number of equispaced verification times in `(0, T]`.
pub const SAMPLE_TIMES: usize = 8;

/// Checks the nonlocal boundary conditions, the interior identity, the PDE
/// and the initial condition for the potential of a scenario at its
/// resolution.
pub fn verify_theorem1(scenario: &Scenario) -> Result<ResidualReport> {
    scenario.validate()?;
    let order = scenario.order;
    let m = order.m();
    let domain = scenario.domain;
    if order.n() == 2 && !scenario.enable_2d {
        return Err(HeatError::Config(
            "two-dimensional boundary verification is disabled for this scenario (enable_2d)".into(),
        ));
    }
    let src = scenario.source()?;
    let res = scenario.resolution;
    let support = source_region(&domain, &src);
    let vrule = make_volume_rule_on(&domain, &support, res.volume)?;
    let brule = make_boundary_rule(&domain, res.boundary)?;
    let pot = HeatPotential::new(order, &src, domain, vrule.clone(), res.grading());
    let probes = interior_probes(&domain);
    let horizon = scenario.horizon;
    let times: Vec<f64> = (1..=SAMPLE_TIMES)
        .map(|i| horizon * i as f64 / SAMPLE_TIMES as f64)
        .collect();

    let nb = brule.len();
    let mut bc = vec![Vec::new(); m as usize];
    let mut scales = vec![0.0f64; m as usize];
    let mut interior = Vec::new();
    let mut time_nodes = 0;
    for &t in &times {
        let trule = pot.time_rule(t)?;
        time_nodes = trule.len();
        let traces = extract_traces(order, &src, &domain, &vrule, &brule, &trule)?;
        let residuals = map_indexed(m as usize * nb, |idx| {
            let (k, ib) = (idx / nb, idx % nb);
            bc_residual(k as u32, &traces, &brule.nodes[ib].point, t)
        });
        for (idx, r) in residuals.into_iter().enumerate() {
            bc[idx / nb].push(r?);
        }
        let probe_values = map_indexed(m as usize * probes.len(), |idx| {
            let (k, ip) = (idx / probes.len(), idx % probes.len());
            pot.trace(k as u32, &probes[ip], t)
        });
        for (idx, v) in probe_values.into_iter().enumerate() {
            let k = idx / probes.len();
            scales[k] = scales[k].max(v?.abs());
        }
        for (k, s) in scales.iter_mut().enumerate() {
            *s = s.max(max_abs(traces.current[k].iter().copied()));
        }
        for r in map_indexed(probes.len(), |ip| interior_identity_residual(&traces, &probes[ip], t)) {
            interior.push(r?);
        }
    }

    let boundary: Vec<KResidual> = bc
        .iter()
        .enumerate()
        .map(|(k, rs)| {
            let max = max_abs(rs.iter().copied());
            KResidual {
                k: k as u32,
                max_abs: max,
                mean_abs: rs.iter().map(|r| r.abs()).sum::<f64>() / rs.len() as f64,
                scale: scales[k],
                normalized: safe_ratio(max, scales[k]),
            }
        })
        .collect();
    let boundary_max = boundary.iter().fold(0.0f64, |a, r| a.max(r.normalized));
    let interior_max = max_abs(interior.iter().copied());
    let interior = ProbeResidual {
        probes: probes.len(),
        max_abs: interior_max,
        scale: scales[0],
        normalized: safe_ratio(interior_max, scales[0]),
    };

    // diamond applied to the order-1 potential diamond^{m-1} u must give f.
    let h = res.fd_step;
    let pde_times = [0.5 * horizon, horizon];
    let sampler = |x: &SpaceVec, s: f64| pot.trace(m - 1, x, s);
    let pde_vals = map_indexed(probes.len() * pde_times.len(), |idx| {
        let (it, ip) = (idx / probes.len(), idx % probes.len());
        let (x, t) = (&probes[ip], pde_times[it]);
        let lhs = fd_heat_operator_residual(&sampler, 1, x, t, h, h)?;
        Ok::<_, HeatError>((lhs - src.value(x, t), src.value(x, t)))
    });
    let mut pde_max = 0.0f64;
    let mut f_max = 0.0f64;
    for v in pde_vals {
        let (r, fv) = v?;
        pde_max = pde_max.max(r.abs());
        f_max = f_max.max(fv.abs());
    }
    let pde = ProbeResidual {
        probes: probes.len() * pde_times.len(),
        max_abs: pde_max,
        scale: f_max,
        normalized: safe_ratio(pde_max, f_max),
    };

    let fit_times: Vec<f64> = (0..5).map(|i| horizon * 10f64.powf(-5.0 + 0.5 * i as f64)).collect();
    let fit_vals = map_indexed(fit_times.len(), |i| pot.value(&probes[0], fit_times[i]));
    let fit_vals = fit_vals.into_iter().collect::<Result<Vec<_>>>()?;
    let initial_slope = if fit_vals.iter().all(|v| *v != 0.0) {
        let lx: Vec<f64> = fit_times.iter().map(|t| t.ln()).collect();
        let ly: Vec<f64> = fit_vals.iter().map(|v| v.abs().ln()).collect();
        Some(fit_slope(&lx, &ly))
    } else {
        None
    };

    Ok(ResidualReport {
        m,
        n: order.n(),
        resolution: res,
        boundary_nodes: nb,
        time_nodes,
        volume_nodes: vrule.nodes.len(),
        sample_times: times,
        scale: scales[0],
        boundary,
        boundary_max,
        interior,
        pde,
        initial_slope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{make_time_rule, make_volume_rule};
    use crate::source::FnSource;

    #[test]
    fn zero_traces_give_exact_zeros() {
        let d = Domain::Interval { a: -1.0, b: 1.0 };
        let order = KernelOrder::new(3, 1).unwrap();
        let brule = make_boundary_rule(&d, 1).unwrap();
        let trule = make_time_rule(0.5, 8).unwrap();
        let vrule = make_volume_rule(&d, 8).unwrap();
        let zero = FnSource::new(|_: &SpaceVec, _| 0.0);
        let traces = extract_traces(order, &zero, &d, &vrule, &brule, &trule).unwrap();
        assert!(traces.is_zero());
        for k in 0..3 {
            for node in &brule.nodes {
                assert_eq!(bc_residual(k, &traces, &node.point, 0.5).unwrap(), 0.0);
            }
        }
        assert_eq!(interior_identity_residual(&traces, &SpaceVec::d1(0.2), 0.5).unwrap(), 0.0);
        assert!(bc_residual(3, &traces, &SpaceVec::d1(1.0), 0.5).is_err());
        assert!(bc_residual(0, &traces, &SpaceVec::d1(0.5), 0.5).is_err());
        assert!(bc_residual(0, &traces, &SpaceVec::d1(1.0), 0.4).is_err());
        assert!(interior_identity_residual(&traces, &SpaceVec::d1(1.0), 0.5).is_err());
        assert!(bc_residual_inhomogeneous(&traces, &|_, _| 0.0, &SpaceVec::d1(1.0), 0.5).is_err());
    }

    #[test]
    fn slope_fit() {
        let xs = [0.0, 1.0, 2.0];
        assert!((fit_slope(&xs, &[1.0, 3.0, 5.0]) - 2.0).abs() < 1e-14);
    }
}
