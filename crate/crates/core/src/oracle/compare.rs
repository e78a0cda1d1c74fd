//! Direct potential against the cascade oracle at seeded random probes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HeatError, Result};
use crate::geometry::Domain;
use crate::kernel::SpaceVec;
use crate::par::map_indexed;
use crate::potentials::{source_region, HeatPotential};
use crate::quadrature::make_volume_rule_on;
use crate::scenario::Scenario;
use crate::source::SourceField;

use super::cascade::cascade_snapshot;

/// Number of probes used by [`compare_cascade`] by default.
pub const ORACLE_PROBES: usize = 10;

/// `count` interior space-time points drawn from `ChaCha8(seed)`: space
/// uniform in the central 80% of the domain's box (rejecting points outside
/// a disk), time uniform in `[0.2 T, T]`.
pub fn seeded_probes(domain: &Domain, horizon: f64, seed: u64, count: usize) -> Result<Vec<(SpaceVec, f64)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bb = domain.bounding_box();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut c = [0.0; 2];
        for (d, v) in c.iter_mut().enumerate().take(bb.dim as usize) {
            let (lo, hi) = (bb.lo[d], bb.hi[d]);
            let pad = 0.1 * (hi - lo);
            *v = rng.gen_range(lo + pad..hi - pad);
        }
        let t = rng.gen_range(0.2 * horizon..=horizon);
        let x = SpaceVec::from_slice(&c[..bb.dim as usize])?;
        if domain.is_interior(&x)? {
            out.push((x, t));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleProbe {
    pub x: Vec<f64>,
    pub t: f64,
    pub direct: f64,
    pub cascade: f64,
    pub abs_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub seed: u64,
    pub probes: Vec<OracleProbe>,
    /// `max |direct|` over the probes.
    pub scale: f64,
    pub max_rel_diff: f64,
}

/// Tabulates `|direct - cascade| / scale` at the given probes.
pub fn compare_cascade(scenario: &Scenario, probes: &[(SpaceVec, f64)]) -> Result<OracleComparison> {
    scenario.validate()?;
    let order = scenario.order;
    if order.m() < 2 {
        return Err(HeatError::Config(
            "oracle comparison needs m >= 2 (the cascade of one stage is the potential itself)".into(),
        ));
    }
    let domain = scenario.domain;
    let src = scenario.source()?;
    let res = scenario.resolution;
    let vrule = make_volume_rule_on(&domain, &source_region(&domain, &src), res.volume)?;
    let pot = HeatPotential::new(order, &src, domain, vrule, res.grading());
    let rules = scenario.cascade_rules();
    let pad = scenario.cascade_padding();
    let rows = map_indexed(probes.len(), |i| {
        let (x, t) = &probes[i];
        let direct = pot.value(x, *t)?;
        let cascade = if src.is_zero() {
            0.0
        } else {
            cascade_snapshot(order.m(), &src, &domain, pad, &rules, *t)?.eval(x)?
        };
        Ok::<_, HeatError>(OracleProbe {
            x: x.as_slice().to_vec(),
            t: *t,
            direct,
            cascade,
            abs_diff: (direct - cascade).abs(),
        })
    });
    let probes = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let scale = probes.iter().fold(0.0f64, |m, p| m.max(p.direct.abs()));
    let worst = probes.iter().fold(0.0f64, |m, p| m.max(p.abs_diff));
    Ok(OracleComparison {
        seed: scenario.seed,
        probes,
        scale,
        max_rel_diff: if worst == 0.0 { 0.0 } else { worst / scale },
    })
}
