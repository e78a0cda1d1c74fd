mod common;

use common::integrate;
use heatpot::geometry::Domain;
use heatpot::kernel::iterated_kernel;
use heatpot::potentials::{double_layer, volume_potential, BoundaryDensity};
use heatpot::quadrature::{make_boundary_rule, make_volume_rule, BoundaryRule, TimeGrading, TimeRule};
use heatpot::source::FnSource;
use heatpot::{KernelOrder, SpaceVec};
use proptest::prelude::*;

fn ord(m: u32, n: u32) -> KernelOrder {
    KernelOrder::new(m, n).unwrap()
}

fn bump(x: &SpaceVec, t: f64) -> f64 {
    (-(x.x() / 0.15).powi(2)).exp() * (1.0 + t)
}

/// Space-time integral by nested adaptive Simpson in `(sigma, xi)`,
/// `sigma = sqrt(t - tau)`.
fn oracle_potential(m: u32, x: f64, t: f64) -> f64 {
    let order = ord(m, 1);
    let inner = |sigma: f64| {
        let s = sigma * sigma;
        if s == 0.0 {
            return 0.0;
        }
        let tau = t - s;
        let v = integrate(
            &|xi| iterated_kernel(order, &SpaceVec::d1(x - xi), s) * bump(&SpaceVec::d1(xi), tau),
            -1.0,
            1.0,
            64,
            1e-13,
        );
        2.0 * sigma * v
    };
    integrate(&inner, 0.0, t.sqrt(), 16, 1e-11)
}

#[test]
fn volume_potential_matches_adaptive_oracle() {
    let domain = Domain::Interval { a: -1.0, b: 1.0 };
    let f = FnSource::new(bump);
    let vrule = make_volume_rule(&domain, 64).unwrap();
    let t = 0.4;
    let trule = TimeRule::new(t, TimeGrading::graded(16, 6)).unwrap();
    for m in [1, 2] {
        for x in [-0.5, 0.0, 0.3, 0.95] {
            let got = volume_potential(ord(m, 1), &f, &domain, &vrule, &trule, &SpaceVec::d1(x), t).unwrap();
            let want = oracle_potential(m, x, t);
            assert!((got - want).abs() <= 1e-6 * want.abs(), "m={m} x={x}: {got} vs {want}");
        }
    }
}

/// Interior limit of the double layer at a boundary node, Richardson
/// extrapolated from `x0 - delta n` with `delta = d0, d0/2, d0/4`.
/// Returns `|extrapolated - (-mu/2 + direct value)| / max|mu|`.
fn jump_error(brule: &BoundaryRule, node: usize, dens: &BoundaryDensity, trule: &TimeRule, d0: f64) -> f64 {
    let t = trule.target;
    let b = &brule.nodes[node];
    let last = dens.n_times() - 1;
    let mu = dens.get(node, last);
    let direct = double_layer(1, dens, brule, trule, &b.point, t, true).unwrap();
    let limit = -0.5 * mu + direct;
    let inside = |delta: f64| {
        let x = b.point - b.normal.scale(delta);
        double_layer(1, dens, brule, trule, &x, t, false).unwrap()
    };
    let e: Vec<f64> = [d0, d0 / 2.0, d0 / 4.0].iter().map(|d| inside(*d) - limit).collect();
    // Two Richardson sweeps for an error expansion in powers of delta.
    let r1 = [2.0 * e[1] - e[0], 2.0 * e[2] - e[1]];
    let r2 = (4.0 * r1[1] - r1[0]) / 3.0;
    let scale = dens.max_abs();
    r2.abs() / scale
}

#[test]
fn double_layer_jump_on_the_interval() {
    let domain = Domain::Interval { a: 0.0, b: 1.0 };
    let brule = make_boundary_rule(&domain, 1).unwrap();
    let t = 0.5;
    let trule = TimeRule::new(t, TimeGrading::graded(16, 12)).unwrap();
    let dens = BoundaryDensity::sample(&brule, &trule, |p, tau| tau * (1.0 + p.x()) + tau * tau);
    for node in 0..2 {
        let err = jump_error(&brule, node, &dens, &trule, 0.02);
        assert!(err <= 1e-3, "endpoint {node}: {err:e}");
    }
}

#[test]
fn double_layer_jump_on_the_disk() {
    let domain = Domain::Disk { center: [0.0, 0.0], radius: 1.0 };
    let brule = make_boundary_rule(&domain, 64).unwrap();
    let t = 0.25;
    let trule = TimeRule::new(t, TimeGrading::graded(12, 10)).unwrap();
    let dens = BoundaryDensity::sample(&brule, &trule, |p, tau| tau * (1.0 + 0.5 * p.x() - 0.25 * p.y()));
    for node in (0..64).step_by(8) {
        let err = jump_error(&brule, node, &dens, &trule, 0.04);
        assert!(err <= 5e-3, "node {node}: {err:e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn volume_potential_is_linear_and_positive(
        m in 1u32..=3,
        a in -2.0f64..2.0,
        b in -2.0f64..2.0,
        c in -0.5f64..0.5,
        x in -0.9f64..0.9,
        t in 0.05f64..1.0,
    ) {
        let domain = Domain::Interval { a: -1.0, b: 1.0 };
        let vrule = make_volume_rule(&domain, 24).unwrap();
        let trule = TimeRule::new(t, TimeGrading::graded(6, 3)).unwrap();
        let f = |p: &SpaceVec, s: f64| (-(p.x() - c).powi(2) / 0.1).exp() * (1.0 + s);
        let g = |p: &SpaceVec, s: f64| (1.0 - p.x() * p.x()) * s;
        let order = ord(m, 1);
        let p = SpaceVec::d1(x);
        let vf = volume_potential(order, &FnSource::new(f), &domain, &vrule, &trule, &p, t).unwrap();
        let vg = volume_potential(order, &FnSource::new(g), &domain, &vrule, &trule, &p, t).unwrap();
        let both = FnSource::new(|q: &SpaceVec, s: f64| a * f(q, s) + b * g(q, s));
        let v = volume_potential(order, &both, &domain, &vrule, &trule, &p, t).unwrap();
        prop_assert!((v - (a * vf + b * vg)).abs() <= 1e-12 * (a.abs() * vf + b.abs() * vg + 1e-300));
        prop_assert!(vf > 0.0 && vg > 0.0);
    }
}
