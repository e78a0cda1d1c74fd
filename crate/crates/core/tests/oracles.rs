use heatpot::greens::{compare_theorem2, default_theorem2_probes};
use heatpot::oracle::{compare_cascade, seeded_probes, ORACLE_PROBES};
use heatpot::scenario::Scenario;
use heatpot::source::{BoundaryDataSpec, GaussianBump, SourceSpec};
use proptest::prelude::*;

#[test]
fn cascade_matches_direct_potential() {
    for name in ["m2_interval_bump", "m3_interval_bump", "m2_rect_bump"] {
        let sc = Scenario::bundled(name).unwrap();
        let probes = seeded_probes(&sc.domain, sc.horizon, sc.seed, ORACLE_PROBES).unwrap();
        let cmp = compare_cascade(&sc, &probes).unwrap();
        assert_eq!(cmp.probes.len(), 10);
        assert!(cmp.max_rel_diff <= 1e-3, "{name}: {}", cmp.max_rel_diff);
    }
    let m1 = Scenario::bundled("m1_interval_bump").unwrap();
    assert!(compare_cascade(&m1, &[]).is_err());
}

#[test]
fn green_solution_matches_crank_nicolson() {
    let zero_phi = Scenario::bundled("m1_interval_bump").unwrap();
    let probes = default_theorem2_probes(&zero_phi);
    assert_eq!(probes.len(), 9);
    let cmp = compare_theorem2(&zero_phi, &probes).unwrap();
    assert!(cmp.max_abs_diff <= 1e-3, "{}", cmp.max_abs_diff);
    assert_eq!(cmp.matches_potential, Some(true));

    let ramp = Scenario::bundled("m1_interval_ramp_phi").unwrap();
    let cmp = compare_theorem2(&ramp, &default_theorem2_probes(&ramp)).unwrap();
    assert!(cmp.max_abs_diff <= 1e-3, "{}", cmp.max_abs_diff);
    assert_eq!(cmp.matches_potential, None);

    // Source and boundary data together.
    let mut both = ramp.clone();
    both.source = SourceSpec::GaussianBump(GaussianBump {
        center: vec![0.5],
        width: 0.08,
        amplitude: 2.0,
        time_profile: Default::default(),
    });
    let cmp = compare_theorem2(&both, &default_theorem2_probes(&both)).unwrap();
    assert!(cmp.max_abs_diff <= 2e-3, "{}", cmp.max_abs_diff);

    let m2 = Scenario::bundled("m2_interval_bump").unwrap();
    assert!(compare_theorem2(&m2, &default_theorem2_probes(&m2)).is_err());
}

#[test]
fn green_solution_on_the_rectangle() {
    let mut sc = Scenario::bundled("m1_rect_bump").unwrap();
    let cmp = compare_theorem2(&sc, &default_theorem2_probes(&sc)).unwrap();
    assert!(cmp.max_abs_diff <= 1e-3, "{}", cmp.max_abs_diff);
    assert_eq!(cmp.matches_potential, Some(true));
    // Boundary data needs a finer time rule than the bundled one.
    sc.boundary_data = BoundaryDataSpec::Ramp { amplitude: 0.5, rise_time: 0.1 };
    sc.resolution.time_nodes = 8;
    sc.resolution.time_levels = 6;
    let probes: Vec<_> = default_theorem2_probes(&sc).into_iter().skip(3).step_by(2).collect();
    let cmp = compare_theorem2(&sc, &probes).unwrap();
    assert!(cmp.max_abs_diff <= 1e-3, "{}", cmp.max_abs_diff);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn seeded_probes_are_reproducible_and_interior(seed in any::<u64>(), horizon in 0.05f64..2.0) {
        let sc = Scenario::bundled("m2_rect_bump").unwrap();
        let a = seeded_probes(&sc.domain, horizon, seed, ORACLE_PROBES).unwrap();
        let b = seeded_probes(&sc.domain, horizon, seed, ORACLE_PROBES).unwrap();
        prop_assert_eq!(&a, &b);
        for (x, t) in &a {
            prop_assert!(sc.domain.is_interior(x).unwrap());
            prop_assert!(*t >= 0.2 * horizon && *t <= horizon);
        }
    }
}
