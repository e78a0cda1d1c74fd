use heatpot_wasm::profiles::{kernel_profile, potential_profile, ramp_profile};

#[test]
fn kernel_profile_is_symmetric_and_normalized() {
    let n = 801;
    let v = kernel_profile(2, 0.05, 2.0, n).unwrap();
    for i in 0..n {
        assert!((v[i] - v[n - 1 - i]).abs() <= 1e-14 * v[i].abs(), "{i}");
    }
    // Trapezoid mass of eps_{2,1}(., t) is t.
    let h = 4.0 / (n - 1) as f64;
    let mass: f64 = v.iter().sum::<f64>() * h;
    assert!((mass - 0.05).abs() < 1e-9, "{mass}");
    assert!(kernel_profile(1, -1.0, 1.0, 5).unwrap().iter().all(|x| *x == 0.0));
    assert!(kernel_profile(25, 1.0, 1.0, 5).is_err());
    assert!(kernel_profile(1, 1.0, 1.0, 1).is_err());
}

#[test]
fn potential_profile_peaks_in_the_centre() {
    let v = potential_profile(2, 0.1, 0.3, 41).unwrap();
    let peak = v.iter().cloned().fold(f64::MIN, f64::max);
    assert_eq!(v[20], peak);
    assert!(v.iter().all(|x| *x >= 0.0));
    assert!(potential_profile(1, 0.5, 0.3, 41).is_err());
    assert_eq!(potential_profile(1, 0.1, 0.0, 3).unwrap(), vec![0.0; 3]);
}

#[test]
fn ramp_profile_matches_boundary_data() {
    // Boundary value of the boundary term is -phi(t); phi = 1 once the ramp has risen.
    let v = ramp_profile(1.0, 0.2, 0.5, 21).unwrap();
    assert!((v[0] + 1.0).abs() < 1e-10, "{}", v[0]);
    assert!((v[20] + 1.0).abs() < 1e-10, "{}", v[20]);
    assert!(v.iter().all(|x| *x <= 0.0 && *x >= -1.0 - 1e-10));
    assert!(ramp_profile(1.0, 0.0, 0.5, 21).is_err());
}
