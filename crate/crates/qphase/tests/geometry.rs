use std::f64::consts::PI;

use proptest::prelude::*;
use qphase::geometry::*;
use qphase::linalg::{random_hermitian, random_state, seeded_rng, wrap_angle, StateVector, C64};

fn bloch(r: &RayPoint) -> [f64; 3] {
    r.bloch_vector().unwrap()
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Signed spherical excess from the three arc lengths, oriented by the triple product.
fn lhuilier(n: [[f64; 3]; 3]) -> f64 {
    let arc = |a: [f64; 3], b: [f64; 3]| dot(a, b).clamp(-1.0, 1.0).acos();
    let (a, b, c) = (arc(n[1], n[2]), arc(n[2], n[0]), arc(n[0], n[1]));
    let s = 0.5 * (a + b + c);
    let t = (0.5 * s).tan() * (0.5 * (s - a)).tan() * (0.5 * (s - b)).tan() * (0.5 * (s - c)).tan();
    let excess = 4.0 * t.max(0.0).sqrt().atan();
    let cross = [n[1][1] * n[2][2] - n[1][2] * n[2][1], n[1][2] * n[2][0] - n[1][0] * n[2][2], n[1][0] * n[2][1] - n[1][1] * n[2][0]];
    excess * dot(n[0], cross).signum()
}

#[test]
fn solid_angle_matches_lhuilier() {
    let mut rng = seeded_rng(2024);
    let mut checked = 0;
    while checked < 200 {
        let v: Vec<RayPoint> = (0..3).map(|_| RayPoint::new(random_state(2, &mut rng)).unwrap()).collect();
        let n = [bloch(&v[0]), bloch(&v[1]), bloch(&v[2])];
        // Nearly antipodal vertices make the minor arcs ill-defined.
        if (0..3).any(|i| dot(n[i], n[(i + 1) % 3]) < -0.999) {
            continue;
        }
        let tri = GeodesicTriangle::new(v[0].clone(), v[1].clone(), v[2].clone()).unwrap();
        let omega = solid_angle(&tri).unwrap();
        assert!((omega - lhuilier(n)).abs() < 1e-8, "{omega} vs {}", lhuilier(n));
        let theta = bargmann_invariant(&tri).unwrap();
        assert!(wrap_angle(theta + 0.5 * omega).abs() < 1e-9);
        checked += 1;
    }
}

#[test]
fn survey_is_reproducible_and_tight() {
    let a = triangle_survey(500, 7).unwrap();
    let b = triangle_survey(500, 7).unwrap();
    assert_eq!(a.max_residual, b.max_residual);
    assert!(a.max_residual < 1e-9);
    assert!(triangle_survey(0, 7).is_err());
}

#[test]
fn reversed_orientation_flips_the_phase() {
    let mut rng = seeded_rng(11);
    for _ in 0..20 {
        let v: Vec<RayPoint> = (0..3).map(|_| RayPoint::new(random_state(3, &mut rng)).unwrap()).collect();
        let fwd = bargmann_invariant(&GeodesicTriangle::new(v[0].clone(), v[1].clone(), v[2].clone()).unwrap()).unwrap();
        let back = bargmann_invariant(&GeodesicTriangle::new(v[0].clone(), v[2].clone(), v[1].clone()).unwrap()).unwrap();
        assert!(wrap_angle(fwd + back).abs() < 1e-12);
    }
}

#[test]
fn reference_probability_peaks_at_eta() {
    let mut rng = seeded_rng(5);
    let a0 = RayPoint::new(random_state(3, &mut rng)).unwrap();
    let a1 = RayPoint::new(random_state(3, &mut rng)).unwrap();
    let theta = 1.1;
    let steps = 3600;
    let (best, _) = (0..steps)
        .map(|i| {
            let phi = -PI + 2.0 * PI * i as f64 / steps as f64;
            (phi, reference_probability(&a0, &a1, theta, phi).unwrap().trace)
        })
        .fold((0.0, f64::MIN), |acc, x| if x.1 > acc.1 { x } else { acc });
    let eta = reference_probability(&a0, &a1, theta, 0.0).unwrap().eta;
    assert!(wrap_angle(best - eta).abs() < 2.0 * PI / steps as f64 + 1e-12);
}

#[test]
fn speed_residual_is_second_order() {
    let mut rng = seeded_rng(3);
    let h = random_hermitian(4, &mut rng);
    let psi = random_state(4, &mut rng);
    let r: Vec<f64> = [1e-2, 5e-3, 2.5e-3].iter().map(|&dt| speed_equals_uncertainty(&h, &psi, dt).unwrap().residual()).collect();
    for w in r.windows(2) {
        let ratio = w[0] / w[1];
        assert!((3.5..4.5).contains(&ratio), "{r:?}");
    }
    assert!(speed_equals_uncertainty(&h, &psi, 0.0).is_err());
}

#[test]
fn orthogonal_rays_have_no_relative_phase() {
    let a = RayPoint::new(StateVector::basis(3, 0)).unwrap();
    let b = RayPoint::new(StateVector::basis(3, 2)).unwrap();
    assert!(matches!(pancharatnam_phase(&a, &b), Err(qphase::Error::OrthogonalSelection(_))));
    assert!(bargmann_invariant(&GeodesicTriangle::new(a.clone(), b, a.clone()).unwrap()).is_err());
    assert!(RayPoint::new(StateVector::basis(2, 0).scaled(C64::from(2.0))).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bargmann_phase_is_gauge_invariant(seed in any::<u64>(), dim in 2usize..6, c0 in -7.0f64..7.0, c1 in -7.0f64..7.0, c2 in -7.0f64..7.0) {
        let mut rng = seeded_rng(seed);
        let v: Vec<RayPoint> = (0..3).map(|_| RayPoint::new(random_state(dim, &mut rng)).unwrap()).collect();
        let tri = GeodesicTriangle::new(v[0].clone(), v[1].clone(), v[2].clone()).unwrap();
        let moved = GeodesicTriangle::new(v[0].rephased(c0), v[1].rephased(c1), v[2].rephased(c2)).unwrap();
        if let Ok(theta) = bargmann_invariant(&tri) {
            prop_assert!(wrap_angle(theta - bargmann_invariant(&moved).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn pancharatnam_phase_tracks_rephasing(seed in any::<u64>(), chi in -3.0f64..3.0) {
        let mut rng = seeded_rng(seed);
        let a = RayPoint::new(random_state(3, &mut rng)).unwrap();
        let b = RayPoint::new(random_state(3, &mut rng)).unwrap();
        let before = pancharatnam_phase(&a, &b).unwrap();
        let after = pancharatnam_phase(&a, &b.rephased(chi)).unwrap();
        prop_assert!(wrap_angle(after - before - chi).abs() < 1e-12);
    }

    #[test]
    fn reference_formula_matches_trace(seed in any::<u64>(), theta in 0.0f64..PI, phi in -PI..PI) {
        let mut rng = seeded_rng(seed);
        let a0 = RayPoint::new(random_state(3, &mut rng)).unwrap();
        let a1 = RayPoint::new(random_state(3, &mut rng)).unwrap();
        let p = reference_probability(&a0, &a1, theta, phi).unwrap();
        prop_assert!((p.formula - p.trace).abs() < 1e-12);
    }

    #[test]
    fn fubini_study_ignores_phase_and_scales(seed in any::<u64>(), chi in -3.0f64..3.0) {
        let mut rng = seeded_rng(seed);
        let psi = random_state(4, &mut rng);
        let d = random_state(4, &mut rng).scaled(C64::from(1e-3));
        let base = fubini_study_step(&psi, &d).unwrap();
        let spun = fubini_study_step(&psi.scaled(C64::from_polar(1.0, chi)), &d.scaled(C64::from_polar(1.0, chi))).unwrap();
        prop_assert!((base - spun).abs() < 1e-18);
        prop_assert!(base >= -1e-18);
        let drift = fubini_study_step(&psi, &psi.scaled(C64::new(0.0, 1e-3))).unwrap();
        prop_assert!(drift.abs() < 1e-18);
    }
}
