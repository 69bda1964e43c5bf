use std::f64::consts::PI;

use proptest::prelude::*;
use qphase::linalg::{cis, OperatorMatrix, C64};
use qphase::oscillator::*;
use qphase::quadrature::adaptive_simpson;

fn fs(d: usize) -> FockSpace {
    FockSpace::new(d).unwrap()
}

fn i_times(a: &OperatorMatrix, c: f64) -> OperatorMatrix {
    a.scale(C64::new(0.0, c))
}

#[test]
fn sl2_structure_constants() {
    for d in [16usize, 32, 64] {
        let space = fs(d);
        let s = sl2_generators(space);
        let b = protected_block(space);
        assert!(b >= d / 2);
        let cut = |o: OperatorMatrix| o.truncate(b);
        assert!(cut(s.k.commutator(&s.h0)).max_abs_diff(&cut(i_times(&s.g, 2.0))) < 1e-10);
        assert!(cut(s.h0.commutator(&s.g)).max_abs_diff(&cut(i_times(&s.k, 2.0))) < 1e-10);
        assert!(cut(s.g.commutator(&s.k)).max_abs_diff(&cut(i_times(&s.h0, -2.0))) < 1e-10);
        for o in [&s.h0, &s.g, &s.k] {
            assert!(o.hermiticity_defect() < 1e-14);
        }
    }
}

#[test]
fn canonical_commutator_away_from_edge() {
    let space = fs(32);
    let qp = quadratures(space);
    let c = qp.q.commutator(&qp.p).truncate(31);
    assert!(c.max_abs_diff(&OperatorMatrix::identity(31).scale(C64::new(0.0, 1.0))) < 1e-13);
    let l = ladder_ops(space);
    assert!((&l.raise * &l.lower).max_abs_diff(&l.number) < 1e-13);
}

#[test]
fn hermite_closed_forms() {
    let g = |x: f64| PI.powf(-0.25) * (-0.5 * x * x).exp();
    let closed: [&dyn Fn(f64) -> f64; 4] = [
        &|x| g(x),
        &|x| 2f64.sqrt() * x * g(x),
        &|x| (2.0 * x * x - 1.0) / 2f64.sqrt() * g(x),
        &|x| (2.0 * x * x * x - 3.0 * x) / 3f64.sqrt() * g(x),
    ];
    for x in [-3.0, -1.2, 0.0, 0.4, 2.5] {
        let all = hermite_functions(4, x);
        for (n, f) in closed.iter().enumerate() {
            assert!((hermite_position_amplitude(n, x) - f(x)).abs() < 1e-14);
            assert!((all[n] - f(x)).abs() < 1e-14);
        }
    }
}

#[test]
fn hermite_orthonormality() {
    for n in 0..10 {
        for m in n..10 {
            let ip = adaptive_simpson(&|x| hermite_position_amplitude(n, x) * hermite_position_amplitude(m, x), -12.0, 12.0, 1e-12);
            let want = if n == m { 1.0 } else { 0.0 };
            assert!((ip - want).abs() < 1e-9, "({n},{m}): {ip}");
        }
    }
}

#[test]
fn coherent_density_is_displaced_gaussian() {
    let amp = CoherentAmplitude::from_qp(1.3, -0.7);
    let psi = coherent_state(fs(64), amp).unwrap();
    for x in [-2.0, -0.5, 0.0, 1.3, 3.0] {
        let want = (-(x - 1.3f64).powi(2)).exp() / PI.sqrt();
        assert!((position_density(&psi, x) - want).abs() < 1e-12);
    }
    assert!((amp.q() - 1.3).abs() < 1e-15 && (amp.p() + 0.7).abs() < 1e-15);
}

#[test]
fn overlap_phase_example() {
    let a = CoherentAmplitude::from_qp(1.0, 0.0);
    let b = CoherentAmplitude::from_qp(0.0, 1.0);
    let ov = coherent_overlap(a, b);
    assert!((ov - cis(0.5) * (-0.5f64).exp()).norm() < 1e-15);
}

#[test]
fn truncation_guards() {
    let space = fs(64);
    assert!(coherent_state(space, CoherentAmplitude::new(C64::from(10.0))).is_err());
    assert!(displacement(space, C64::from(10.0)).is_err());
    assert!(fs(4).require_claim_cutoff().is_err());
    assert!(coherent_rotation_check(fs(4), CoherentAmplitude::new(C64::from(0.1)), 0.3).is_err());
}

#[test]
fn scaled_vacuum_matches_normalized_gaussian() {
    let space = fs(128);
    let vac = space.number_state(0).unwrap();
    for xi in [0.5, 0.8, 1.25, 2.0] {
        let img = scale_operator(space, xi).unwrap().apply(&vac);
        for x in [-2.5, -1.0, 0.0, 0.3, 1.7] {
            let want = xi.sqrt() * PI.powf(-0.25) * (-0.5 * xi * xi * x * x).exp();
            let got = position_wavefunction(&img, x);
            assert!((got - C64::from(want)).norm() < 1e-6, "xi {xi}, x {x}: {got} vs {want}");
        }
    }
    assert!(scale_operator(space, 0.0).is_err());
}

#[test]
fn scale_conjugates_position() {
    let space = fs(96);
    let s = scale_operator(space, 1.5).unwrap();
    let q = quadratures(space).q;
    // Squeezing leaks weight past the cutoff; the low block stays exact.
    let conj = (&(&s * &q) * &s.adjoint()).truncate(20);
    assert!(conj.max_abs_diff(&q.scale_re(1.5).truncate(20)) < 1e-12);
}

#[test]
fn displaced_number_states_match_dense_displacement() {
    let space = fs(64);
    let z = C64::new(0.8, -0.6);
    let d = displacement(space, z).unwrap();
    let states = displaced_number_states(64, z, 6);
    for (n, s) in states.iter().enumerate() {
        let dense = d.apply(&space.number_state(n).unwrap());
        assert!(s.max_abs_diff(&dense) < 1e-10, "n = {n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn analytic_coherent_state_is_displaced_vacuum(re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let space = fs(64);
        let z = C64::new(re, im);
        let analytic = coherent_state(space, CoherentAmplitude::new(z)).unwrap();
        let dense = displacement(space, z).unwrap().apply(&space.number_state(0).unwrap());
        prop_assert!(analytic.max_abs_diff(&dense) < 1e-10);
        let l = ladder_ops(space);
        let eig = l.lower.apply(&analytic).sub(&analytic.scaled(z));
        prop_assert!(eig.norm() < 1e-8);
    }

    #[test]
    fn overlap_matches_truncated_inner_product(q1 in -2.5f64..2.5, p1 in -2.5f64..2.5, q2 in -2.5f64..2.5, p2 in -2.5f64..2.5) {
        let space = fs(64);
        let a = CoherentAmplitude::from_qp(q1, p1);
        let b = CoherentAmplitude::from_qp(q2, p2);
        let ip = coherent_state(space, a).unwrap().inner(&coherent_state(space, b).unwrap());
        prop_assert!((ip - coherent_overlap(a, b)).norm() < 1e-12);
    }

    #[test]
    fn free_rotation_keeps_coherence(re in -2.0f64..2.0, im in -2.0f64..2.0, theta in -7.0f64..7.0) {
        let infid = coherent_rotation_check(fs(64), CoherentAmplitude::new(C64::new(re, im)), theta).unwrap();
        prop_assert!(infid.abs() < 1e-12);
    }

    #[test]
    fn fractional_fourier_is_unitary_group(a in -4.0f64..4.0, b in -4.0f64..4.0) {
        let space = fs(24);
        let fa = fractional_fourier(space, a);
        let fb = fractional_fourier(space, b);
        prop_assert!((&fa * &fb).max_abs_diff(&fractional_fourier(space, a + b)) < 1e-12);
        prop_assert!(fa.unitarity_defect() < 1e-13);
    }
}
