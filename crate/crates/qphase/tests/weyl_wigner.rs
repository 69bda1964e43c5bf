use proptest::prelude::*;
use qphase::linalg::{random_hermitian, OperatorMatrix, C64};
use qphase::oscillator::FockSpace;
use qphase::qspace::*;
use qphase::weyl_wigner::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn basis(n: usize) -> WWBasis {
    WWBasis::new(FiniteSpace::new(n).unwrap()).unwrap()
}

fn real_map(map: &WignerMap) -> Vec<Vec<f64>> {
    (0..map.dim).map(|j| (0..map.dim).map(|k| map.get(j, k).re).collect()).collect()
}

fn assert_map(map: &WignerMap, want: &[[f64; 3]; 3]) {
    for j in 0..3 {
        for k in 0..3 {
            let v = map.get(j, k);
            assert!((v.re - want[j][k]).abs() < 1e-12 && v.im.abs() < 1e-12, "({j},{k}): {v} vs {}", want[j][k]);
        }
    }
}

#[test]
fn even_dimension_is_rejected() {
    for n in [2, 4, 6] {
        assert!(WWBasis::new(FiniteSpace::new(n).unwrap()).is_err());
        assert!(ww_point_operator(FiniteSpace::new(n).unwrap(), 0, 0).is_err());
    }
}

#[test]
fn point_operator_identities() {
    for n in [3usize, 5, 7] {
        let b = basis(n);
        let s = b.space();
        let id = OperatorMatrix::identity(n);
        let f2 = finite_fourier(s).pow(2);
        assert!(b.point(0, 0).max_abs_diff(&f2.scale_re(2.0)) < 1e-13);
        for j in 0..n as i64 {
            for k in 0..n as i64 {
                let d = b.point(j, k);
                assert!(d.hermiticity_defect() < 1e-13);
                assert!((d * d).max_abs_diff(&id.scale_re(4.0)) < 1e-12);
                assert!((d.trace() - C64::from(2.0)).norm() < 1e-12);
                let mirrored = &(&f2 * d) * &f2;
                assert!(mirrored.max_abs_diff(b.point(-j, -k)) < 1e-12);
            }
        }
    }
}

#[test]
fn orthogonality_constant_is_four_n() {
    for n in [3usize, 5, 7, 9] {
        let b = basis(n);
        let c = b.orthogonality_constant();
        assert!((c - 4.0 * n as f64).abs() < 1e-10, "n = {n}: {c}");
        let pts = b.points();
        for (a, pa) in pts.iter().enumerate() {
            for (bb, pb) in pts.iter().enumerate() {
                let ip = pa.hs_inner(pb);
                let want = if a == bb { c } else { 0.0 };
                assert!((ip - C64::from(want)).norm() < 1e-11);
            }
        }
    }
}

#[test]
fn completeness_sums() {
    for n in [3usize, 5, 7] {
        let b = basis(n);
        let total = b.points().iter().fold(OperatorMatrix::zeros(n), |acc, d| &acc + d);
        assert!(total.max_abs_diff(&OperatorMatrix::identity(n).scale_re(2.0 * n as f64)) < 1e-11);
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let a = random_hermitian(n, &mut rng);
        let sandwich = b.points().iter().fold(OperatorMatrix::zeros(n), |acc, d| &acc + &(&(d * &a) * d));
        let want = OperatorMatrix::identity(n).scale(a.trace() * (4.0 * n as f64));
        assert!(sandwich.max_abs_diff(&want) < 1e-10);
    }
}

#[test]
fn translation_covariance() {
    let n = 5;
    let b = basis(n);
    let s = b.space();
    let v = position_translation_op(s);
    let u = momentum_phase_op(s);
    for m in 0..n as i64 {
        for j in 0..n as i64 {
            for k in 0..n as i64 {
                let shifted = &(&unitary_pow(&v, -m) * b.point(j, k)) * &unitary_pow(&v, m);
                assert!(shifted.max_abs_diff(b.point(j, k + m)) < 1e-12);
                let boosted = &(&unitary_pow(&u, m) * b.point(j, k)) * &unitary_pow(&u, -m);
                assert!(boosted.max_abs_diff(b.point(j + m, k)) < 1e-12);
            }
        }
    }
}

#[test]
fn three_dimensional_oracle_maps() {
    let b = basis(3);
    let s = b.space();
    let u0 = ww_transform(&b, &s.position_ket(0).projector()).unwrap();
    assert_map(&u0, &[[2.0, 0.0, 0.0], [2.0, 0.0, 0.0], [2.0, 0.0, 0.0]]);
    assert!(wigner_negativity(&u0) < 1e-12);
    let v0 = ww_transform(&b, &s.momentum_ket(0).projector()).unwrap();
    assert_map(&v0, &[[2.0, 2.0, 2.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]);
    let plus = s.position_ket(0).add(&s.position_ket(1)).renormalize().unwrap();
    let m = ww_transform(&b, &plus.projector()).unwrap();
    assert_map(&m, &[[1.0, 1.0, 2.0], [1.0, 1.0, -1.0], [1.0, 1.0, -1.0]]);
    assert!((wigner_negativity(&m) - 2.0).abs() < 1e-12);
}

#[test]
fn csv_layout() {
    let b = basis(3);
    let map = ww_transform(&b, &OperatorMatrix::identity(3)).unwrap();
    let text = map.to_csv_string().unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("j,k,re,im"));
    assert_eq!(text.lines().count(), 10);
    assert!(ww_transform(&b, &OperatorMatrix::identity(5)).is_err());
}

#[test]
fn classical_limit_on_quadratics() {
    let q = QuadraticObservable::position();
    let p = QuadraticObservable::momentum();
    let h = QuadraticObservable::oscillator_energy();
    let qp = QuadraticObservable::from_terms(&[(1, 1, 1.0)]).unwrap();
    let q2 = QuadraticObservable::from_terms(&[(2, 0, 1.0)]).unwrap();
    let grid = square_grid(3.0, 7);
    for (f, g, bracket) in [
        (q, p, Box::new(|_: f64, _: f64| 1.0) as Box<dyn Fn(f64, f64) -> f64>),
        (h, q, Box::new(|_: f64, p: f64| -p)),
        (qp, q2, Box::new(|q: f64, _: f64| -2.0 * q * q)),
    ] {
        let report = classical_limit_check(&f, &g, &grid, 64).unwrap();
        assert!(report.max_abs_diff < 1e-5, "{}", report.max_abs_diff);
        for s in &report.samples {
            assert!((s.poisson - bracket(s.q, s.p)).abs() < 1e-12);
        }
    }
}

#[test]
fn classical_limit_guards() {
    assert!(QuadraticObservable::from_terms(&[(3, 0, 1.0)]).is_err());
    assert!(QuadraticObservable::from_terms(&[(1, 2, 1.0)]).is_err());
    let q = QuadraticObservable::position();
    assert!(classical_limit_check(&q, &q, &[(0.0, 0.0)], 4).is_err());
    assert!(classical_limit_check(&q, &q, &[(20.0, 0.0)], 64).is_err());
}

#[test]
fn symbols_of_quantized_quadratics() {
    let space = FockSpace::new(64).unwrap();
    let h = QuadraticObservable::oscillator_energy();
    let mix = QuadraticObservable::from_terms(&[(2, 0, 0.5), (1, 1, -1.0), (0, 1, 2.0), (0, 0, 0.25)]).unwrap();
    for o in [h, mix] {
        let op = o.quantize(space);
        for &(q, p) in &square_grid(2.0, 5) {
            assert!((weyl_symbol(&op, q, p) - C64::from(o.eval(q, p))).norm() < 1e-6);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn round_trip_recovers_operator(idx in 0usize..4, seed in any::<u64>()) {
        let n = [3usize, 5, 7, 9][idx];
        let b = basis(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_hermitian(n, &mut rng);
        let map = ww_transform(&b, &a).unwrap();
        prop_assert!(map.values.iter().all(|v| v.im.abs() < 1e-12));
        prop_assert!(ww_inverse(&b, &map).unwrap().max_abs_diff(&a) < 1e-12);
    }

    #[test]
    fn state_maps_sum_to_two_n(idx in 0usize..3, seed in any::<u64>()) {
        let n = [3usize, 5, 7][idx];
        let b = basis(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = qphase::linalg::random_state(n, &mut rng);
        let map = ww_transform(&b, &psi.projector()).unwrap();
        let total: f64 = real_map(&map).iter().flatten().sum();
        prop_assert!((total - 2.0 * n as f64).abs() < 1e-10);
    }
}
