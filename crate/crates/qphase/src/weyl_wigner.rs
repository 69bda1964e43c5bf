//! Discrete Weyl-Wigner map on odd-dimensional spaces, and a classical-limit
//! check of the Moyal bracket on the truncated oscillator.
//!
//! Point operators are `Delta(j,k) = 2 V^{-k} U^{2j} V^{-k} F^2`, each
//! Hermitian with trace 2 and square `4 I`. They are orthogonal under the
//! Hilbert-Schmidt product with a common norm `c_N = tr(Delta^2)`, so
//! `A = (1/c_N) sum_{jk} tr(Delta(j,k) A) Delta(j,k)`.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{OperatorMatrix, C64, ZERO};
use crate::oscillator::{displaced_number_states, quadrature_polynomial, CoherentAmplitude, FockSpace};
use crate::qspace::{finite_fourier, momentum_phase_op, position_translation_op, unitary_pow, FiniteSpace};

fn require_odd(space: FiniteSpace) -> Result<()> {
    if space.dim() % 2 == 0 {
        return Err(Error::InvalidDimension { dim: space.dim(), reason: "Weyl-Wigner point operators need odd N".into() });
    }
    Ok(())
}

/// `Delta(j, k) = 2 V^{-k} U^{2j} V^{-k} F^2`.
pub fn ww_point_operator(space: FiniteSpace, j: i64, k: i64) -> Result<OperatorMatrix> {
    require_odd(space)?;
    let v = position_translation_op(space);
    let u = momentum_phase_op(space);
    let f2 = finite_fourier(space).pow(2);
    let vk = unitary_pow(&v, -k);
    let u2j = unitary_pow(&u, 2 * j);
    Ok((&(&(&vk * &u2j) * &vk) * &f2).scale_re(2.0))
}

/// All `N^2` point operators, indexed `j * N + k`.
#[derive(Clone, Debug)]
pub struct WWBasis {
    space: FiniteSpace,
    points: Vec<OperatorMatrix>,
}

impl WWBasis {
    pub fn new(space: FiniteSpace) -> Result<Self> {
        require_odd(space)?;
        let n = space.dim() as i64;
        let mut points = Vec::with_capacity((n * n) as usize);
        for j in 0..n {
            for k in 0..n {
                points.push(ww_point_operator(space, j, k)?);
            }
        }
        Ok(Self { space, points })
    }

    pub fn space(&self) -> FiniteSpace {
        self.space
    }

    pub fn point(&self, j: i64, k: i64) -> &OperatorMatrix {
        let n = self.space.dim();
        &self.points[self.space.wrap(j) * n + self.space.wrap(k)]
    }

    pub fn points(&self) -> &[OperatorMatrix] {
        &self.points
    }

    /// `tr(Delta(0,0)^dagger Delta(0,0))`, the common Hilbert-Schmidt norm.
    pub fn orthogonality_constant(&self) -> f64 {
        self.points[0].hs_inner(&self.points[0]).re
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WignerMap {
    pub dim: usize,
    /// Row-major in `j`: entry `j * dim + k`.
    pub values: Vec<C64>,
}

impl WignerMap {
    pub fn get(&self, j: usize, k: usize) -> C64 {
        self.values[j * self.dim + k]
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["j", "k", "re", "im"])?;
        for j in 0..self.dim {
            for k in 0..self.dim {
                let v = self.get(j, k);
                wr.write_record(&[j.to_string(), k.to_string(), format!("{:.15e}", v.re), format!("{:.15e}", v.im)])?;
            }
        }
        wr.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
    }
}

/// `values(j,k) = tr(Delta(j,k)^dagger A)`.
pub fn ww_transform(basis: &WWBasis, a: &OperatorMatrix) -> Result<WignerMap> {
    let n = basis.space.dim();
    if a.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: a.dim() });
    }
    Ok(WignerMap { dim: n, values: basis.points.iter().map(|d| d.hs_inner(a)).collect() })
}

pub fn ww_inverse(basis: &WWBasis, map: &WignerMap) -> Result<OperatorMatrix> {
    let n = basis.space.dim();
    if map.dim != n || map.values.len() != n * n {
        return Err(Error::DimensionMismatch { expected: n, found: map.dim });
    }
    let c = basis.orthogonality_constant();
    let mut acc = OperatorMatrix::zeros(n);
    for (d, v) in basis.points.iter().zip(&map.values) {
        acc = &acc + &d.scale(*v);
    }
    Ok(acc.scale_re(1.0 / c))
}

/// Sum of the negative parts of the real values.
pub fn wigner_negativity(map: &WignerMap) -> f64 {
    map.values.iter().map(|v| (-v.re).max(0.0)).sum()
}

/// Real quadratic phase-space function
/// `qq q^2 + pp p^2 + qp q p + q q + p p + c`, quantized symmetrically.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QuadraticObservable {
    pub qq: f64,
    pub pp: f64,
    pub qp: f64,
    pub q: f64,
    pub p: f64,
    pub c: f64,
}

impl QuadraticObservable {
    /// From monomials `(deg_q, deg_p, coefficient)`; degree above two is rejected.
    pub fn from_terms(terms: &[(u32, u32, f64)]) -> Result<Self> {
        let mut o = Self::default();
        for &(dq, dp, c) in terms {
            match (dq, dp) {
                (0, 0) => o.c += c,
                (1, 0) => o.q += c,
                (0, 1) => o.p += c,
                (2, 0) => o.qq += c,
                (0, 2) => o.pp += c,
                (1, 1) => o.qp += c,
                _ => return Err(Error::InvalidParameter(format!("monomial q^{dq} p^{dp} is not quadratic"))),
            }
        }
        Ok(o)
    }

    pub fn position() -> Self {
        Self { q: 1.0, ..Self::default() }
    }

    pub fn momentum() -> Self {
        Self { p: 1.0, ..Self::default() }
    }

    /// `(q^2 + p^2)/2`.
    pub fn oscillator_energy() -> Self {
        Self { qq: 0.5, pp: 0.5, ..Self::default() }
    }

    pub fn eval(&self, q: f64, p: f64) -> f64 {
        self.qq * q * q + self.pp * p * p + self.qp * q * p + self.q * q + self.p * p + self.c
    }

    pub fn grad(&self, q: f64, p: f64) -> (f64, f64) {
        (2.0 * self.qq * q + self.qp * p + self.q, 2.0 * self.pp * p + self.qp * q + self.p)
    }

    /// Symmetric (Weyl) quantization on the truncated Fock space.
    pub fn quantize(&self, space: FockSpace) -> OperatorMatrix {
        let s = *self;
        quadrature_polynomial(space, move |qp, id| {
            let sym = (&qp.q * &qp.p + &qp.p * &qp.q).scale_re(0.5);
            (&(&qp.q * &qp.q).scale_re(s.qq) + &(&qp.p * &qp.p).scale_re(s.pp))
                + sym.scale_re(s.qp)
                + qp.q.scale_re(s.q)
                + qp.p.scale_re(s.p)
                + id.scale_re(s.c)
        })
    }
}

/// Poisson bracket `f_q g_p - f_p g_q`.
pub fn poisson_bracket(f: &QuadraticObservable, g: &QuadraticObservable, q: f64, p: f64) -> f64 {
    let (fq, fp) = f.grad(q, p);
    let (gq, gp) = g.grad(q, p);
    fq * gp - fp * gq
}

// Regularization parameters for the Weyl symbol; see `weyl_symbol`.
const SYMBOL_R: [f64; 2] = [0.1, 0.3];

/// Weyl symbol of a Fock-space operator at `(q, p)`.
///
/// The displaced parity operator has no trace-class truncation, so the
/// symbol is taken from `T_r = (1 + r) D(z) (-r)^N D(z)^dagger`, whose
/// phase-space kernel is a Gaussian of variance `(1 - r)/(2(1 + r))`
/// centred at `(q, p)`. For polynomial symbols of degree at most two the
/// smoothed value is affine in that variance, and two values of `r`
/// extrapolate to zero width exactly.
pub fn weyl_symbol(c: &OperatorMatrix, q: f64, p: f64) -> C64 {
    let z = CoherentAmplitude::from_qp(q, p).z;
    let dim = c.dim();
    let width = |r: f64| (1.0 - r) / (1.0 + r);
    let smoothed = |r: f64, states: &[crate::linalg::StateVector]| -> C64 {
        let mut acc = ZERO;
        let mut w = 1.0;
        for s in states {
            acc += c.expectation(s) * w;
            w *= -r;
        }
        acc * (1.0 + r)
    };
    // Enough terms for r^n below double precision.
    let count = ((-37.0) / SYMBOL_R[1].ln()).ceil() as usize;
    let states = displaced_number_states(dim, z, count.min(dim));
    let (r1, r2) = (SYMBOL_R[0], SYMBOL_R[1]);
    let (t1, t2) = (width(r1), width(r2));
    let (f1, f2) = (smoothed(r1, &states), smoothed(r2, &states));
    (f1 * t2 - f2 * t1) / (t2 - t1)
}

#[derive(Clone, Debug, Serialize)]
pub struct BracketSample {
    pub q: f64,
    pub p: f64,
    pub moyal: f64,
    pub poisson: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassicalLimitReport {
    pub samples: Vec<BracketSample>,
    pub max_abs_diff: f64,
}

/// Compares the Weyl symbol of `-i [F, G]` with the Poisson bracket on a grid.
pub fn classical_limit_check(
    f: &QuadraticObservable,
    g: &QuadraticObservable,
    grid: &[(f64, f64)],
    cutoff: usize,
) -> Result<ClassicalLimitReport> {
    let space = FockSpace::new(cutoff)?;
    space.require_claim_cutoff()?;
    for &(q, p) in grid {
        space.check_faithful(CoherentAmplitude::from_qp(q, p).z)?;
    }
    let s = *f;
    let t = *g;
    let bracket = quadrature_polynomial(space, move |qp, id| {
        let quant = |o: &QuadraticObservable| {
            let sym = (&qp.q * &qp.p + &qp.p * &qp.q).scale_re(0.5);
            (&(&qp.q * &qp.q).scale_re(o.qq) + &(&qp.p * &qp.p).scale_re(o.pp))
                + sym.scale_re(o.qp)
                + qp.q.scale_re(o.q)
                + qp.p.scale_re(o.p)
                + id.scale_re(o.c)
        };
        quant(&s).commutator(&quant(&t)).scale(C64::new(0.0, -1.0))
    });
    let mut samples = Vec::with_capacity(grid.len());
    let mut max_abs_diff: f64 = 0.0;
    for &(q, p) in grid {
        let m = weyl_symbol(&bracket, q, p);
        let pb = poisson_bracket(f, g, q, p);
        max_abs_diff = max_abs_diff.max((m - pb).norm());
        samples.push(BracketSample { q, p, moyal: m.re, poisson: pb });
    }
    Ok(ClassicalLimitReport { samples, max_abs_diff })
}

/// Square grid `[-half, half]^2` with `n` points per axis.
pub fn square_grid(half: f64, n: usize) -> Vec<(f64, f64)> {
    let step = if n > 1 { 2.0 * half / (n - 1) as f64 } else { 0.0 };
    let axis: Vec<f64> = (0..n).map(|i| -half + step * i as f64).collect();
    axis.iter().flat_map(|&q| axis.iter().map(move |&p| (q, p))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::StateVector;

    fn sp(n: usize) -> FiniteSpace {
        FiniteSpace::new(n).unwrap()
    }

    #[test]
    fn even_dimension_rejected() {
        assert!(ww_point_operator(sp(4), 0, 0).is_err());
        assert!(WWBasis::new(sp(6)).is_err());
    }

    #[test]
    fn origin_is_twice_parity() {
        let d = ww_point_operator(sp(3), 0, 0).unwrap();
        let f2 = finite_fourier(sp(3)).pow(2);
        assert!(d.max_abs_diff(&f2.scale_re(2.0)) < 1e-14);
    }

    #[test]
    fn position_state_map_n3() {
        let b = WWBasis::new(sp(3)).unwrap();
        let m = ww_transform(&b, &StateVector::basis(3, 0).projector()).unwrap();
        for j in 0..3 {
            for k in 0..3 {
                let want = if k == 0 { 2.0 } else { 0.0 };
                assert!((m.get(j, k) - C64::from(want)).norm() < 1e-13);
            }
        }
        assert!(wigner_negativity(&m) < 1e-13);
    }

    #[test]
    fn csv_layout() {
        let b = WWBasis::new(sp(3)).unwrap();
        let m = ww_transform(&b, &OperatorMatrix::identity(3)).unwrap();
        let s = m.to_csv_string().unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "j,k,re,im");
        assert_eq!(lines.len(), 10);
        assert!(lines[1].starts_with("0,0,"));
        assert!(lines[9].starts_with("2,2,"));
    }

    #[test]
    fn non_quadratic_rejected() {
        assert!(QuadraticObservable::from_terms(&[(3, 0, 1.0)]).is_err());
        assert!(QuadraticObservable::from_terms(&[(1, 1, 1.0), (0, 0, 2.0)]).is_ok());
    }

    #[test]
    fn symbol_of_number_operator() {
        // Weyl symbol of N is (q^2 + p^2)/2 - 1/2.
        let s = FockSpace::new(64).unwrap();
        let n = QuadraticObservable::oscillator_energy().quantize(s);
        let n = &n - &OperatorMatrix::identity(64).scale_re(0.5);
        let w = weyl_symbol(&n, 1.2, -0.7);
        assert!((w.re - ((1.44 + 0.49) / 2.0 - 0.5)).abs() < 1e-12);
    }

    #[test]
    fn grid_shape() {
        let g = square_grid(3.0, 7);
        assert_eq!(g.len(), 49);
        assert_eq!(g[0], (-3.0, -3.0));
        assert_eq!(g[48], (3.0, 3.0));
    }
}
