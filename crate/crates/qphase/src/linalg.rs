//! Dense complex linear algebra shared by every module.
//!
//! States are column vectors, operators are square matrices, both backed by
//! `nalgebra`. Composite indices follow the Kronecker convention
//! `i = i_first * d_second + i_second`.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Norm deviation accepted when a state is flagged normalized.
pub const NORM_TOL: f64 = 1e-10;

/// Largest dimension accepted by any constructor.
pub const MAX_DIM: usize = 4096;

pub fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: CVector,
    normalized: bool,
}

impl StateVector {
    /// Wraps raw amplitudes; the normalized flag records whether the norm is 1.
    pub fn new(amps: CVector) -> Self {
        let normalized = (amps.norm() - 1.0).abs() < NORM_TOL;
        Self { amps, normalized }
    }

    pub fn from_vec(amps: Vec<C64>) -> Self {
        Self::new(CVector::from_vec(amps))
    }

    /// Rescales to unit norm. Fails on the zero vector.
    pub fn normalized(amps: CVector) -> Result<Self> {
        let n = amps.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized(n));
        }
        Ok(Self { amps: amps / C64::from(n), normalized: true })
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut amps = CVector::zeros(dim);
        amps[k] = ONE;
        Self { amps, normalized: true }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amps
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    pub fn require_normalized(&self) -> Result<()> {
        if self.normalized {
            Ok(())
        } else {
            Err(Error::NotNormalized(self.norm()))
        }
    }

    pub fn renormalize(&self) -> Result<Self> {
        Self::normalized(self.amps.clone())
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps.dotc(&other.amps)
    }

    pub fn tensor(&self, other: &StateVector) -> StateVector {
        StateVector::new(self.amps.kronecker(&other.amps))
    }

    pub fn projector(&self) -> OperatorMatrix {
        OperatorMatrix(&self.amps * self.amps.adjoint())
    }

    pub fn scaled(&self, c: C64) -> StateVector {
        StateVector::new(&self.amps * c)
    }

    pub fn add(&self, other: &StateVector) -> StateVector {
        StateVector::new(&self.amps + &other.amps)
    }

    pub fn sub(&self, other: &StateVector) -> StateVector {
        StateVector::new(&self.amps - &other.amps)
    }

    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        (&self.amps - &other.amps).camax()
    }

    /// Distance up to a global phase: `min_phi |self - e^{i phi} other|_inf`.
    pub fn ray_distance(&self, other: &StateVector) -> f64 {
        let ov = other.inner(self);
        let phase = if ov.norm() > 0.0 { ov / ov.norm() } else { ONE };
        (&self.amps - &other.amps * phase).camax()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix(pub CMatrix);

impl OperatorMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
        }
        Ok(Self(m))
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(CMatrix::zeros(dim, dim))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(CMatrix::from_fn(dim, dim, f))
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        Self(CMatrix::from_diagonal(&CVector::from_column_slice(entries)))
    }

    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let n = rows.len();
        Self::from_fn(n, |i, j| rows[i][j])
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn scale(&self, c: C64) -> Self {
        Self(&self.0 * c)
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.scale(C64::from(c))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 + &other.0 * &self.0)
    }

    /// Hilbert-Schmidt inner product `tr(self^dagger other)`.
    pub fn hs_inner(&self, other: &Self) -> C64 {
        self.0.zip_fold(&other.0, ZERO, |acc, a, b| acc + a.conj() * b)
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    /// Non-negative integer power by repeated squaring.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.dim());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn max_norm(&self) -> f64 {
        self.0.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.0 - &other.0).iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Induced 1-norm (maximum absolute column sum).
    pub fn one_norm(&self) -> f64 {
        self.0
            .column_iter()
            .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn unitarity_defect(&self) -> f64 {
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.dim()))
    }

    pub fn apply(&self, psi: &StateVector) -> StateVector {
        StateVector::new(&self.0 * &psi.amps)
    }

    pub fn expectation(&self, psi: &StateVector) -> C64 {
        psi.amps.dotc(&(&self.0 * &psi.amps))
    }

    /// `<phi|self|psi>`.
    pub fn element(&self, phi: &StateVector, psi: &StateVector) -> C64 {
        phi.amps.dotc(&(&self.0 * &psi.amps))
    }

    /// Leading `n x n` block.
    pub fn truncate(&self, n: usize) -> Self {
        Self(self.0.view((0, 0), (n, n)).into_owned())
    }

    /// Eigenvalues of a Hermitian operator, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.0.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        v.sort_by(|a, b| a.total_cmp(b));
        v
    }

    /// Eigen-decomposition of a Hermitian operator: (eigenvalues, column eigenvectors).
    pub fn hermitian_eigen(&self) -> (Vec<f64>, CMatrix) {
        let e = self.0.clone().symmetric_eigen();
        (e.eigenvalues.iter().copied().collect(), e.eigenvectors)
    }

    /// Eigenvalues of a normal operator (unitaries, Hermitians).
    ///
    /// The Hermitian and anti-Hermitian parts commute, so a generic real
    /// combination of them shares the eigenbasis; eigenvalues are then read
    /// off as Rayleigh quotients.
    pub fn normal_eigenvalues(&self) -> Result<Vec<C64>> {
        let normality = (&self.adjoint() * self).max_abs_diff(&(self * &self.adjoint()));
        if normality > 1e-10 * (1.0 + self.max_norm().powi(2)) {
            return Err(Error::Numerical(format!("operator is not normal (defect {normality:e})")));
        }
        let re = (&self.0 + self.0.adjoint()) * C64::from(0.5);
        let im = (&self.0 - self.0.adjoint()) * C64::new(0.0, -0.5);
        let mix = re + im * C64::from(std::f64::consts::E / 3.0);
        let vecs = mix.symmetric_eigen().eigenvectors;
        Ok(vecs
            .column_iter()
            .map(|v| v.dotc(&(&self.0 * v)))
            .collect())
    }

    pub fn expm(&self) -> Self {
        Self(expm(&self.0))
    }

    /// `exp(-i t H)` for Hermitian `H`.
    pub fn evolution(&self, t: f64) -> Self {
        self.scale(C64::new(0.0, -t)).expm()
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: Self) -> OperatorMatrix {
        OperatorMatrix(&self.0 * &rhs.0)
    }
}

impl Mul for OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: Self) -> OperatorMatrix {
        OperatorMatrix(self.0 * rhs.0)
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: Self) -> OperatorMatrix {
        OperatorMatrix(&self.0 + &rhs.0)
    }
}

impl Add for OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: Self) -> OperatorMatrix {
        OperatorMatrix(self.0 + rhs.0)
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: Self) -> OperatorMatrix {
        OperatorMatrix(&self.0 - &rhs.0)
    }
}

impl Sub for OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: Self) -> OperatorMatrix {
        OperatorMatrix(self.0 - rhs.0)
    }
}

impl Neg for OperatorMatrix {
    type Output = OperatorMatrix;
    fn neg(self) -> OperatorMatrix {
        OperatorMatrix(-self.0)
    }
}

// Pade(13) coefficients and scaling threshold, Higham (2005).
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// Matrix exponential by Pade(13) scaling and squaring.
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let norm = OperatorMatrix(a.clone()).one_norm();
    let s = if norm > THETA13 { (norm / THETA13).log2().ceil() as i32 } else { 0 };
    let a = a * C64::from(0.5f64.powi(s));
    let id = CMatrix::identity(n, n);
    let b = |k: usize| C64::from(PADE13[k]);

    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let u_inner = &a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9)) + &a6 * b(7) + &a4 * b(5) + &a2 * b(3) + &id * b(1);
    let u = &a * u_inner;
    let v = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8)) + &a6 * b(6) + &a4 * b(4) + &a2 * b(2) + &id * b(0);

    let mut r = (&v - &u)
        .lu()
        .solve(&(&v + &u))
        .expect("Pade denominator is nonsingular after scaling");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

/// Partial trace over the first factor of a `d1 x d2` pure state.
pub fn reduced_density_second(joint: &StateVector, d1: usize, d2: usize) -> OperatorMatrix {
    let psi = joint.amplitudes();
    OperatorMatrix::from_fn(d2, |i, j| (0..d1).map(|s| psi[s * d2 + i] * psi[s * d2 + j].conj()).sum())
}

/// Partial trace over the second factor of a `d1 x d2` pure state.
pub fn reduced_density_first(joint: &StateVector, d1: usize, d2: usize) -> OperatorMatrix {
    let psi = joint.amplitudes();
    OperatorMatrix::from_fn(d1, |i, j| (0..d2).map(|p| psi[i * d2 + p] * psi[j * d2 + p].conj()).sum())
}

/// Haar-like random pure state (normalized complex Gaussian).
/// Reproducible generator used by every seeded routine in the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> StateVector {
    loop {
        let v = CVector::from_fn(dim, |_, _| C64::new(gauss(rng), gauss(rng)));
        if let Ok(s) = StateVector::normalized(v) {
            return s;
        }
    }
}

/// Random Hermitian matrix with unit-scale Gaussian entries.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> OperatorMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| C64::new(gauss(rng), gauss(rng)));
    OperatorMatrix((&g + g.adjoint()) * C64::from(0.5))
}

pub fn random_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> OperatorMatrix {
    OperatorMatrix(CMatrix::from_fn(dim, dim, |_, _| C64::new(gauss(rng), gauss(rng))))
}

fn gauss<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box-Muller; one sample per call keeps the stream simple.
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(x: f64) -> f64 {
    use std::f64::consts::PI;
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn expm_of_diagonal_matches_scalar_exponentials() {
        let d = OperatorMatrix::diagonal(&[C64::new(0.3, 1.0), C64::new(-2.0, 0.5), C64::new(7.5, -3.0)]);
        let e = d.expm();
        for i in 0..3 {
            let want = d.0[(i, i)].exp();
            assert!((e.0[(i, i)] - want).norm() / want.norm() < 1e-13);
        }
    }

    #[test]
    fn expm_of_hermitian_generator_is_unitary_and_matches_eigen_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = random_hermitian(12, &mut rng).scale_re(3.0);
        let u = h.evolution(1.7);
        assert!(u.unitarity_defect() < 1e-12);
        let (vals, vecs) = h.hermitian_eigen();
        let phases = CMatrix::from_diagonal(&CVector::from_iterator(12, vals.iter().map(|&l| cis(-1.7 * l))));
        let want = &vecs * phases * vecs.adjoint();
        assert!(u.max_abs_diff(&OperatorMatrix(want)) < 1e-11);
    }

    #[test]
    fn expm_nilpotent_is_truncated_series() {
        let n = OperatorMatrix::from_rows(&[&[ZERO, C64::from(5.0)], &[ZERO, ZERO]]);
        let e = n.expm();
        assert!(e.max_abs_diff(&(&OperatorMatrix::identity(2) + &n)) < 1e-13);
    }

    #[test]
    fn partial_traces_of_product_state() {
        let a = StateVector::from_vec(vec![C64::from(0.6), C64::new(0.0, 0.8)]);
        let b = StateVector::basis(3, 1);
        let ab = a.tensor(&b);
        assert!(reduced_density_first(&ab, 2, 3).max_abs_diff(&a.projector()) < 1e-15);
        assert!(reduced_density_second(&ab, 2, 3).max_abs_diff(&b.projector()) < 1e-15);
    }

    #[test]
    fn pow_matches_repeated_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = random_matrix(4, &mut rng).scale_re(0.5);
        let mut acc = OperatorMatrix::identity(4);
        for _ in 0..7 {
            acc = &acc * &m;
        }
        assert!(m.pow(7).max_abs_diff(&acc) < 1e-10);
    }

    #[test]
    fn wrap_angle_range() {
        assert!((wrap_angle(3.0 * std::f64::consts::PI) - std::f64::consts::PI).abs() < 1e-12);
        assert!((wrap_angle(-0.5) + 0.5).abs() < 1e-15);
    }
}
