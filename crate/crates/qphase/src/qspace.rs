//! Finite Schwinger kinematics on an N-dimensional cyclic space.
//!
//! Position kets `|u_k>` are the standard basis; momentum kets `|v_k>` are the
//! columns of the finite Fourier matrix.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{cis, OperatorMatrix, StateVector, C64, MAX_DIM, ONE, ZERO};

/// Tolerance on the imaginary part of a variance for Hermitian input.
pub const VARIANCE_IMAG_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FiniteSpace {
    dim: usize,
}

impl FiniteSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension { dim, reason: "must be at least 2".into() });
        }
        if dim > MAX_DIM {
            return Err(Error::InvalidDimension { dim, reason: format!("exceeds maximum {MAX_DIM}") });
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Primitive root of unity `e^{2 pi i / N}`.
    pub fn root(&self) -> C64 {
        cis(2.0 * PI / self.dim as f64)
    }

    /// Canonical representative of `k mod N`.
    pub fn wrap(&self, k: i64) -> usize {
        k.rem_euclid(self.dim as i64) as usize
    }

    pub fn position_ket(&self, k: i64) -> StateVector {
        StateVector::basis(self.dim, self.wrap(k))
    }

    pub fn momentum_ket(&self, k: i64) -> StateVector {
        let n = self.dim;
        let k = self.wrap(k);
        let norm = 1.0 / (n as f64).sqrt();
        StateVector::from_vec((0..n).map(|j| cis(2.0 * PI * (j * k % n) as f64 / n as f64) * norm).collect())
    }
}

/// Cyclic shift `V|u_k> = |u_{k-1}>`.
pub fn position_translation_op(space: FiniteSpace) -> OperatorMatrix {
    let n = space.dim();
    OperatorMatrix::from_fn(n, |r, c| if r == (c + n - 1) % n { ONE } else { ZERO })
}

/// Clock operator `U = diag(e^{2 pi i k / N})`.
pub fn momentum_phase_op(space: FiniteSpace) -> OperatorMatrix {
    let n = space.dim();
    let diag: Vec<C64> = (0..n).map(|k| cis(2.0 * PI * k as f64 / n as f64)).collect();
    OperatorMatrix::diagonal(&diag)
}

/// `F_{jk} = N^{-1/2} e^{2 pi i jk / N}`, mapping `|u_k>` to `|v_k>`.
pub fn finite_fourier(space: FiniteSpace) -> OperatorMatrix {
    let n = space.dim();
    let norm = 1.0 / (n as f64).sqrt();
    OperatorMatrix::from_fn(n, |j, k| cis(2.0 * PI * ((j * k) % n) as f64 / n as f64) * norm)
}

/// Index inversion `|u_k> -> |u_{-k}>`, equal to `F^2`.
pub fn parity_op(space: FiniteSpace) -> OperatorMatrix {
    let n = space.dim();
    OperatorMatrix::from_fn(n, |r, c| if r == (n - c) % n { ONE } else { ZERO })
}

/// Integer power of a unitary; negative exponents use the adjoint.
pub fn unitary_pow(op: &OperatorMatrix, e: i64) -> OperatorMatrix {
    if e >= 0 {
        op.pow(e as u64)
    } else {
        op.adjoint().pow(e.unsigned_abs())
    }
}

/// Phase `e^{2 pi i jk / N}` in `V^j U^k = phase * U^k V^j`.
pub fn weyl_phase(space: FiniteSpace, j: i64, k: i64) -> C64 {
    let n = space.dim() as i64;
    cis(2.0 * PI * (j * k).rem_euclid(n) as f64 / n as f64)
}

/// Max-norm of `V^j U^k - e^{2 pi i jk/N} U^k V^j`.
pub fn weyl_residual(space: FiniteSpace, j: i64, k: i64) -> f64 {
    let v = unitary_pow(&position_translation_op(space), j);
    let u = unitary_pow(&momentum_phase_op(space), k);
    (&v * &u).max_abs_diff(&(&u * &v).scale(weyl_phase(space, j, k)))
}

#[derive(Clone, Debug)]
pub struct OpAlgebra {
    pub commutator: OperatorMatrix,
    pub anticommutator: OperatorMatrix,
    pub hilbert_schmidt: C64,
}

pub fn op_algebra(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OpAlgebra> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(OpAlgebra { commutator: a.commutator(b), anticommutator: a.anticommutator(b), hilbert_schmidt: a.hs_inner(b) })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Moments {
    pub mean: C64,
    pub delta: f64,
}

/// Mean and standard deviation of `a` in state `psi`.
pub fn expectation_and_uncertainty(a: &OperatorMatrix, psi: &StateVector) -> Result<Moments> {
    if a.dim() != psi.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: psi.dim() });
    }
    psi.require_normalized()?;
    let mean = a.expectation(psi);
    let second = psi.inner(&a.apply(&a.apply(psi)));
    let var = second - mean * mean;
    if var.im.abs() > VARIANCE_IMAG_TOL || var.re < -VARIANCE_IMAG_TOL {
        return Err(Error::NotHermitian(var.im.abs().max(-var.re)));
    }
    Ok(Moments { mean, delta: var.re.max(0.0).sqrt() })
}
