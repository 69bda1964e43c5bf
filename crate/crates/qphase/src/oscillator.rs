//! Truncated harmonic oscillator: Fock space, ladder operators, coherent
//! states, displacement, fractional Fourier rotation and the sl(2,R)
//! quadratic generators.
//!
//! Phase-space points map to amplitudes by `z = (q + i p) / sqrt(2)`.
//! Products of ladder operators are formed on a padded space and then
//! truncated, so quadratic operators carry exact matrix elements in the
//! retained block.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{cis, CVector, OperatorMatrix, StateVector, C64, MAX_DIM, ZERO};

/// Cutoff below which tolerance-claiming operations refuse to run.
pub const MIN_CLAIM_CUTOFF: usize = 8;

const PAD: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FockSpace {
    cutoff: usize,
}

impl FockSpace {
    pub fn new(cutoff: usize) -> Result<Self> {
        if cutoff < 1 || cutoff > MAX_DIM {
            return Err(Error::InvalidDimension { dim: cutoff, reason: format!("Fock cutoff must lie in 1..={MAX_DIM}") });
        }
        Ok(Self { cutoff })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn require_claim_cutoff(&self) -> Result<()> {
        if self.cutoff < MIN_CLAIM_CUTOFF {
            return Err(Error::InvalidDimension {
                dim: self.cutoff,
                reason: format!("cutoff below {MIN_CLAIM_CUTOFF} cannot support tolerance claims"),
            });
        }
        Ok(())
    }

    pub fn number_state(&self, n: usize) -> Result<StateVector> {
        if n >= self.cutoff {
            return Err(Error::InvalidParameter(format!("number state {n} outside cutoff {}", self.cutoff)));
        }
        Ok(StateVector::basis(self.cutoff, n))
    }

    /// Largest `|z|` whose coherent state is faithfully represented.
    pub fn faithful_radius(&self) -> f64 {
        // |z|^2 + 3|z| + 1 < D
        let d = self.cutoff as f64;
        (-3.0 + (9.0 + 4.0 * (d - 1.0)).sqrt()) / 2.0
    }

    pub fn check_faithful(&self, z: C64) -> Result<()> {
        let r = z.norm();
        if r * r + 3.0 * r + 1.0 >= self.cutoff as f64 {
            return Err(Error::TruncationExceeded { z_abs: r, cutoff: self.cutoff });
        }
        Ok(())
    }
}

/// Coherent amplitude labelled by a phase-space point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoherentAmplitude {
    pub z: C64,
}

impl CoherentAmplitude {
    pub fn new(z: C64) -> Self {
        Self { z }
    }

    pub fn from_qp(q: f64, p: f64) -> Self {
        Self { z: C64::new(q, p) / 2f64.sqrt() }
    }

    pub fn q(&self) -> f64 {
        2f64.sqrt() * self.z.re
    }

    pub fn p(&self) -> f64 {
        2f64.sqrt() * self.z.im
    }
}

#[derive(Clone, Debug)]
pub struct Ladder {
    pub lower: OperatorMatrix,
    pub raise: OperatorMatrix,
    pub number: OperatorMatrix,
}

fn lowering(dim: usize) -> OperatorMatrix {
    OperatorMatrix::from_fn(dim, |r, c| if c == r + 1 { C64::from((c as f64).sqrt()) } else { ZERO })
}

/// `a|n> = sqrt(n)|n-1>`, its adjoint, and `N = a^dagger a`.
pub fn ladder_ops(space: FockSpace) -> Ladder {
    let d = space.cutoff();
    let lower = lowering(d);
    let number = OperatorMatrix::diagonal(&(0..d).map(|n| C64::from(n as f64)).collect::<Vec<_>>());
    Ladder { raise: lower.adjoint(), lower, number }
}

/// Position and momentum quadratures with `[Q, P] = i` away from the edge.
#[derive(Clone, Debug)]
pub struct Quadratures {
    pub q: OperatorMatrix,
    pub p: OperatorMatrix,
}

fn quadratures_dim(dim: usize) -> Quadratures {
    let a = lowering(dim);
    let ad = a.adjoint();
    let s = 1.0 / 2f64.sqrt();
    Quadratures { q: (&a + &ad).scale_re(s), p: (&a - &ad).scale(C64::new(0.0, -s)) }
}

pub fn quadratures(space: FockSpace) -> Quadratures {
    quadratures_dim(space.cutoff())
}

/// Polynomial in `Q`, `P` built on a padded space and truncated, so every
/// retained matrix element equals the untruncated one for degree <= 4.
pub fn quadrature_polynomial(space: FockSpace, build: impl Fn(&Quadratures, &OperatorMatrix) -> OperatorMatrix) -> OperatorMatrix {
    let big = space.cutoff() + PAD;
    let qp = quadratures_dim(big);
    build(&qp, &OperatorMatrix::identity(big)).truncate(space.cutoff())
}

/// `F_theta = e^{i theta N}`.
pub fn fractional_fourier(space: FockSpace, theta: f64) -> OperatorMatrix {
    OperatorMatrix::diagonal(&(0..space.cutoff()).map(|n| cis(theta * n as f64)).collect::<Vec<_>>())
}

/// `D(z) = exp(z a^dagger - conj(z) a)` by matrix exponential.
pub fn displacement(space: FockSpace, z: C64) -> Result<OperatorMatrix> {
    space.check_faithful(z)?;
    let l = ladder_ops(space);
    Ok((&l.raise.scale(z) - &l.lower.scale(z.conj())).expm())
}

/// Analytic coherent amplitudes `e^{-|z|^2/2} z^n / sqrt(n!)`.
pub fn coherent_state(space: FockSpace, amp: CoherentAmplitude) -> Result<StateVector> {
    space.check_faithful(amp.z)?;
    Ok(coherent_state_unchecked(space.cutoff(), amp.z))
}

pub(crate) fn coherent_state_unchecked(dim: usize, z: C64) -> StateVector {
    let mut v = CVector::zeros(dim);
    let mut c = C64::from((-0.5 * z.norm_sqr()).exp());
    for n in 0..dim {
        if n > 0 {
            c = c * z / (n as f64).sqrt();
        }
        v[n] = c;
    }
    StateVector::new(v)
}

/// Closed-form overlap `<z1|z2>`:
/// `exp(-((q1-q2)^2 + (p1-p2)^2)/4) * exp(i (p2 q1 - p1 q2) / 2)`.
pub fn coherent_overlap(a: CoherentAmplitude, b: CoherentAmplitude) -> C64 {
    let (q1, p1, q2, p2) = (a.q(), a.p(), b.q(), b.p());
    let modulus = (-0.25 * ((q1 - q2).powi(2) + (p1 - p2).powi(2))).exp();
    C64::from_polar(modulus, 0.5 * (p2 * q1 - p1 * q2))
}

/// Infidelity `1 - |<e^{i theta} z | F_theta z>|^2`.
pub fn coherent_rotation_check(space: FockSpace, amp: CoherentAmplitude, theta: f64) -> Result<f64> {
    space.require_claim_cutoff()?;
    let psi = coherent_state(space, amp)?;
    let rotated = fractional_fourier(space, theta).apply(&psi);
    let target = coherent_state(space, CoherentAmplitude::new(amp.z * cis(theta)))?;
    Ok(1.0 - target.inner(&rotated).norm_sqr())
}

/// Quadratic generators: `H0 = N + 1/2`, `G = (i/2)(a^dagger^2 - a^2)`,
/// `K = (a^dagger^2 + a^2)/2`.
#[derive(Clone, Debug)]
pub struct Sl2Generators {
    pub h0: OperatorMatrix,
    pub g: OperatorMatrix,
    pub k: OperatorMatrix,
}

pub fn sl2_generators(space: FockSpace) -> Sl2Generators {
    let big = space.cutoff() + PAD;
    let a = lowering(big);
    let ad = a.adjoint();
    let a2 = &a * &a;
    let ad2 = &ad * &ad;
    let d = space.cutoff();
    let h0 = OperatorMatrix::diagonal(&(0..d).map(|n| C64::from(n as f64 + 0.5)).collect::<Vec<_>>());
    let g = (&ad2 - &a2).scale(C64::new(0.0, 0.5)).truncate(d);
    let k = (&ad2 + &a2).scale_re(0.5).truncate(d);
    Sl2Generators { h0, g, k }
}

/// Leading block where commutators of the truncated generators are exact.
pub fn protected_block(space: FockSpace) -> usize {
    space.cutoff().saturating_sub(PAD)
}

/// Normalized Hermite function `psi_n(x)` by the stable three-term recurrence.
pub fn hermite_position_amplitude(n: usize, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * x * x).exp();
    for m in 0..n {
        let m = m as f64;
        let next = (2.0 / (m + 1.0)).sqrt() * x * cur - (m / (m + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// All `psi_0(x) .. psi_{d-1}(x)` at once.
pub fn hermite_functions(d: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(d);
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * x * x).exp();
    for m in 0..d {
        out.push(cur);
        let m = m as f64;
        let next = (2.0 / (m + 1.0)).sqrt() * x * cur - (m / (m + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    out
}

/// Position wavefunction `<x|psi>` of a Fock-space state.
pub fn position_wavefunction(psi: &StateVector, x: f64) -> C64 {
    let h = hermite_functions(psi.dim(), x);
    psi.amplitudes().iter().zip(h).map(|(c, hn)| c * hn).sum()
}

pub fn position_density(psi: &StateVector, x: f64) -> f64 {
    position_wavefunction(psi, x).norm_sqr()
}

/// `S_xi = exp(i G ln xi)`, which maps `Q` to `xi Q` under conjugation.
pub fn scale_operator(space: FockSpace, xi: f64) -> Result<OperatorMatrix> {
    if !(xi > 0.0) || !xi.is_finite() {
        return Err(Error::InvalidParameter(format!("scale factor must be positive, got {xi}")));
    }
    let g = sl2_generators(space).g;
    Ok(g.scale(C64::new(0.0, xi.ln())).expm())
}

/// Displaced number states `D(z)|n>` for `n < count`, via
/// `D(z)|n+1> = (a^dagger - conj(z)) D(z)|n> / sqrt(n+1)`.
pub fn displaced_number_states(dim: usize, z: C64, count: usize) -> Vec<StateVector> {
    let mut out = Vec::with_capacity(count);
    let mut v = coherent_state_unchecked(dim, z).into_amplitudes();
    for n in 0..count {
        out.push(StateVector::new(v.clone()));
        let mut next = CVector::zeros(dim);
        for m in 0..dim {
            let raised = if m > 0 { v[m - 1] * (m as f64).sqrt() } else { ZERO };
            next[m] = (raised - z.conj() * v[m]) / ((n + 1) as f64).sqrt();
        }
        v = next;
    }
    out
}
