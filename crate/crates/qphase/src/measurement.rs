//! Von Neumann coupling, weak values, pointer shifts and the
//! deterministic/uncertain split of an observable relative to a state.
//!
//! Joint states are `system (x) pointer`. The coupling unitary is
//! `exp(-i eps O (x) R)`, applied through the joint eigenbasis of the two
//! Hermitian factors.

use log::warn;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{reduced_density_second, CMatrix, CVector, OperatorMatrix, StateVector, C64, ZERO};
use crate::oscillator::{coherent_state, ladder_ops, quadrature_polynomial, quadratures, CoherentAmplitude, FockSpace};

/// Smallest `|<beta|alpha>|` accepted for a weak value.
pub const ORTHOGONALITY_FLOOR: f64 = 1e-10;
/// Strength above which first-order shift formulas are not trusted.
pub const WEAK_REGIME_LIMIT: f64 = 0.1;
pub const DEFAULT_WEAK_STRENGTH: f64 = 1e-3;
pub const HERMITIAN_TOL: f64 = 1e-12;

fn require_hermitian(op: &OperatorMatrix) -> Result<()> {
    let d = op.hermiticity_defect();
    if d > HERMITIAN_TOL * (1.0 + op.max_norm()) {
        return Err(Error::NotHermitian(d));
    }
    Ok(())
}

fn require_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct PrePostPair {
    alpha: StateVector,
    beta: StateVector,
    observable: OperatorMatrix,
    floor: f64,
}

impl PrePostPair {
    pub fn new(alpha: StateVector, beta: StateVector, observable: OperatorMatrix) -> Result<Self> {
        Self::with_floor(alpha, beta, observable, ORTHOGONALITY_FLOOR)
    }

    pub fn with_floor(alpha: StateVector, beta: StateVector, observable: OperatorMatrix, floor: f64) -> Result<Self> {
        alpha.require_normalized()?;
        beta.require_normalized()?;
        require_dim(alpha.dim(), beta.dim())?;
        require_dim(alpha.dim(), observable.dim())?;
        require_hermitian(&observable)?;
        Ok(Self { alpha, beta, observable, floor })
    }

    pub fn alpha(&self) -> &StateVector {
        &self.alpha
    }

    pub fn beta(&self) -> &StateVector {
        &self.beta
    }

    pub fn observable(&self) -> &OperatorMatrix {
        &self.observable
    }
}

/// `<beta|O|alpha> / <beta|alpha>`.
pub fn weak_value(pair: &PrePostPair) -> Result<C64> {
    let overlap = pair.beta.inner(&pair.alpha);
    if overlap.norm() <= pair.floor {
        return Err(Error::OrthogonalSelection(overlap.norm()));
    }
    Ok(pair.observable.element(&pair.beta, &pair.alpha) / overlap)
}

/// Qubit state `cos(theta/2)|u0> + e^{i phi} sin(theta/2)|u1>`.
pub fn qubit_state(theta: f64, phi: f64) -> StateVector {
    StateVector::from_vec(vec![C64::from((theta / 2.0).cos()), C64::from_polar((theta / 2.0).sin(), phi)])
}

#[derive(Clone, Debug)]
pub struct PointerModel {
    initial: StateVector,
    coupling: OperatorMatrix,
    strength: f64,
}

impl PointerModel {
    pub fn new(initial: StateVector, coupling: OperatorMatrix, strength: f64) -> Result<Self> {
        initial.require_normalized()?;
        require_dim(initial.dim(), coupling.dim())?;
        require_hermitian(&coupling)?;
        if !strength.is_finite() {
            return Err(Error::InvalidParameter(format!("coupling strength must be finite, got {strength}")));
        }
        Ok(Self { initial, coupling, strength })
    }

    pub fn initial(&self) -> &StateVector {
        &self.initial
    }

    pub fn coupling(&self) -> &OperatorMatrix {
        &self.coupling
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn dim(&self) -> usize {
        self.initial.dim()
    }

    pub fn with_strength(&self, strength: f64) -> Self {
        Self { strength, ..self.clone() }
    }
}

/// `exp(-i strength O (x) R) (system (x) pointer)`, exact to rounding.
pub fn von_neumann_couple(system: &StateVector, observable: &OperatorMatrix, pointer: &PointerModel) -> Result<StateVector> {
    require_dim(system.dim(), observable.dim())?;
    require_hermitian(observable)?;
    let (ov, oe) = observable.hermitian_eigen();
    let (rv, re) = pointer.coupling.hermitian_eigen();
    let ds = system.dim();
    let dp = pointer.dim();
    // Coordinates in the product eigenbasis, phased, then mapped back.
    let a = oe.adjoint() * system.amplitudes();
    let b = re.adjoint() * pointer.initial.amplitudes();
    let mut coeffs = CMatrix::zeros(ds, dp);
    for j in 0..ds {
        for l in 0..dp {
            coeffs[(j, l)] = a[j] * b[l] * C64::from_polar(1.0, -pointer.strength * ov[j] * rv[l]);
        }
    }
    let out = &oe * coeffs * re.transpose();
    // Row-major flattening matches the Kronecker index `s * dp + p`.
    Ok(StateVector::new(CVector::from_iterator(ds * dp, (0..ds).flat_map(|s| (0..dp).map(move |p| (s, p))).map(|(s, p)| out[(s, p)]))))
}

/// Reference route: dense matrix exponential of the composite generator.
pub fn von_neumann_couple_dense(system: &StateVector, observable: &OperatorMatrix, pointer: &PointerModel) -> Result<StateVector> {
    require_dim(system.dim(), observable.dim())?;
    let gen = observable.kron(&pointer.coupling).scale(C64::new(0.0, -pointer.strength));
    Ok(gen.expm().apply(&system.tensor(&pointer.initial)))
}

#[derive(Clone, Debug)]
pub struct PostSelected {
    /// Unnormalized pointer state `(<beta| (x) I)|joint>`.
    pub pointer: StateVector,
    pub success_probability: f64,
}

pub fn post_select(joint: &StateVector, beta: &StateVector) -> Result<PostSelected> {
    let ds = beta.dim();
    if ds == 0 || joint.dim() % ds != 0 {
        return Err(Error::DimensionMismatch { expected: ds, found: joint.dim() });
    }
    let dp = joint.dim() / ds;
    let psi = joint.amplitudes();
    let b = beta.amplitudes();
    let v = CVector::from_fn(dp, |p, _| (0..ds).map(|s| b[s].conj() * psi[s * dp + p]).sum());
    let pointer = StateVector::new(v);
    let success_probability = pointer.norm().powi(2);
    Ok(PostSelected { pointer, success_probability })
}

/// Predicted vs simulated shift of a pointer observable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShiftReport {
    pub predicted_re: f64,
    pub predicted_im: f64,
    pub simulated_re: f64,
    pub simulated_im: f64,
    pub epsilon: f64,
    pub order_residual: f64,
}

impl ShiftReport {
    pub fn new(predicted: C64, simulated: C64, epsilon: f64) -> Self {
        Self {
            predicted_re: predicted.re,
            predicted_im: predicted.im,
            simulated_re: simulated.re,
            simulated_im: simulated.im,
            epsilon,
            order_residual: (predicted - simulated).norm(),
        }
    }

    pub fn predicted(&self) -> C64 {
        C64::new(self.predicted_re, self.predicted_im)
    }

    pub fn simulated(&self) -> C64 {
        C64::new(self.simulated_re, self.simulated_im)
    }

    /// `order_residual / epsilon^2`.
    pub fn second_order_coefficient(&self) -> f64 {
        self.order_residual / (self.epsilon * self.epsilon)
    }
}

fn warn_if_strong(eps: f64) {
    if eps.abs() > WEAK_REGIME_LIMIT {
        warn!("coupling strength {eps} exceeds {WEAK_REGIME_LIMIT}; first-order shift formulas are not reliable");
    }
}

/// Normalized final pointer state after coupling and post-selection.
pub fn final_pointer(pair: &PrePostPair, pointer: &PointerModel) -> Result<StateVector> {
    let joint = von_neumann_couple(&pair.alpha, &pair.observable, pointer)?;
    let post = post_select(&joint, &pair.beta)?;
    if post.success_probability <= 0.0 {
        return Err(Error::OrthogonalSelection(0.0));
    }
    post.pointer.renormalize()
}

/// First-order shift of pointer observable `m`:
/// `eps [Im(O_w)(<{M,R}> - 2<R><M>) - i Re(O_w) <[M,R]>]`.
pub fn jozsa_prediction(m: &OperatorMatrix, pointer: &PointerModel, ow: C64) -> C64 {
    let phi = &pointer.initial;
    let r = &pointer.coupling;
    let anti = m.anticommutator(r).expectation(phi);
    let comm = m.commutator(r).expectation(phi);
    let mean_r = r.expectation(phi);
    let mean_m = m.expectation(phi);
    (C64::from(ow.im) * (anti - mean_r * mean_m * 2.0) - C64::new(0.0, ow.re) * comm) * pointer.strength
}

/// Full pipeline shift `<M>_F - <M>_I` against the first-order prediction.
pub fn jozsa_shift(m: &OperatorMatrix, pointer: &PointerModel, pair: &PrePostPair) -> Result<ShiftReport> {
    require_dim(pointer.dim(), m.dim())?;
    warn_if_strong(pointer.strength);
    let ow = weak_value(pair)?;
    let predicted = jozsa_prediction(m, pointer, ow);
    let fin = final_pointer(pair, pointer)?;
    let simulated = m.expectation(&fin) - m.expectation(&pointer.initial);
    Ok(ShiftReport::new(predicted, simulated, pointer.strength))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CoherentShift {
    pub weak_value_re: f64,
    pub weak_value_im: f64,
    /// Shift of the lowering operator, predicted `-i eps O_w z`.
    pub lowering: ShiftReport,
    pub position: ShiftReport,
    pub momentum: ShiftReport,
}

impl CoherentShift {
    /// Largest residual among the two quadrature shifts.
    pub fn quadrature_residual(&self) -> f64 {
        self.position.order_residual.max(self.momentum.order_residual)
    }
}

/// Coherent pointer `|z>` coupled through the number operator.
///
/// The first-order shift of `a` is `-i eps O_w z`; for `arg z = pi/2` this
/// gives `dQ = eps sqrt(2)|z| Re(O_w)` and `dP = eps sqrt(2)|z| Im(O_w)`.
pub fn coherent_pointer_shift(amp: CoherentAmplitude, pair: &PrePostPair, eps: f64, cutoff: usize) -> Result<CoherentShift> {
    let space = FockSpace::new(cutoff)?;
    space.require_claim_cutoff()?;
    warn_if_strong(eps);
    let phi = coherent_state(space, amp)?;
    let l = ladder_ops(space);
    let qp = quadratures(space);
    let pointer = PointerModel::new(phi.clone(), l.number.clone(), eps)?;
    let ow = weak_value(pair)?;
    let fin = final_pointer(pair, &pointer)?;

    let da_pred = C64::new(0.0, -eps) * ow * amp.z;
    let da_sim = l.lower.expectation(&fin) - l.lower.expectation(&phi);
    let dq_sim = qp.q.expectation(&fin).re - qp.q.expectation(&phi).re;
    let dp_sim = qp.p.expectation(&fin).re - qp.p.expectation(&phi).re;
    let s2 = 2f64.sqrt();
    Ok(CoherentShift {
        weak_value_re: ow.re,
        weak_value_im: ow.im,
        lowering: ShiftReport::new(da_pred, da_sim, eps),
        position: ShiftReport::new(C64::from(s2 * da_pred.re), C64::from(dq_sim), eps),
        momentum: ShiftReport::new(C64::from(s2 * da_pred.im), C64::from(dp_sim), eps),
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct EnsembleShift {
    /// `tr(rho_pointer Q)` after strong coupling, system traced out.
    pub simulated: f64,
    /// `<Q>_pointer + lambda <O>_system`.
    pub predicted: f64,
}

impl EnsembleShift {
    pub fn residual(&self) -> f64 {
        (self.simulated - self.predicted).abs()
    }
}

/// Mean pointer position after a von Neumann measurement with `R = P`.
pub fn ensemble_position_shift(system: &StateVector, observable: &OperatorMatrix, pointer: &PointerModel) -> Result<EnsembleShift> {
    require_dim(system.dim(), observable.dim())?;
    system.require_normalized()?;
    let space = FockSpace::new(pointer.dim())?;
    let q = quadratures(space).q;
    let joint = von_neumann_couple(system, observable, pointer)?;
    let rho = reduced_density_second(&joint, system.dim(), pointer.dim());
    let simulated = (&rho * &q).trace().re;
    let predicted = q.expectation(&pointer.initial).re + pointer.strength * observable.expectation(system).re;
    Ok(EnsembleShift { simulated, predicted })
}

/// Von Neumann entropy of the first factor of a pure joint state.
pub fn entanglement_entropy(joint: &StateVector, d1: usize, d2: usize) -> f64 {
    let rho = crate::linalg::reduced_density_first(joint, d1, d2);
    rho.hermitian_eigenvalues().iter().filter(|&&p| p > 1e-15).map(|&p| -p * p.ln()).sum()
}

#[derive(Clone, Debug)]
pub struct DsoCuoSplit {
    /// Part with `psi` as eigenvector.
    pub deterministic: OperatorMatrix,
    /// Part mapping `psi` into its orthogonal complement.
    pub uncertain: OperatorMatrix,
}

pub fn dso_cuo_decompose(c: &OperatorMatrix, psi: &StateVector) -> Result<DsoCuoSplit> {
    require_dim(psi.dim(), c.dim())?;
    require_hermitian(c)?;
    psi.require_normalized()?;
    let pi = psi.projector();
    let perp = &OperatorMatrix::identity(c.dim()) - &pi;
    let deterministic = &(&(&pi * c) * &pi) + &(&(&perp * c) * &perp);
    let uncertain = &(&(&perp * c) * &pi) + &(&(&pi * c) * &perp);
    Ok(DsoCuoSplit { deterministic, uncertain })
}

#[derive(Clone, Debug)]
pub struct FluctuationCheck {
    pub mean: f64,
    pub delta: f64,
    /// Normalized component of `A|psi>` orthogonal to `psi`, absent when `delta` vanishes.
    pub orthogonal: Option<StateVector>,
    pub residual: f64,
}

/// Checks `A|psi> = <A>|psi> + delta_A |psi_perp>`.
pub fn fluctuation_theorem_check(a: &OperatorMatrix, psi: &StateVector) -> Result<FluctuationCheck> {
    require_dim(psi.dim(), a.dim())?;
    require_hermitian(a)?;
    psi.require_normalized()?;
    let a_psi = a.apply(psi);
    let mean = psi.inner(&a_psi).re;
    let rest = a_psi.sub(&psi.scaled(C64::from(mean)));
    let delta = rest.norm();
    let variance = (psi.inner(&a.apply(&a_psi)).re - mean * mean).max(0.0);
    if delta < 1e-14 {
        return Ok(FluctuationCheck { mean, delta, orthogonal: None, residual: rest.norm() });
    }
    let perp = rest.scaled(C64::from(1.0 / delta));
    let two_term = psi.scaled(C64::from(mean)).add(&perp.scaled(C64::from(variance.sqrt())));
    let residual = a_psi.sub(&two_term).norm();
    Ok(FluctuationCheck { mean, delta: variance.sqrt(), orthogonal: Some(StateVector::new(perp.into_amplitudes())), residual })
}

/// Hermitian basis of `n x n` matrices: `E_ii`, `E_ij + E_ji`, `i(E_ij - E_ji)`.
pub fn hermitian_basis(n: usize) -> Vec<OperatorMatrix> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        out.push(OperatorMatrix::from_fn(n, |r, c| if r == i && c == i { C64::from(1.0) } else { ZERO }));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(OperatorMatrix::from_fn(n, |r, c| if (r, c) == (i, j) || (r, c) == (j, i) { C64::from(1.0) } else { ZERO }));
            out.push(OperatorMatrix::from_fn(n, |r, c| {
                if (r, c) == (i, j) {
                    C64::new(0.0, 1.0)
                } else if (r, c) == (j, i) {
                    C64::new(0.0, -1.0)
                } else {
                    ZERO
                }
            }));
        }
    }
    out
}

fn real_rank(ops: &[OperatorMatrix]) -> usize {
    let n = ops[0].dim();
    let rows = ops.len();
    let m = nalgebra::DMatrix::<f64>::from_fn(rows, 2 * n * n, |r, c| {
        let z = ops[r].0[(c / 2 / n, (c / 2) % n)];
        if c % 2 == 0 {
            z.re
        } else {
            z.im
        }
    });
    m.svd(false, false).rank(1e-10)
}

/// Real dimensions of the deterministic and uncertain operator spaces of `psi`.
pub fn dso_cuo_dimensions(psi: &StateVector) -> Result<(usize, usize)> {
    let basis = hermitian_basis(psi.dim());
    let mut det = Vec::with_capacity(basis.len());
    let mut unc = Vec::with_capacity(basis.len());
    for h in &basis {
        let s = dso_cuo_decompose(h, psi)?;
        det.push(s.deterministic);
        unc.push(s.uncertain);
    }
    Ok((real_rank(&det), real_rank(&unc)))
}

/// Pointer Hamiltonian `P^2/(2m) + sum_k v_k Q^k`, polynomial degree at most four.
pub fn pointer_hamiltonian(space: FockSpace, mass: f64, potential: &[f64]) -> Result<OperatorMatrix> {
    if potential.len() > 5 {
        return Err(Error::InvalidParameter("potential degree above four".into()));
    }
    if !(mass > 0.0) {
        return Err(Error::InvalidParameter(format!("mass must be positive, got {mass}")));
    }
    let v = potential.to_vec();
    Ok(quadrature_polynomial(space, move |qp, id| {
        let mut h = (&qp.p * &qp.p).scale_re(0.5 / mass);
        let mut qk = id.clone();
        for &c in &v {
            h = &h + &qk.scale_re(c);
            qk = &qk * &qp.q;
        }
        h
    }))
}

/// `d/dt (delta Q)^2` from Ehrenfest commutators:
/// `i<[H, Q^2]> - 2<Q> i<[H, Q]>`.
pub fn position_variance_rate(psi: &StateVector, mass: f64, potential: &[f64]) -> Result<f64> {
    psi.require_normalized()?;
    let space = FockSpace::new(psi.dim())?;
    let h = pointer_hamiltonian(space, mass, potential)?;
    let q = quadratures(space).q;
    let q2 = quadrature_polynomial(space, |qp, _| &qp.q * &qp.q);
    let i = C64::new(0.0, 1.0);
    let d_q2 = (h.commutator(&q2).expectation(psi) * i).re;
    let d_q = (h.commutator(&q).expectation(psi) * i).re;
    Ok(d_q2 - 2.0 * q.expectation(psi).re * d_q)
}

/// `eps [Re(O_w) + m Im(O_w) d/dt (delta Q)^2]` for coupling through `P`.
pub fn dispersive_position_shift(ow: C64, eps: f64, mass: f64, variance_rate: f64) -> f64 {
    eps * (ow.re + mass * ow.im * variance_rate)
}
