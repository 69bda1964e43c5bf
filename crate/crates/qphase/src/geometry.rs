//! Geometry of the space of rays: Fubini-Study line element, Pancharatnam
//! and Bargmann phases, the Bloch-sphere solid angle, and the law that
//! projective speed equals energy uncertainty.
//!
//! A triangle is stored in traversal order `v0 -> v1 -> v2 -> v0`; the
//! Bargmann phase multiplies the transition amplitudes `<v1|v0>`,
//! `<v2|v1>`, `<v0|v2>` along that loop.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{random_state, reduced_density_second, wrap_angle, OperatorMatrix, StateVector, C64};

/// Overlap modulus below which a phase is undefined.
pub const OVERLAP_FLOOR: f64 = 1e-12;
pub const DEFAULT_DT: f64 = 1e-5;

#[derive(Clone, Debug, PartialEq)]
pub struct RayPoint {
    representative: StateVector,
}

impl RayPoint {
    pub fn new(representative: StateVector) -> Result<Self> {
        representative.require_normalized()?;
        Ok(Self { representative })
    }

    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        Ok(Self { representative: StateVector::normalized(crate::linalg::CVector::from_vec(amps))? })
    }

    pub fn state(&self) -> &StateVector {
        &self.representative
    }

    pub fn dim(&self) -> usize {
        self.representative.dim()
    }

    pub fn rephased(&self, chi: f64) -> Self {
        Self { representative: self.representative.scaled(C64::from_polar(1.0, chi)) }
    }

    /// Bloch vector of a qubit ray.
    pub fn bloch_vector(&self) -> Result<[f64; 3]> {
        if self.dim() != 2 {
            return Err(Error::InvalidDimension { dim: self.dim(), reason: "Bloch vectors need a qubit".into() });
        }
        let a = self.representative.amplitudes();
        let off = a[0].conj() * a[1];
        Ok([2.0 * off.re, 2.0 * off.im, a[0].norm_sqr() - a[1].norm_sqr()])
    }
}

/// Affine chart `xi^i = z^i / z^0`, undefined where `z^0 = 0`.
pub fn projective_chart(psi: &StateVector) -> Result<Vec<C64>> {
    let a = psi.amplitudes();
    if a[0].norm() < OVERLAP_FLOOR {
        return Err(Error::InvalidParameter("chart z0 = 0 does not cover this ray".into()));
    }
    Ok(a.iter().skip(1).map(|z| z / a[0]).collect())
}

/// Round metric on the single-coordinate chart of CP(1): `|dxi|^2 / (1 + |xi|^2)^2`.
pub fn cp1_chart_metric(xi: C64, dxi: C64) -> f64 {
    dxi.norm_sqr() / (1.0 + xi.norm_sqr()).powi(2)
}

/// `ds^2 = <dpsi|dpsi> - |<psi|dpsi>|^2`.
pub fn fubini_study_step(psi: &StateVector, dpsi: &StateVector) -> Result<f64> {
    psi.require_normalized()?;
    if psi.dim() != dpsi.dim() {
        return Err(Error::DimensionMismatch { expected: psi.dim(), found: dpsi.dim() });
    }
    Ok(dpsi.inner(dpsi).re - psi.inner(dpsi).norm_sqr())
}

/// `arg <a0|a1>` in `(-pi, pi]`.
pub fn pancharatnam_phase(a0: &RayPoint, a1: &RayPoint) -> Result<f64> {
    let ov = a0.state().inner(a1.state());
    if ov.norm() <= OVERLAP_FLOOR {
        return Err(Error::OrthogonalSelection(ov.norm()));
    }
    Ok(ov.arg())
}

#[derive(Clone, Debug)]
pub struct GeodesicTriangle {
    pub vertices: [RayPoint; 3],
}

impl GeodesicTriangle {
    pub fn new(v0: RayPoint, v1: RayPoint, v2: RayPoint) -> Result<Self> {
        if v0.dim() != v1.dim() || v0.dim() != v2.dim() {
            return Err(Error::DimensionMismatch { expected: v0.dim(), found: v1.dim().max(v2.dim()) });
        }
        Ok(Self { vertices: [v0, v1, v2] })
    }

    /// Loop `a0 -> beta -> a1 -> a0` traced by a reference pair and a probe.
    pub fn from_reference_pair(a0: RayPoint, a1: RayPoint, beta: RayPoint) -> Result<Self> {
        Self::new(a0, beta, a1)
    }
}

/// `arg(<v0|v2><v2|v1><v1|v0>)` in `(-pi, pi]`.
pub fn bargmann_invariant(tri: &GeodesicTriangle) -> Result<f64> {
    let [v0, v1, v2] = &tri.vertices;
    let o10 = v1.state().inner(v0.state());
    let o21 = v2.state().inner(v1.state());
    let o02 = v0.state().inner(v2.state());
    for o in [o10, o21, o02] {
        if o.norm() <= OVERLAP_FLOOR {
            return Err(Error::InvalidParameter(format!("degenerate triangle: overlap {:e}", o.norm())));
        }
    }
    Ok((o02 * o21 * o10).arg())
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Oriented solid angle of the Bloch triangle, in `(-2 pi, 2 pi]`.
pub fn solid_angle(tri: &GeodesicTriangle) -> Result<f64> {
    let n0 = tri.vertices[0].bloch_vector()?;
    let n1 = tri.vertices[1].bloch_vector()?;
    let n2 = tri.vertices[2].bloch_vector()?;
    let num = dot(n0, cross(n1, n2));
    let den = 1.0 + dot(n0, n1) + dot(n1, n2) + dot(n2, n0);
    if num.abs() < 1e-15 && den.abs() < 1e-15 {
        return Ok(0.0);
    }
    Ok(2.0 * num.atan2(den))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TriangleSurvey {
    pub triangles: usize,
    /// Largest `|Theta + Omega/2|` modulo `2 pi`.
    pub max_residual: f64,
}

/// Compares the Bargmann phase with `-Omega/2` on seeded random qubit triangles.
pub fn triangle_survey(count: usize, seed: u64) -> Result<TriangleSurvey> {
    if count == 0 {
        return Err(Error::InvalidParameter("triangle count must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_residual = 0.0f64;
    let mut done = 0;
    while done < count {
        let mut vertex = || RayPoint::new(random_state(2, &mut rng));
        let tri = GeodesicTriangle::new(vertex()?, vertex()?, vertex()?)?;
        // Near-orthogonal vertices leave the phase undefined; draw again.
        let Ok(theta) = bargmann_invariant(&tri) else { continue };
        let omega = solid_angle(&tri)?;
        max_residual = max_residual.max(wrap_angle(theta + 0.5 * omega).abs());
        done += 1;
    }
    Ok(TriangleSurvey { triangles: count, max_residual })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ReferenceProbability {
    /// `1/2 + 1/2 |<A0|A1>| sin(theta) cos(phi - eta)`.
    pub formula: f64,
    /// `<r| rho_pointer |r>` with `|r> = (|0> + |1>)/sqrt(2)`.
    pub trace: f64,
    /// `arg <A1|A0>`.
    pub eta: f64,
}

pub fn reference_probability_formula(overlap_abs: f64, theta: f64, phi: f64, eta: f64) -> f64 {
    0.5 + 0.5 * overlap_abs * theta.sin() * (phi - eta).cos()
}

/// Probability that a qubit pointer entangled as
/// `cos(theta/2)|A0>|0> + e^{i phi} sin(theta/2)|A1>|1>` is found in the
/// reference state `(|0> + |1>)/sqrt(2)`.
pub fn reference_probability(a0: &RayPoint, a1: &RayPoint, theta: f64, phi: f64) -> Result<ReferenceProbability> {
    if a0.dim() != a1.dim() {
        return Err(Error::DimensionMismatch { expected: a0.dim(), found: a1.dim() });
    }
    let d = a0.dim();
    let c = C64::from((theta / 2.0).cos());
    let s = C64::from_polar((theta / 2.0).sin(), phi);
    let joint = a0.state().scaled(c).tensor(&StateVector::basis(2, 0)).add(&a1.state().scaled(s).tensor(&StateVector::basis(2, 1)));
    let rho = reduced_density_second(&joint, d, 2);
    let r = StateVector::from_vec(vec![C64::from(0.5f64.sqrt()), C64::from(0.5f64.sqrt())]);
    let trace = rho.expectation(&r).re;
    let ov = a1.state().inner(a0.state());
    let eta = ov.arg();
    Ok(ReferenceProbability { formula: reference_probability_formula(ov.norm(), theta, phi, eta), trace, eta })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SpeedCheck {
    /// Finite-difference projective speed.
    pub lhs: f64,
    /// Energy uncertainty.
    pub rhs: f64,
}

impl SpeedCheck {
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

/// Projective speed over one step of `exp(-i H dt)` against `delta E`.
pub fn speed_equals_uncertainty(h: &OperatorMatrix, psi: &StateVector, dt: f64) -> Result<SpeedCheck> {
    psi.require_normalized()?;
    if h.dim() != psi.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), found: psi.dim() });
    }
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter(format!("time step must be positive, got {dt}")));
    }
    let moved = h.evolution(dt).apply(psi);
    let ds2 = fubini_study_step(psi, &moved.sub(psi))?;
    let lhs = ds2.max(0.0).sqrt() / dt;
    let rhs = crate::qspace::expectation_and_uncertainty(h, psi)?.delta;
    Ok(SpeedCheck { lhs, rhs })
}
