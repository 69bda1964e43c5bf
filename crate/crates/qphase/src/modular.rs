//! Modular variables on cyclic rings: the two-slit modular qubit, n-slit
//! momentum combs, the non-local equation of motion, and the Chinese
//! remainder factorization of a ring into pseudo-degrees of freedom.

use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{cis, CVector, OperatorMatrix, StateVector, C64, ONE, ZERO};
use crate::qspace::{momentum_phase_op, position_translation_op, FiniteSpace};

/// Ring of `N` sites (4 | N) and circumference `2L`; site `i` sits at
/// `x = (i - N/2) 2L/N`, so `x = +-L/2` are sites.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RingSpace {
    sites: usize,
    half_circumference: f64,
}

impl RingSpace {
    pub fn new(sites: usize, half_circumference: f64) -> Result<Self> {
        if sites < 4 || sites % 4 != 0 {
            return Err(Error::InvalidDimension { dim: sites, reason: "ring needs a multiple of 4 sites".into() });
        }
        FiniteSpace::new(sites)?;
        if !(half_circumference > 0.0) || !half_circumference.is_finite() {
            return Err(Error::InvalidParameter(format!("slit separation must be positive, got {half_circumference}")));
        }
        Ok(Self { sites, half_circumference })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn slit_separation(&self) -> f64 {
        self.half_circumference
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_circumference / self.sites as f64
    }

    pub fn position(&self, i: usize) -> f64 {
        (i as f64 - (self.sites / 2) as f64) * self.spacing()
    }

    /// Site indices of `x = +L/2` and `x = -L/2`.
    pub fn slit_indices(&self) -> (usize, usize) {
        (self.sites / 2 + self.sites / 4, self.sites / 2 - self.sites / 4)
    }

    fn space(&self) -> FiniteSpace {
        FiniteSpace::new(self.sites).expect("validated in constructor")
    }

    /// `V_L`: translation by half the ring, `|x> -> |x - L>`.
    pub fn half_turn(&self) -> OperatorMatrix {
        position_translation_op(self.space()).pow((self.sites / 2) as u64)
    }

    /// `U_k = diag(e^{i k x})`.
    pub fn momentum_kick(&self, k: f64) -> OperatorMatrix {
        OperatorMatrix::diagonal(&(0..self.sites).map(|i| cis(k * self.position(i))).collect::<Vec<_>>())
    }
}

#[derive(Clone, Debug)]
pub struct ModularSpins {
    pub sigma: [OperatorMatrix; 3],
    slits: (usize, usize),
}

fn levi_civita(j: usize, k: usize) -> Option<(usize, f64)> {
    match (j, k) {
        (0, 1) => Some((2, 1.0)),
        (1, 2) => Some((0, 1.0)),
        (2, 0) => Some((1, 1.0)),
        (1, 0) => Some((2, -1.0)),
        (2, 1) => Some((0, -1.0)),
        (0, 2) => Some((1, -1.0)),
        _ => None,
    }
}

impl ModularSpins {
    /// 2x2 block in the basis `(|+L/2>, |-L/2>)`.
    pub fn restricted(&self, a: usize) -> OperatorMatrix {
        let (p, m) = self.slits;
        let idx = [p, m];
        OperatorMatrix::from_fn(2, |r, c| self.sigma[a].0[(idx[r], idx[c])])
    }

    /// Largest amplitude leaked out of the slit span by any of the three operators.
    pub fn span_leakage(&self) -> f64 {
        let (p, m) = self.slits;
        let mut worst: f64 = 0.0;
        for s in &self.sigma {
            for col in [p, m] {
                for row in 0..s.dim() {
                    if row != p && row != m {
                        worst = worst.max(s.0[(row, col)].norm());
                    }
                }
            }
        }
        worst
    }

    /// Max deviation from `[s_j, s_k] = 2i eps_jkl s_l` and
    /// `{s_j, s_k} = 2 delta_jk I` on the slit span.
    pub fn pauli_residual(&self) -> f64 {
        let r: Vec<OperatorMatrix> = (0..3).map(|a| self.restricted(a)).collect();
        let id = OperatorMatrix::identity(2);
        let mut worst = self.span_leakage();
        for j in 0..3 {
            for k in 0..3 {
                let comm = r[j].commutator(&r[k]);
                let want = match levi_civita(j, k) {
                    Some((l, s)) => r[l].scale(C64::new(0.0, 2.0 * s)),
                    None => OperatorMatrix::zeros(2),
                };
                worst = worst.max(comm.max_abs_diff(&want));
                let anti = r[j].anticommutator(&r[k]);
                let want = if j == k { id.scale_re(2.0) } else { OperatorMatrix::zeros(2) };
                worst = worst.max(anti.max_abs_diff(&want));
            }
        }
        worst
    }
}

/// `s3 = (U - U^dag)/2i`, `s1 = (V + V^dag)/2 - (V - V^dag) s3 / 2`,
/// `s2 = -i(V - V^dag)/2 + i(V + V^dag) s3 / 2` with `U = U_{pi/L}`, `V = V_L`.
pub fn modular_spin_ops(ring: RingSpace) -> ModularSpins {
    let u = ring.momentum_kick(PI / ring.slit_separation());
    let v = ring.half_turn();
    let s3 = (&u - &u.adjoint()).scale(C64::new(0.0, -0.5));
    let v_sum = (&v + &v.adjoint()).scale_re(0.5);
    let v_diff = (&v - &v.adjoint()).scale_re(0.5);
    let s1 = &v_sum - &(&v_diff * &s3);
    let s2 = &v_diff.scale(C64::new(0.0, -1.0)) + &(&v_sum * &s3).scale(C64::new(0.0, 1.0));
    ModularSpins { sigma: [s1, s2, s3], slits: ring.slit_indices() }
}

/// Comparison of the slit span under three realizations of `V_L`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConstructionComparison {
    /// Open (non-cyclic) lattice: amplitude of `V_L|-L/2>` left in the span.
    pub open_line_retained: f64,
    /// Cyclic ring: leakage of the spin operators out of the span.
    pub ring_leakage: f64,
    /// Tensor product: `|| P V^(2 Nb) P^-1 - V^(2) (x) V^(Nb) ||`.
    pub tensor_factor_residual: f64,
}

/// Side-by-side check of the direct-sum qubit against the ring and tensor-product constructions.
pub fn compare_constructions(ring: RingSpace, odd_partner: usize) -> Result<ConstructionComparison> {
    let n = ring.sites();
    let half = n / 2;
    // Same sites without the wrap: the half-period shift of -L/2 falls off the window.
    let open = OperatorMatrix::from_fn(n, |r, c| if c >= half && r == c - half { ONE } else { ZERO });
    let (plus, minus) = ring.slit_indices();
    let image = open.apply(&StateVector::basis(n, minus));
    let open_line_retained = image.amplitudes()[plus].norm_sqr() + image.amplitudes()[minus].norm_sqr();
    let ring_leakage = modular_spin_ops(ring).span_leakage();
    let fact = CrtFactorization::new(2, odd_partner)?;
    Ok(ConstructionComparison { open_line_retained, ring_leakage, tensor_factor_residual: crt_relabel_check(&fact) })
}

/// Ring of `periods` slit periods of length `period`, `sites` sites in total.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodicRing {
    pub sites: usize,
    pub periods: usize,
    pub period: f64,
}

impl PeriodicRing {
    pub fn new(sites: usize, periods: usize, period: f64) -> Result<Self> {
        FiniteSpace::new(sites)?;
        if periods == 0 || sites % periods != 0 {
            return Err(Error::InvalidParameter(format!("{periods} periods do not divide {sites} sites")));
        }
        if !(period > 0.0) {
            return Err(Error::InvalidParameter(format!("period must be positive, got {period}")));
        }
        Ok(Self { sites, periods, period })
    }

    pub fn sites_per_period(&self) -> usize {
        self.sites / self.periods
    }

    /// Physical momentum of Fourier index `k`, on the symmetric branch.
    pub fn momentum(&self, k: usize) -> f64 {
        let n = self.sites as i64;
        let mut k = k as i64;
        if k >= (n + 1) / 2 {
            k -= n;
        }
        2.0 * PI * k as f64 / (self.periods as f64 * self.period)
    }

    fn space(&self) -> FiniteSpace {
        FiniteSpace::new(self.sites).expect("validated in constructor")
    }

    /// Translation by one period.
    pub fn period_shift(&self) -> OperatorMatrix {
        position_translation_op(self.space()).pow(self.sites_per_period() as u64)
    }

    /// `U_{2 pi / L}`, which is the clock operator raised to the number of periods.
    pub fn period_kick(&self) -> OperatorMatrix {
        momentum_phase_op(self.space()).pow(self.periods as u64)
    }
}

#[derive(Clone, Debug)]
pub struct SlitLattice {
    pub period: f64,
    /// `(n, c_n)` with `sum |c_n|^2 = 1`.
    pub coefficients: Vec<(i64, C64)>,
}

impl SlitLattice {
    pub fn new(period: f64, coefficients: Vec<(i64, C64)>) -> Result<Self> {
        let norm: f64 = coefficients.iter().map(|(_, c)| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("coefficients have squared norm {norm}, expected 1")));
        }
        Ok(Self { period, coefficients })
    }

    /// Normalized coefficients `c_n`, `|n| <= n_max`, of a transmission profile on one period.
    pub fn from_profile(period: f64, n_max: i64, samples: usize, profile: impl Fn(f64) -> C64) -> Result<Self> {
        let raw: Vec<(i64, C64)> = (-n_max..=n_max).map(|n| (n, aperture_coefficient(&profile, period, n, samples))).collect();
        let norm: f64 = raw.iter().map(|(_, c)| c.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidParameter("profile has no retained harmonics".into()));
        }
        Self::new(period, raw.into_iter().map(|(n, c)| (n, c / norm)).collect())
    }
}

/// `(1/L) int_{-L/2}^{L/2} t(x) e^{-2 pi i n x / L} dx` by the midpoint rule.
pub fn aperture_coefficient(profile: impl Fn(f64) -> C64, period: f64, n: i64, samples: usize) -> C64 {
    let h = period / samples as f64;
    (0..samples)
        .map(|m| {
            let x = -0.5 * period + (m as f64 + 0.5) * h;
            profile(x) * cis(-2.0 * PI * n as f64 * x / period)
        })
        .sum::<C64>()
        / samples as f64
}

/// Box aperture of full width `width` centred in the period.
pub fn box_aperture(width: f64) -> impl Fn(f64) -> C64 {
    move |x: f64| if x.abs() < 0.5 * width { ONE } else { ZERO }
}

/// Gaussian aperture of standard deviation `sigma`.
pub fn gaussian_aperture(sigma: f64) -> impl Fn(f64) -> C64 {
    move |x: f64| C64::from((-0.5 * x * x / (sigma * sigma)).exp())
}

#[derive(Clone, Debug)]
pub struct Diffracted {
    pub state: StateVector,
    /// `|| V_L psi - lambda psi ||_inf` with `lambda = <psi|V_L|psi>`.
    pub period_shift_residual: f64,
    pub period_shift_eigenvalue: C64,
    /// Same for `U_{2 pi / L}`.
    pub period_kick_residual: f64,
    pub period_kick_eigenvalue: C64,
}

fn eigen_residual(op: &OperatorMatrix, psi: &StateVector) -> (C64, f64) {
    let lam = op.expectation(psi);
    (lam, op.apply(psi).max_abs_diff(&psi.scaled(lam)))
}

/// `sum_n c_n U_{2 pi n / L} |p(0)>` on the ring.
pub fn nslit_diffraction(lattice: &SlitLattice, ring: PeriodicRing) -> Result<Diffracted> {
    if (lattice.period - ring.period).abs() > 1e-12 * ring.period {
        return Err(Error::InvalidParameter("lattice period differs from ring period".into()));
    }
    let n = ring.sites as i64;
    let kick = momentum_phase_op(ring.space());
    let p0 = ring.space().momentum_ket(0);
    let mut acc = CVector::zeros(ring.sites);
    for &(h, c) in &lattice.coefficients {
        let index = h * ring.periods as i64;
        if 2 * index.abs() >= n {
            return Err(Error::InvalidParameter(format!("harmonic {h} is not resolved by {} sites", ring.sites)));
        }
        let u = crate::qspace::unitary_pow(&kick, index);
        acc += u.apply(&p0).into_amplitudes() * c;
    }
    let state = StateVector::normalized(acc)?;
    let (period_shift_eigenvalue, period_shift_residual) = eigen_residual(&ring.period_shift(), &state);
    let (period_kick_eigenvalue, period_kick_residual) = eigen_residual(&ring.period_kick(), &state);
    Ok(Diffracted { state, period_shift_residual, period_shift_eigenvalue, period_kick_residual, period_kick_eigenvalue })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct EomReport {
    /// `|| [phi(Q), V_L] - (phi(Q) - phi(Q + L)) V_L ||_inf`.
    pub residual: f64,
    pub commutator_norm: f64,
}

/// Checks the non-local equation of motion for the half-ring shift.
pub fn nonlocal_eom_identity(ring: RingSpace, phi: impl Fn(f64) -> f64) -> Result<EomReport> {
    let l = ring.slit_separation();
    let n = ring.sites();
    for i in 0..n {
        let x = ring.position(i);
        let gap = (phi(x + 2.0 * l) - phi(x)).abs();
        if gap > 1e-9 {
            return Err(Error::InvalidParameter(format!("potential is not periodic on the ring: jump {gap:e} at x = {x}")));
        }
    }
    let diag = |f: &dyn Fn(f64) -> f64| OperatorMatrix::diagonal(&(0..n).map(|i| C64::from(f(ring.position(i)))).collect::<Vec<_>>());
    let phi_q = diag(&|x| phi(x));
    let phi_shift = diag(&|x| phi(x + l));
    let v = ring.half_turn();
    let comm = phi_q.commutator(&v);
    let rhs = &(&phi_q - &phi_shift) * &v;
    Ok(EomReport { residual: comm.max_abs_diff(&rhs), commutator_norm: comm.max_norm() })
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrtFactorization {
    pub na: usize,
    pub nb: usize,
}

impl CrtFactorization {
    pub fn new(na: usize, nb: usize) -> Result<Self> {
        if na < 2 || nb < 2 {
            return Err(Error::InvalidParameter(format!("factors must be at least 2, got ({na}, {nb})")));
        }
        if gcd(na, nb) != 1 {
            return Err(Error::InvalidParameter(format!("({na}, {nb}) are not coprime")));
        }
        let f = Self { na, nb };
        let mut seen = vec![false; na * nb];
        for j in 0..na * nb {
            let t = f.relabel(j);
            if seen[t] {
                return Err(Error::Numerical(format!("relabel of ({na}, {nb}) is not a bijection")));
            }
            seen[t] = true;
        }
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.na * self.nb
    }

    /// Tensor index of big-ring site `j`: `(j mod Na) Nb + (j mod Nb)`.
    pub fn relabel(&self, j: usize) -> usize {
        (j % self.na) * self.nb + (j % self.nb)
    }

    pub fn permutation(&self) -> OperatorMatrix {
        OperatorMatrix::from_fn(self.dim(), |r, c| if r == self.relabel(c) { ONE } else { ZERO })
    }
}

/// `|| P V^(N) P^-1 - V^(Na) (x) V^(Nb) ||_inf`.
pub fn crt_relabel_check(fact: &CrtFactorization) -> f64 {
    let sp = |n| FiniteSpace::new(n).expect("factor dimension >= 2");
    let p = fact.permutation();
    let big = position_translation_op(sp(fact.dim()));
    let conj = &(&p * &big) * &p.adjoint();
    let prod = position_translation_op(sp(fact.na)).kron(&position_translation_op(sp(fact.nb)));
    conj.max_abs_diff(&prod)
}

/// Orbits of the product grid `Na x Nb` under the joint unit shift.
pub fn product_shift_orbits(na: usize, nb: usize) -> Vec<Vec<(usize, usize)>> {
    let mut seen = vec![false; na * nb];
    let mut out = Vec::new();
    for a0 in 0..na {
        for b0 in 0..nb {
            if seen[a0 * nb + b0] {
                continue;
            }
            let mut line = Vec::new();
            let (mut a, mut b) = (a0, b0);
            while !seen[a * nb + b] {
                seen[a * nb + b] = true;
                line.push((a, b));
                a = (a + 1) % na;
                b = (b + 1) % nb;
            }
            out.push(line);
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct AzState {
    pub state: StateVector,
    pub momentum_residual: f64,
    pub position_residual: f64,
}

/// `|v_j^(Na)> (x) |u_sigma^(Nb)>`: definite momentum in one factor, definite position in the other.
pub fn az_state(na: usize, nb: usize, j: usize, sigma: usize) -> Result<AzState> {
    if j >= na || sigma >= nb {
        return Err(Error::InvalidParameter(format!("index ({j}, {sigma}) outside {na} x {nb}")));
    }
    let sa = FiniteSpace::new(na)?;
    let sb = FiniteSpace::new(nb)?;
    let state = sa.momentum_ket(j as i64).tensor(&sb.position_ket(sigma as i64));
    let v_a = position_translation_op(sa).kron(&OperatorMatrix::identity(nb));
    let u_b = OperatorMatrix::identity(na).kron(&momentum_phase_op(sb));
    let lam_v = cis(2.0 * PI * j as f64 / na as f64);
    let lam_u = cis(2.0 * PI * sigma as f64 / nb as f64);
    let momentum_residual = v_a.apply(&state).max_abs_diff(&state.scaled(lam_v));
    let position_residual = u_b.apply(&state).max_abs_diff(&state.scaled(lam_u));
    Ok(AzState { state, momentum_residual, position_residual })
}

/// Weights `|<v_p (x) u_x | psi>|^2` over the `Na x Nb` cell grid, as CSV `x_mod,p_mod,weight`.
pub fn write_phase_cells<W: Write>(na: usize, nb: usize, psi: &StateVector, w: W) -> Result<()> {
    let sa = FiniteSpace::new(na)?;
    let sb = FiniteSpace::new(nb)?;
    if psi.dim() != na * nb {
        return Err(Error::DimensionMismatch { expected: na * nb, found: psi.dim() });
    }
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["x_mod", "p_mod", "weight"])?;
    for x in 0..nb {
        for p in 0..na {
            let cell = sa.momentum_ket(p as i64).tensor(&sb.position_ket(x as i64));
            wr.write_record(&[x.to_string(), p.to_string(), format!("{:.15e}", cell.inner(psi).norm_sqr())])?;
        }
    }
    wr.flush()?;
    Ok(())
}

#[derive(Clone, Debug)]
pub struct SlitMeasurement {
    pub state: StateVector,
    /// `|| state - Nb^{-1/2} sum_s |v_0> (x) |v_s> ||_inf`.
    pub expansion_residual: f64,
}

/// Outcome `|v_0^(Na)> (x) |u_0^(Nb)>` of the slit measurement on the uniform state.
pub fn slit_projective_measurement(na: usize, nb: usize) -> Result<SlitMeasurement> {
    let sa = FiniteSpace::new(na)?;
    let sb = FiniteSpace::new(nb)?;
    let state = sa.momentum_ket(0).tensor(&sb.position_ket(0));
    let mut sum = CVector::zeros(na * nb);
    for s in 0..nb {
        sum += sa.momentum_ket(0).tensor(&sb.momentum_ket(s as i64)).into_amplitudes();
    }
    let expansion = StateVector::new(sum / C64::from((nb as f64).sqrt()));
    Ok(SlitMeasurement { expansion_residual: state.max_abs_diff(&expansion), state })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(n: usize) -> RingSpace {
        RingSpace::new(n, 10.0).unwrap()
    }

    #[test]
    fn ring_validation() {
        assert!(RingSpace::new(6, 1.0).is_err());
        assert!(RingSpace::new(8, 0.0).is_err());
        let r = ring(8);
        let (p, m) = r.slit_indices();
        assert!((r.position(p) - 5.0).abs() < 1e-12 && (r.position(m) + 5.0).abs() < 1e-12);
    }

    #[test]
    fn sigma3_on_slits() {
        let r = ring(8);
        let s = modular_spin_ops(r);
        let (p, m) = r.slit_indices();
        assert!((s.sigma[2].0[(p, p)] - ONE).norm() < 1e-15);
        assert!((s.sigma[2].0[(m, m)] + ONE).norm() < 1e-15);
    }

    #[test]
    fn blocks_are_standard_paulis_at_n8() {
        let s = modular_spin_ops(ring(8));
        let i = C64::new(0.0, 1.0);
        let want = [
            OperatorMatrix::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]]),
            OperatorMatrix::from_rows(&[&[ZERO, -i], &[i, ZERO]]),
            OperatorMatrix::diagonal(&[ONE, -ONE]),
        ];
        for a in 0..3 {
            assert!(s.restricted(a).max_abs_diff(&want[a]) < 1e-14, "sigma_{}", a + 1);
        }
        let s1 = s.restricted(0);
        assert!((&s1 * &s1).max_abs_diff(&OperatorMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn single_coefficient_keeps_zero_momentum() {
        let pr = PeriodicRing::new(24, 3, 2.0).unwrap();
        let lat = SlitLattice::new(2.0, vec![(0, ONE)]).unwrap();
        let d = nslit_diffraction(&lat, pr).unwrap();
        assert!(d.state.max_abs_diff(&FiniteSpace::new(24).unwrap().momentum_ket(0)) < 1e-14);
    }

    #[test]
    fn unresolved_harmonic_rejected() {
        let pr = PeriodicRing::new(12, 3, 1.0).unwrap();
        let lat = SlitLattice::new(1.0, vec![(2, ONE)]).unwrap();
        assert!(nslit_diffraction(&lat, pr).is_err());
    }

    #[test]
    fn eom_rejects_aperiodic_potential() {
        assert!(nonlocal_eom_identity(ring(16), |x| x * x).is_err());
    }

    #[test]
    fn crt_examples() {
        assert!(CrtFactorization::new(2, 2).is_err());
        assert_eq!(product_shift_orbits(2, 3).len(), 1);
        assert_eq!(product_shift_orbits(2, 3)[0].len(), 6);
        let f = CrtFactorization::new(3, 5).unwrap();
        assert!(crt_relabel_check(&f) < 1e-12);
    }

    #[test]
    fn az_uniform_first_site() {
        let s = az_state(2, 3, 0, 0).unwrap();
        let h = 0.5f64.sqrt();
        let want = StateVector::from_vec(vec![C64::from(h), ZERO, ZERO, C64::from(h), ZERO, ZERO]);
        assert!(s.state.max_abs_diff(&want) < 1e-15);
        assert!(az_state(2, 3, 2, 0).is_err());
    }

    #[test]
    fn phase_cell_csv_marks_single_cell() {
        let s = az_state(2, 3, 1, 2).unwrap();
        let mut buf = Vec::new();
        write_phase_cells(2, 3, &s.state, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x_mod,p_mod,weight");
        assert_eq!(lines.len(), 7);
        for l in &lines[1..] {
            let f: Vec<&str> = l.split(',').collect();
            let w: f64 = f[2].parse().unwrap();
            let want = if f[0] == "2" && f[1] == "1" { 1.0 } else { 0.0 };
            assert!((w - want).abs() < 1e-14, "{l}");
        }
    }

    #[test]
    fn slit_measurement_norm() {
        let m = slit_projective_measurement(2, 2).unwrap();
        assert!((m.state.norm() - 1.0).abs() < 1e-15);
        assert!(m.expansion_residual < 1e-12);
    }
}
