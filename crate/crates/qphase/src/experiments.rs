//! End-to-end reproductions: the qubit phase game, the two-branch cat
//! interference with detector arrays, and weak-value qubit tomography.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{cis, CVector, OperatorMatrix, StateVector, C64};
use crate::measurement::{coherent_pointer_shift, qubit_state, PrePostPair};
use crate::oscillator::{coherent_overlap, coherent_state, CoherentAmplitude, FockSpace};
use crate::quadrature::adaptive_simpson;

/// Absolute tolerance for detector-window integrals.
pub const DETECTOR_TOL: f64 = 1e-8;
/// Resolution of the tabulated CDF used for position sampling.
pub const CDF_STEP: f64 = 1e-4;
/// Margin beyond the branch centers where a truncated density is trusted.
pub const WINDOW_MARGIN: f64 = 4.0;
pub const DEFAULT_SEPARATION: f64 = 10.0;
pub const DEFAULT_CAT_CUTOFF: usize = 256;
pub const DEFAULT_HALF_WIDTH: f64 = 0.2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CatConfig {
    separation: f64,
    relative_phase: f64,
    fock_cutoff: usize,
}

impl CatConfig {
    pub fn new(separation: f64, relative_phase: f64, fock_cutoff: usize) -> Result<Self> {
        if !(separation > 0.0) || !separation.is_finite() {
            return Err(Error::InvalidParameter(format!("separation must be positive, got {separation}")));
        }
        if !relative_phase.is_finite() {
            return Err(Error::InvalidParameter("relative phase must be finite".into()));
        }
        let need = separation * separation / 4.0 + 1.5 * separation + 16.0;
        if (fock_cutoff as f64) <= need {
            return Err(Error::TruncationExceeded { z_abs: separation / 2.0, cutoff: fock_cutoff });
        }
        FockSpace::new(fock_cutoff)?;
        Ok(Self { separation, relative_phase, fock_cutoff })
    }

    /// `L = 10`, `D = 256`.
    pub fn standard(relative_phase: f64) -> Result<Self> {
        Self::new(DEFAULT_SEPARATION, relative_phase, DEFAULT_CAT_CUTOFF)
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn relative_phase(&self) -> f64 {
        self.relative_phase
    }

    pub fn fock_cutoff(&self) -> usize {
        self.fock_cutoff
    }

    /// Half-width of the window on which position densities are trusted.
    pub fn faithful_half_width(&self) -> f64 {
        self.separation / 2.0 + WINDOW_MARGIN
    }

    /// Branch centers `q = -L/2` and `q = +L/2`, both at rest.
    pub fn branches(&self) -> (CoherentAmplitude, CoherentAmplitude) {
        let h = self.separation / 2.0;
        (CoherentAmplitude::from_qp(-h, 0.0), CoherentAmplitude::from_qp(h, 0.0))
    }
}

/// `(|-L/2> + e^{i alpha}|+L/2>)` normalized in the truncated Fock basis.
pub fn cat_state(config: &CatConfig) -> Result<StateVector> {
    let space = FockSpace::new(config.fock_cutoff)?;
    let (left, right) = config.branches();
    let a = coherent_state(space, left)?;
    let b = coherent_state(space, right)?;
    a.add(&b.scaled(cis(config.relative_phase))).renormalize()
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BranchOverlap {
    /// `|<left|right>|^2` from the closed form.
    pub analytic: f64,
    /// Same quantity from the truncated vectors.
    pub truncated: f64,
}

pub fn branch_overlap(config: &CatConfig) -> Result<BranchOverlap> {
    let space = FockSpace::new(config.fock_cutoff)?;
    let (left, right) = config.branches();
    let a = coherent_state(space, left)?;
    let b = coherent_state(space, right)?;
    Ok(BranchOverlap { analytic: coherent_overlap(left, right).norm_sqr(), truncated: a.inner(&b).norm_sqr() })
}

/// Free oscillator evolution `exp(-i t (N + 1/2))`.
pub fn rotate_cat(state: &StateVector, t: f64) -> StateVector {
    let amps = state.amplitudes();
    let out = CVector::from_fn(amps.len(), |n, _| amps[n] * cis(-t * (n as f64 + 0.5)));
    StateVector::new(out)
}

/// Closed-form rotated cat: each branch `z -> z e^{-it}`, global phase `e^{-it/2}`.
pub fn rotated_cat_target(config: &CatConfig, t: f64) -> Result<StateVector> {
    let space = FockSpace::new(config.fock_cutoff)?;
    let (left, right) = config.branches();
    let turn = cis(-t);
    let a = coherent_state(space, CoherentAmplitude::new(left.z * turn))?;
    let b = coherent_state(space, CoherentAmplitude::new(right.z * turn))?;
    Ok(a.add(&b.scaled(cis(config.relative_phase))).renormalize()?.scaled(cis(-0.5 * t)))
}

/// Closed-form density of the quarter-turned cat,
/// `(2/sqrt(pi)) cos^2((L x - alpha)/2) exp(-x^2)`.
pub fn quarter_turn_density(separation: f64, alpha: f64, x: f64) -> f64 {
    2.0 / PI.sqrt() * (0.5 * (separation * x - alpha)).cos().powi(2) * (-x * x).exp()
}

/// Fast evaluation of `<x|psi>` with the Hermite recurrence coefficients cached.
#[derive(Clone, Debug)]
pub struct PositionProfile {
    amps: Vec<C64>,
    up: Vec<f64>,
    down: Vec<f64>,
}

impl PositionProfile {
    pub fn new(state: &StateVector) -> Self {
        let d = state.dim();
        let up = (0..d).map(|m| (2.0 / (m as f64 + 1.0)).sqrt()).collect();
        let down = (0..d).map(|m| (m as f64 / (m as f64 + 1.0)).sqrt()).collect();
        Self { amps: state.amplitudes().iter().copied().collect(), up, down }
    }

    pub fn amplitude(&self, x: f64) -> C64 {
        let mut prev = 0.0;
        let mut cur = PI.powf(-0.25) * (-0.5 * x * x).exp();
        let mut acc = C64::from(0.0);
        for (m, c) in self.amps.iter().enumerate() {
            acc += c * cur;
            let next = self.up[m] * x * cur - self.down[m] * prev;
            prev = cur;
            cur = next;
        }
        acc
    }

    pub fn density(&self, x: f64) -> f64 {
        self.amplitude(x).norm_sqr()
    }
}

/// Uniform grid `start, start + step, ..` up to `stop` inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
            return Err(Error::InvalidParameter(format!("bad grid [{start}, {stop}] step {step}")));
        }
        Ok(Self { start, stop, step })
    }

    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DensitySeries {
    pub x: Vec<f64>,
    pub density: Vec<f64>,
}

impl DensitySeries {
    pub fn to_csv_string(&self) -> String {
        let mut s = String::from("x,density\n");
        for (x, d) in self.x.iter().zip(&self.density) {
            s.push_str(&format!("{x:.15e},{d:.15e}\n"));
        }
        s
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.to_csv_string().as_bytes())?;
        Ok(())
    }
}

/// `|<x|psi>|^2` on a grid that must stay inside `|x| <= faithful_half_width`.
pub fn position_density(state: &StateVector, grid: &Grid, faithful_half_width: f64) -> Result<DensitySeries> {
    if grid.start < -faithful_half_width - 1e-12 || grid.stop > faithful_half_width + 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "grid [{}, {}] leaves the faithful window |x| <= {faithful_half_width}",
            grid.start, grid.stop
        )));
    }
    let profile = PositionProfile::new(state);
    let x = grid.points();
    let density = x.iter().map(|&x| profile.density(x)).collect();
    Ok(DensitySeries { x, density })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DetectorArray {
    centers: Vec<f64>,
    half_width: f64,
}

impl DetectorArray {
    pub fn new(mut centers: Vec<f64>, half_width: f64) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::InvalidParameter("detector array is empty".into()));
        }
        if !(half_width > 0.0) || !half_width.is_finite() || centers.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("detector geometry must be finite with positive width".into()));
        }
        centers.sort_by(f64::total_cmp);
        if let Some(w) = centers.windows(2).find(|w| w[1] - w[0] < 2.0 * half_width) {
            return Err(Error::InvalidParameter(format!("detector windows at {} and {} overlap", w[0], w[1])));
        }
        Ok(Self { centers, half_width })
    }

    /// Seven detectors at `n pi/5`, `|n| <= 3`, half-width `0.2`.
    pub fn standard() -> Self {
        let centers = (-3..=3).map(|n| n as f64 * PI / 5.0).collect();
        Self::new(centers, DEFAULT_HALF_WIDTH).expect("standard array is disjoint")
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn windows(&self) -> Vec<(f64, f64)> {
        self.centers.iter().map(|c| (c - self.half_width, c + self.half_width)).collect()
    }
}

/// Probability that some detector fires: the density integrated over the
/// union of windows, each to `DETECTOR_TOL / windows`.
pub fn detector_click_probability(density: &dyn Fn(f64) -> f64, detectors: &DetectorArray, domain_half_width: f64) -> Result<f64> {
    let windows = detectors.windows();
    if windows.iter().any(|&(a, b)| a < -domain_half_width || b > domain_half_width) {
        return Err(Error::InvalidParameter(format!("detectors leave the density domain |x| <= {domain_half_width}")));
    }
    let tol = DETECTOR_TOL / windows.len() as f64;
    Ok(windows.iter().map(|&(a, b)| adaptive_simpson(density, a, b, tol)).sum())
}

/// Click probability of the Fock-space cat after evolving for `t`.
pub fn cat_click_probability(config: &CatConfig, t: f64, detectors: &DetectorArray) -> Result<f64> {
    let state = rotate_cat(&cat_state(config)?, t);
    let profile = PositionProfile::new(&state);
    detector_click_probability(&|x| profile.density(x), detectors, config.faithful_half_width())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Scalar {
    pub value: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Series {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub name: String,
    pub inputs: BTreeMap<String, Value>,
    pub scalars: BTreeMap<String, Scalar>,
    pub series: BTreeMap<String, Series>,
}

impl ExperimentResult {
    pub fn new(name: &str) -> Self {
        Self { name: name.into(), inputs: BTreeMap::new(), scalars: BTreeMap::new(), series: BTreeMap::new() }
    }

    pub fn input(&mut self, key: &str, value: Value) {
        self.inputs.insert(key.into(), value);
    }

    pub fn scalar(&mut self, key: &str, value: f64, tolerance: f64) {
        self.scalars.insert(key.into(), Scalar { value, tolerance });
    }

    pub fn value(&self, key: &str) -> Option<f64> {
        self.scalars.get(key).map(|s| s.value)
    }
}

fn sigma(k: usize) -> OperatorMatrix {
    let (o, l, i) = (C64::from(0.0), C64::from(1.0), C64::new(0.0, 1.0));
    match k {
        1 => OperatorMatrix::from_rows(&[&[o, l], &[l, o]]),
        2 => OperatorMatrix::from_rows(&[&[o, -i], &[i, o]]),
        _ => OperatorMatrix::from_rows(&[&[l, o], &[o, -l]]),
    }
}

/// `shots` two-outcome measurements with `P(+1) = (1 + mean)/2`; returns the sample mean.
fn sample_pm(mean: f64, shots: u64, rng: &mut ChaCha8Rng) -> f64 {
    let p_plus = 0.5 * (1.0 + mean);
    let plus = (0..shots).filter(|_| rng.gen::<f64>() < p_plus).count() as f64;
    (2.0 * plus - shots as f64) / shots as f64
}

fn is_deterministic(alpha: f64) -> bool {
    let c = alpha.cos();
    (c.abs() - 1.0).abs() < 1e-12
}

/// Equator state `(|u0> + e^{i alpha}|u1>)/sqrt(2)` probed by sigma_1, with a
/// sigma_2 run to fix the sign of `sin alpha`.
pub fn qubit_phase_game(alphas: &[f64], shots: u64, seed: u64) -> Result<ExperimentResult> {
    if alphas.is_empty() {
        return Err(Error::InvalidParameter("no phase choices given".into()));
    }
    if shots == 0 {
        return Err(Error::InvalidParameter("shots must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut res = ExperimentResult::new("game");
    res.input("alphas", json!(alphas));
    res.input("shots", json!(shots));
    res.input("seed", json!(seed));
    let mut rows = Vec::with_capacity(alphas.len());
    for (idx, &alpha) in alphas.iter().enumerate() {
        let psi = qubit_state(FRAC_PI_2, alpha);
        let m1 = sigma(1).expectation(&psi).re;
        let m2 = sigma(2).expectation(&psi).re;
        let tag = format!("alpha[{idx}]");
        if is_deterministic(alpha) {
            let outcome = sample_pm(m1, 1, &mut rng);
            res.scalar(&format!("{tag}.single_shot"), outcome, 0.0);
            res.scalar(&format!("{tag}.sigma1_mean"), outcome, 0.0);
            rows.push(vec![alpha, outcome, 0.0, 0.0]);
            continue;
        }
        let mean1 = sample_pm(m1, shots, &mut rng);
        let mean2 = sample_pm(m2, shots, &mut rng);
        let se1 = ((1.0 - m1 * m1) / shots as f64).sqrt();
        let se2 = ((1.0 - m2 * m2) / shots as f64).sqrt();
        let estimate = mean2.signum() * mean1.clamp(-1.0, 1.0).acos();
        res.scalar(&format!("{tag}.sigma1_mean"), mean1, 3.0 * se1);
        res.scalar(&format!("{tag}.sigma1_stderr"), se1, 0.0);
        res.scalar(&format!("{tag}.sigma2_mean"), mean2, 3.0 * se2);
        res.scalar(&format!("{tag}.sigma2_sign"), mean2.signum(), 0.0);
        res.scalar(&format!("{tag}.alpha_estimate"), estimate, 3.0 * se1 / alpha.sin().abs().max(1e-12));
        rows.push(vec![alpha, mean1, se1, mean2]);
    }
    res.series.insert(
        "outcomes".into(),
        Series { columns: vec!["alpha".into(), "sigma1_mean".into(), "sigma1_stderr".into(), "sigma2_mean".into()], rows },
    );
    Ok(res)
}

/// Tabulated CDF on a uniform grid, sampled by inverse transform.
#[derive(Clone, Debug)]
pub struct TabulatedCdf {
    start: f64,
    step: f64,
    cumulative: Vec<f64>,
}

impl TabulatedCdf {
    pub fn new(density: &dyn Fn(f64) -> f64, start: f64, stop: f64, step: f64) -> Result<Self> {
        let n = ((stop - start) / step).round() as usize;
        if n == 0 {
            return Err(Error::InvalidParameter("empty CDF domain".into()));
        }
        let values: Vec<f64> = (0..=n).map(|i| density(start + i as f64 * step)).collect();
        let mut cumulative = Vec::with_capacity(n + 1);
        let mut acc = 0.0;
        cumulative.push(0.0);
        for w in values.windows(2) {
            acc += 0.5 * step * (w[0] + w[1]);
            cumulative.push(acc);
        }
        if !(acc > 0.0) {
            return Err(Error::Numerical("density has no mass on the sampling window".into()));
        }
        Ok(Self { start, step, cumulative })
    }

    pub fn total(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// Point at which the normalized CDF reaches `u` in `[0, 1)`.
    pub fn inverse(&self, u: f64) -> f64 {
        let target = u * self.total();
        let hi = self.cumulative.partition_point(|&c| c <= target).clamp(1, self.cumulative.len() - 1);
        let (c0, c1) = (self.cumulative[hi - 1], self.cumulative[hi]);
        let frac = if c1 > c0 { (target - c0) / (c1 - c0) } else { 0.0 };
        self.start + (hi as f64 - 1.0 + frac) * self.step
    }
}

/// Click probability of a centered window as `A + B cos(alpha)` for the
/// quarter-turned cat.
pub fn centered_click_model(separation: f64, half_width: f64) -> (f64, f64) {
    let norm = 1.0 / PI.sqrt();
    let a = adaptive_simpson(&|x| norm * (-x * x).exp(), -half_width, half_width, 1e-13);
    let b = adaptive_simpson(&|x| norm * (separation * x).cos() * (-x * x).exp(), -half_width, half_width, 1e-13);
    (a, b)
}

/// Standard setup: `L = 10`, `D = 256`, quarter turn, centered window of half-width 0.2.
pub fn cat_phase_estimation(alpha: f64, shots: u64, seed: u64) -> Result<ExperimentResult> {
    cat_phase_estimation_with(&CatConfig::standard(alpha)?, DEFAULT_HALF_WIDTH, shots, seed)
}

/// Samples positions of the quarter-turned cat, counts clicks of the window
/// `|x| <= half_width`, and inverts the click frequency to `cos(alpha)`.
pub fn cat_phase_estimation_with(config: &CatConfig, half_width: f64, shots: u64, seed: u64) -> Result<ExperimentResult> {
    if shots == 0 {
        return Err(Error::InvalidParameter("shots must be at least 1".into()));
    }
    let domain = config.faithful_half_width();
    if !(half_width > 0.0) || half_width > domain {
        return Err(Error::InvalidParameter(format!("window half-width {half_width} out of range")));
    }
    let state = rotate_cat(&cat_state(config)?, FRAC_PI_2);
    let profile = PositionProfile::new(&state);
    let cdf = TabulatedCdf::new(&|x| profile.density(x), -domain, domain, CDF_STEP)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clicks = (0..shots).filter(|_| cdf.inverse(rng.gen::<f64>()).abs() <= half_width).count();
    let f = clicks as f64 / shots as f64;
    let (a, b) = centered_click_model(config.separation(), half_width);
    let estimate = (f - a) / b;
    let p_model = a + b * config.relative_phase().cos();
    let stderr = (p_model * (1.0 - p_model) / shots as f64).sqrt() / b.abs();

    let mut res = ExperimentResult::new("cat_phase_estimation");
    res.input("alpha", json!(config.relative_phase()));
    res.input("separation", json!(config.separation()));
    res.input("fock_cutoff", json!(config.fock_cutoff()));
    res.input("half_width", json!(half_width));
    res.input("shots", json!(shots));
    res.input("seed", json!(seed));
    res.scalar("click_frequency", f, 3.0 * (p_model * (1.0 - p_model) / shots as f64).sqrt());
    res.scalar("click_probability_model", p_model, 1e-12);
    res.scalar("cos_alpha_estimate", estimate, 3.0 * stderr);
    res.scalar("cos_alpha_stderr", stderr, 0.0);
    res.scalar("sampled_mass", cdf.total(), 1e-6);
    Ok(res)
}

/// Full cat experiment: click probability of a detector array after time `t`,
/// with the closed-form value alongside when `t` is a quarter turn.
pub fn cat_experiment(config: &CatConfig, t: f64, detectors: &DetectorArray, grid: Option<&Grid>) -> Result<ExperimentResult> {
    let state = rotate_cat(&cat_state(config)?, t);
    let profile = PositionProfile::new(&state);
    let domain = config.faithful_half_width();
    let p = detector_click_probability(&|x| profile.density(x), detectors, domain)?;
    let overlap = branch_overlap(config)?;

    let mut res = ExperimentResult::new("cat");
    res.input("separation", json!(config.separation()));
    res.input("alpha", json!(config.relative_phase()));
    res.input("fock_cutoff", json!(config.fock_cutoff()));
    res.input("t", json!(t));
    res.input("detector_centers", json!(detectors.centers()));
    res.input("half_width", json!(detectors.half_width()));
    res.scalar("click_probability", p, DETECTOR_TOL);
    res.scalar("branch_overlap_analytic", overlap.analytic, 0.0);
    res.scalar("branch_overlap_truncated", overlap.truncated, 1e-20);
    if (t - FRAC_PI_2).abs() < 1e-6 {
        let (l, alpha) = (config.separation(), config.relative_phase());
        let closed = detector_click_probability(&|x| quarter_turn_density(l, alpha, x), detectors, domain)?;
        res.scalar("click_probability_closed_form", closed, DETECTOR_TOL);
    }
    if let Some(grid) = grid {
        let series = position_density(&state, grid, domain)?;
        let rows = series.x.iter().zip(&series.density).map(|(&x, &d)| vec![x, d]).collect();
        res.series.insert("density".into(), Series { columns: vec!["x".into(), "density".into()], rows });
    }
    Ok(res)
}

/// Reconstructs `cos(theta/2)|u0> + e^{i phi} sin(theta/2)|u1>` from the
/// coherent-pointer shifts of a weak sigma_1 measurement post-selected on `|u0>`.
pub fn weak_value_tomography(theta: f64, phi: f64, eps: f64, pointer_abs: f64, cutoff: usize) -> Result<ExperimentResult> {
    let target = qubit_state(theta, phi);
    let pair = PrePostPair::new(target.clone(), StateVector::basis(2, 0), sigma(1))?;
    let amp = CoherentAmplitude::new(C64::new(0.0, pointer_abs));
    let shift = coherent_pointer_shift(amp, &pair, eps, cutoff)?;
    let scale = eps * 2f64.sqrt() * pointer_abs;
    let w = C64::new(shift.position.simulated_re / scale, shift.momentum.simulated_re / scale);
    let rebuilt = StateVector::from_vec(vec![C64::from(1.0), w]).renormalize()?;
    let fidelity = rebuilt.inner(&target).norm_sqr();

    let mut res = ExperimentResult::new("weak_tomography");
    res.input("theta", json!(theta));
    res.input("phi", json!(phi));
    res.input("epsilon", json!(eps));
    res.input("pointer_abs", json!(pointer_abs));
    res.input("cutoff", json!(cutoff));
    res.scalar("weak_value_re", shift.weak_value_re, 1e-12);
    res.scalar("weak_value_im", shift.weak_value_im, 1e-12);
    res.scalar("estimated_re", w.re, 10.0 * eps);
    res.scalar("estimated_im", w.im, 10.0 * eps);
    res.scalar("fidelity", fidelity, 10.0 * eps);
    Ok(res)
}
